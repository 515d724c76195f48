#include <cctype>
#include <cmath>
#include <sstream>

#include "pings/data.hpp"
#include "pings/metrics.hpp"

namespace pings::metrics {

namespace {

bool word_byte(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double log_with(double x, const LexicalConfig& config) {
  return config.log_base > 0 ? std::log(x) / std::log(config.log_base) : std::log(x);
}

}  // namespace

const std::set<std::string>& stopwords() {
  static const std::set<std::string> words = [] {
    std::set<std::string> out;
    std::istringstream in{std::string(data::stopwords)};
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
      if (!line.empty() && line[0] != '#') out.insert(lower(line));
    }
    return out;
  }();
  return words;
}

bool is_stopword(std::string_view token) { return stopwords().count(lower(token)) > 0; }

std::vector<std::string> normalize_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (word_byte(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == '\'' && !cur.empty() && i + 1 < text.size() &&
               word_byte(static_cast<unsigned char>(text[i + 1]))) {
      cur.push_back('\'');
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double content_ratio(const std::vector<std::string>& utterances) {
  std::size_t all = 0, content = 0;
  for (const auto& u : utterances) {
    for (const auto& tok : normalize_tokens(u)) {
      ++all;
      content += !is_stopword(tok);
    }
  }
  return all == 0 ? 0.0 : static_cast<double>(content) / static_cast<double>(all);
}

std::vector<std::map<std::string, double>> tfidf(const std::vector<std::string>& utterances,
                                                 const LexicalConfig& config) {
  std::vector<std::map<std::string, int>> tf(utterances.size());
  std::map<std::string, int> df;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    for (auto& tok : normalize_tokens(utterances[i])) {
      if (!is_stopword(tok)) ++tf[i][tok];
    }
    for (const auto& [term, n] : tf[i]) ++df[term];
  }
  const double n = static_cast<double>(utterances.size());
  std::vector<std::map<std::string, double>> out(utterances.size());
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    for (const auto& [term, count] : tf[i]) {
      out[i][term] = count * log_with(n / df[term], config);
    }
  }
  return out;
}

double novelty(const std::vector<std::string>& utterances, const LexicalConfig& config) {
  if (utterances.empty()) return 0.0;
  double total = 0;
  for (const auto& weights : tfidf(utterances, config)) {
    double sum = 0;
    int positive = 0;
    for (const auto& [term, w] : weights) {
      if (w > 0) {
        sum += w;
        ++positive;
      }
    }
    if (positive > 0) total += sum / positive;
  }
  return total / static_cast<double>(utterances.size());
}

double lexical_density(const std::vector<std::string>& utterances, const LexicalConfig& config) {
  return 100.0 * content_ratio(utterances) * novelty(utterances, config);
}

LexicalRow lexical_metrics(const Transcript& t, const LexicalConfig& config) {
  std::vector<std::string> us;
  for (const auto& turn : t.turns) us.push_back(turn.text);
  LexicalRow row;
  row.instance_id = t.instance_id;
  row.turn_budget = t.budget.turn_budget;
  row.content_ratio = content_ratio(us);
  row.novelty = novelty(us, config);
  row.density = 100.0 * row.content_ratio * row.novelty;
  return row;
}

}  // namespace pings::metrics
