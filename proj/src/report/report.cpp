#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "pings/report.hpp"

namespace pings::report {

std::pair<double, double> wilson_interval(int successes, int n, double z) {
  if (n <= 0) throw InvalidArgument("Wilson interval needs n >= 1");
  if (successes < 0 || successes > n) throw InvalidArgument("successes out of range");
  const double nn = n;
  const double p = successes / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

std::pair<double, double> bootstrap_interval(const std::vector<int>& outcomes,
                                             const AggregateOptions& o, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, outcomes.size() - 1);
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(o.bootstrap_samples));
  for (int b = 0; b < o.bootstrap_samples; ++b) {
    int s = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) s += outcomes[pick(rng)];
    means.push_back(static_cast<double>(s) / static_cast<double>(outcomes.size()));
  }
  std::sort(means.begin(), means.end());
  const auto at = [&](double q) {
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(means.size() - 1) + 0.5);
    return means[idx];
  };
  return {at(0.025), at(0.975)};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

std::vector<AggregateRow> aggregate(const std::vector<Transcript>& ts,
                                    const AggregateOptions& options) {
  using Key = std::tuple<std::string, std::string, std::string, int, int>;
  std::map<Key, std::vector<const Transcript*>> groups;
  for (const auto& t : ts) {
    if (t.schema_version != ts.front().schema_version) {
      throw InvalidArgument("transcripts mix schema versions " +
                            std::to_string(ts.front().schema_version) + " and " +
                            std::to_string(t.schema_version));
    }
    groups[{t.task, t.agents.alice, t.agents.bob, t.budget.tokens_per_player,
            t.budget.turn_budget}]
        .push_back(&t);
  }
  std::vector<AggregateRow> rows;
  for (const auto& [key, members] : groups) {
    AggregateRow r;
    std::tie(r.task, r.alice, r.bob, r.T, r.t) = key;
    std::vector<int> outcomes;
    double turns = 0, alice = 0, bob = 0;
    int unparseable = 0;
    for (const Transcript* t : members) {
      if (t->outcome.aborted || !t->outcome.correct) {
        ++r.aborted;
        continue;
      }
      outcomes.push_back(*t->outcome.correct ? 1 : 0);
      turns += t->outcome.turns_used;
      for (const auto& turn : t->turns) {
        (turn.speaker == Speaker::kAlice ? alice : bob) += turn.token_count;
      }
      unparseable += t->outcome.unparseable;
    }
    r.n = static_cast<int>(outcomes.size());
    if (r.n == 0) continue;
    for (int o : outcomes) r.correct += o;
    r.accuracy = static_cast<double>(r.correct) / r.n;
    if (options.interval == Interval::kWilson) {
      std::tie(r.ci_low, r.ci_high) = wilson_interval(r.correct, r.n);
    } else {
      const std::string tag = r.task + "|" + r.alice + "|" + r.bob + "|" + std::to_string(r.T) +
                              "|" + std::to_string(r.t);
      std::tie(r.ci_low, r.ci_high) =
          bootstrap_interval(outcomes, options, derive_seed(options.bootstrap_seed, tag));
      r.ci_low = std::min(r.ci_low, r.accuracy);
      r.ci_high = std::max(r.ci_high, r.accuracy);
    }
    r.mean_turns_used = turns / r.n;
    r.mean_tokens_alice = alice / r.n;
    r.mean_tokens_bob = bob / r.n;
    r.unparseable_rate = static_cast<double>(unparseable) / r.n;
    rows.push_back(std::move(r));
  }
  return rows;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "markdown") return Format::kMarkdown;
  if (name == "plot-series") return Format::kPlotSeries;
  throw InvalidArgument("unknown report format: " + std::string(name));
}

std::string emit_report(const std::vector<AggregateRow>& rows, Format format) {
  static const std::vector<std::string> columns = {
      "task",    "alice",  "bob",         "T",           "t",
      "n",       "correct", "accuracy",   "ci_low",      "ci_high",
      "mean_turns_used", "mean_tokens_alice", "mean_tokens_bob", "unparseable_rate", "aborted"};
  const auto cells = [](const AggregateRow& r, int d) {
    return std::vector<std::string>{r.task,
                                    r.alice,
                                    r.bob,
                                    std::to_string(r.T),
                                    std::to_string(r.t),
                                    std::to_string(r.n),
                                    std::to_string(r.correct),
                                    fixed(r.accuracy, d),
                                    fixed(r.ci_low, d),
                                    fixed(r.ci_high, d),
                                    fixed(r.mean_turns_used, d),
                                    fixed(r.mean_tokens_alice, d),
                                    fixed(r.mean_tokens_bob, d),
                                    fixed(r.unparseable_rate, d),
                                    std::to_string(r.aborted)};
  };
  std::ostringstream out;
  switch (format) {
    case Format::kCsv: {
      for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
      out << "\n";
      for (const auto& r : rows) {
        const auto c = cells(r, 6);
        for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << csv_field(c[i]);
        out << "\n";
      }
      break;
    }
    case Format::kMarkdown: {
      out << "|";
      for (const auto& c : columns) out << " " << c << " |";
      out << "\n|";
      for (std::size_t i = 0; i < columns.size(); ++i) out << (i < 3 ? "---|" : "---:|");
      out << "\n";
      for (const auto& r : rows) {
        out << "|";
        for (const auto& c : cells(r, 3)) out << " " << c << " |";
        out << "\n";
      }
      break;
    }
    case Format::kPlotSeries: {
      Json series = Json::array();
      std::map<std::tuple<std::string, std::string, std::string, int>, std::size_t> index;
      for (const auto& r : rows) {
        const auto key = std::make_tuple(r.task, r.alice, r.bob, r.T);
        auto it = index.find(key);
        if (it == index.end()) {
          it = index.emplace(key, series.size()).first;
          series.push_back({{"task", r.task},
                            {"alice", r.alice},
                            {"bob", r.bob},
                            {"T", r.T},
                            {"x", Json::array()},
                            {"y", Json::array()},
                            {"ylo", Json::array()},
                            {"yhi", Json::array()}});
        }
        Json& s = series[it->second];
        s["x"].push_back(r.t);
        s["y"].push_back(r.accuracy);
        s["ylo"].push_back(r.ci_low);
        s["yhi"].push_back(r.ci_high);
      }
      out << Json{{"x_label", "turn budget t"}, {"x_scale", "log2"}, {"y_label", "accuracy"},
                  {"series", series}}
                 .dump(2)
          << "\n";
      break;
    }
  }
  return out.str();
}

std::string lexical_csv(const std::vector<metrics::LexicalRow>& rows) {
  std::ostringstream out;
  out << "instance_id,t,content_ratio,novelty,density\n";
  for (const auto& r : rows) {
    out << csv_field(r.instance_id) << "," << r.turn_budget << "," << fixed(r.content_ratio, 6)
        << "," << fixed(r.novelty, 6) << "," << fixed(r.density, 6) << "\n";
  }
  return out.str();
}

std::string centering_csv(const std::vector<metrics::CenteringRow>& rows) {
  std::ostringstream out;
  out << "instance_id,t,start,continue,retain,smooth_shift,rough_shift,cs\n";
  for (const auto& r : rows) {
    out << csv_field(r.instance_id) << "," << r.turn_budget;
    for (int c : r.counts) out << "," << c;
    out << "," << (r.cs ? fixed(*r.cs, 6) : "") << "\n";
  }
  return out.str();
}

std::string proposal_csv(const std::vector<std::pair<int, metrics::ProposalStats>>& by_t) {
  std::ostringstream out;
  out << "t,dialogues,dialogues_with_proposal,candidate_turns,proposals,excluded,"
         "turn_rate,dialogue_rate,correct_accepted,correct_rejected,incorrect_accepted,"
         "incorrect_rejected\n";
  for (const auto& [t, s] : by_t) {
    out << t << "," << s.dialogues << "," << s.dialogues_with_proposal << "," << s.candidate_turns
        << "," << s.proposals << "," << s.excluded << "," << fixed(s.proposal_turn_rate(), 6)
        << "," << fixed(s.dialogue_rate(), 6) << "," << s.table[1][1] << "," << s.table[1][0]
        << "," << s.table[0][1] << "," << s.table[0][0] << "\n";
  }
  return out.str();
}

}  // namespace pings::report
