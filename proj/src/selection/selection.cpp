#include "pings/selection.hpp"

#include <algorithm>
#include <climits>
#include <regex>
#include <set>

#include "pings/rng.hpp"

namespace pings::selection {

namespace {

bool bad_token(const std::string& s) {
  return s.empty() || s.find_first_of(":; \t\n") != std::string::npos;
}

FeatureSpace make_default() {
  FeatureSpace s;
  s.id = "default";
  s.features = {
      {"motif", {"star", "circle", "triangle", "square", "hexagon", "spiral"}},
      {"stripes", {"none", "horizontal", "vertical", "diagonal"}},
      {"symmetry", {"none", "mirror", "radial", "rotational"}},
      {"fill", {"solid", "hollow", "hatched", "dotted"}},
      {"count", {"1", "2", "3", "4", "5"}},
  };
  s.validate();
  return s;
}

}  // namespace

std::optional<int> FeatureSpace::find(std::string_view name) const {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

void FeatureSpace::validate() const {
  if (features.empty()) throw InvalidArgument("feature space is empty");
  std::set<std::string> names;
  for (const auto& f : features) {
    if (bad_token(f.name) || !names.insert(f.name).second) {
      throw InvalidArgument("bad feature name: " + f.name);
    }
    if (f.values.size() < 2) throw InvalidArgument("feature needs two values: " + f.name);
    std::set<std::string> values;
    for (const auto& v : f.values) {
      if (bad_token(v) || !values.insert(v).second) throw InvalidArgument("bad value: " + v);
    }
  }
}

const FeatureSpace& default_space() {
  static const FeatureSpace s = make_default();
  return s;
}

FeatureSpace synthetic_space(int n_features, int n_values) {
  if (n_features < 1 || n_features > 999 || n_values < 2 || n_values > 26) {
    throw InvalidArgument("synthetic space needs 1..999 features and 2..26 values");
  }
  FeatureSpace s;
  s.id = "synthetic-" + std::to_string(n_features) + "x" + std::to_string(n_values);
  const int width = n_features < 100 ? 2 : 3;
  for (int i = 1; i <= n_features; ++i) {
    std::string num = std::to_string(i);
    num.insert(0, static_cast<std::size_t>(width) - num.size(), '0');
    Feature f{"f" + num, {}};
    for (int v = 0; v < n_values; ++v) f.values.emplace_back(1, static_cast<char>('a' + v));
    s.features.push_back(std::move(f));
  }
  s.validate();
  return s;
}

FeatureSpace space_by_id(std::string_view id) {
  if (id == "default") return default_space();
  static const std::regex kSynthetic(R"(synthetic-(\d{1,3})x(\d{1,2}))");
  std::cmatch m;
  if (std::regex_match(id.begin(), id.end(), m, kSynthetic)) {
    return synthetic_space(std::stoi(m[1].str()), std::stoi(m[2].str()));
  }
  throw InvalidArgument("unknown feature space: " + std::string(id));
}

SelectionInstance generate_instance(std::uint64_t seed, const SelectionConfig& config,
                                    const FeatureSpace& space) {
  if (config.k != 4 && config.k != 6) throw InvalidArgument("k must be 4 or 6");
  if (!(config.p_nomatch >= 0.0 && config.p_nomatch <= 1.0)) {
    throw InvalidArgument("p_nomatch must be in [0, 1]");
  }
  const int n = static_cast<int>(space.size());
  if (config.min_confusability < 0 || config.min_confusability >= n) {
    throw InvalidArgument("min_confusability must be in [0, feature count)");
  }
  if (config.max_differences < 0) throw InvalidArgument("max_differences must be >= 0");
  int max_diff = n - config.min_confusability;
  if (config.max_differences > 0) max_diff = std::min(max_diff, config.max_differences);

  Rng rng(seed);
  SelectionInstance inst;
  inst.space_id = space.id;
  inst.seed = seed;
  for (const auto& f : space.features) {
    inst.target.values.push_back(static_cast<int>(rng.uniform(f.values.size())));
  }
  const bool no_match = rng.bernoulli(config.p_nomatch);
  const int distractors = no_match ? config.k : config.k - 1;

  std::set<Item> seen{inst.target};
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  int failures = 0;
  while (static_cast<int>(inst.candidates.size()) < distractors) {
    Item d = inst.target;
    const int changes = rng.uniform_int(1, max_diff);
    rng.shuffle(order);
    for (int c = 0; c < changes; ++c) {
      const auto f = static_cast<std::size_t>(order[static_cast<std::size_t>(c)]);
      const auto domain = space.features[f].values.size();
      // shift by 1..domain-1 so the value always changes
      d.values[f] = static_cast<int>((static_cast<std::uint64_t>(d.values[f]) + 1 +
                                      rng.uniform(domain - 1)) %
                                     domain);
    }
    if (seen.insert(d).second) {
      inst.candidates.push_back(std::move(d));
    } else if (++failures > 1000) {
      throw Error("feature space too small for " + std::to_string(config.k) +
                  " distinct confusable items");
    }
  }
  if (!no_match) {
    const int pos = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(config.k)));
    inst.candidates.insert(inst.candidates.begin() + pos, inst.target);
    inst.gold = pos;
  }
  return inst;
}

SelectionInstance generate_instance(std::uint64_t seed, int k, double p_nomatch,
                                    int min_confusability) {
  return generate_instance(seed, SelectionConfig{k, p_nomatch, min_confusability, 0});
}

std::string render_features(const Item& item, const FeatureSpace& space,
                            const std::vector<int>& features) {
  std::string out;
  for (int f : features) {
    const auto& feat = space.features.at(static_cast<std::size_t>(f));
    if (!out.empty()) out += "; ";
    out += feat.name + ": " + feat.values.at(static_cast<std::size_t>(item.values.at(
                                  static_cast<std::size_t>(f))));
  }
  return out;
}

std::string render_item(const Item& item, const FeatureSpace& space) {
  if (item.values.size() != space.size()) throw InvalidArgument("item does not fit space");
  std::vector<int> all(space.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return render_features(item, space, all);
}

std::map<int, int> parse_feature_statements(std::string_view text, const FeatureSpace& space) {
  static const std::regex kPair(R"(([^\s:;,]+):\s*([^\s:;,.]+))");
  std::map<int, int> out;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kPair); it != std::sregex_iterator();
       ++it) {
    const auto f = space.find((*it)[1].str());
    if (!f) continue;
    const auto& values = space.features[static_cast<std::size_t>(*f)].values;
    const auto v = std::find(values.begin(), values.end(), (*it)[2].str());
    if (v != values.end()) out[*f] = static_cast<int>(v - values.begin());
  }
  return out;
}

bool consistent(const Item& item, const std::map<int, int>& heard) {
  for (const auto& [f, v] : heard) {
    if (item.values.at(static_cast<std::size_t>(f)) != v) return false;
  }
  return true;
}

std::optional<SelectionAnswer> parse_answer(std::string_view utterance, int k) {
  static const std::regex kPattern(R"(answer:\s*(?:image\s+(\d+)|(no\s+match)))",
                                   std::regex::icase);
  const std::string text(utterance);
  std::optional<SelectionAnswer> result;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kPattern);
       it != std::sregex_iterator(); ++it) {
    if ((*it)[2].matched) {
      result = SelectionAnswer::no_match();
      continue;
    }
    long long value = 0;
    for (char c : (*it)[1].str()) {
      value = std::min<long long>(value * 10 + (c - '0'), INT_MAX);
    }
    const int i = static_cast<int>(value);
    result = i < k ? SelectionAnswer::image(i)
                   : SelectionAnswer{SelectionAnswer::Kind::kOutOfRange, i};
  }
  return result;
}

std::string to_string(const SelectionAnswer& answer) {
  switch (answer.kind) {
    case SelectionAnswer::Kind::kIndex:
    case SelectionAnswer::Kind::kOutOfRange:
      return "Image " + std::to_string(answer.index);
    case SelectionAnswer::Kind::kNoMatch:
      break;
  }
  return "No match";
}

bool score(const SelectionInstance& instance, const SelectionAnswer& answer) {
  switch (answer.kind) {
    case SelectionAnswer::Kind::kIndex:
      return instance.gold.has_value() && *instance.gold == answer.index;
    case SelectionAnswer::Kind::kNoMatch:
      return !instance.gold.has_value();
    case SelectionAnswer::Kind::kOutOfRange:
      break;
  }
  return false;
}

}  // namespace pings::selection
