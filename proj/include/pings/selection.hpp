#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pings/core.hpp"

namespace pings::selection {

struct Feature {
  std::string name;                 // one token, no ':' or ';'
  std::vector<std::string> values;  // one token each
};

struct FeatureSpace {
  std::string id;
  std::vector<Feature> features;

  std::size_t size() const { return features.size(); }
  // Index of the feature called `name`, if any.
  std::optional<int> find(std::string_view name) const;
  void validate() const;
};

// motif, stripes, symmetry, fill, count
const FeatureSpace& default_space();
// "f01".."fNN", each over values "a", "b", ...; id "synthetic-<n>x<v>".
FeatureSpace synthetic_space(int n_features, int n_values);
// "default" or a synthetic id.
FeatureSpace space_by_id(std::string_view id);

// Value index per feature.
struct Item {
  std::vector<int> values;
  friend bool operator==(const Item&, const Item&) = default;
  friend bool operator<(const Item& a, const Item& b) { return a.values < b.values; }
};

struct SelectionInstance {
  std::string space_id;
  Item target;
  std::vector<Item> candidates;
  std::optional<int> gold;  // empty means no candidate matches
  std::uint64_t seed = 0;
  std::vector<std::string> attachments;  // opaque, carried through untouched
};

struct SelectionConfig {
  int k = 4;
  double p_nomatch = 0.25;
  int min_confusability = 2;  // distractors share at least this many features
  int max_differences = 0;    // cap on features a distractor changes; 0 = none
};

SelectionInstance generate_instance(std::uint64_t seed, const SelectionConfig& config,
                                    const FeatureSpace& space = default_space());
SelectionInstance generate_instance(std::uint64_t seed, int k, double p_nomatch,
                                    int min_confusability);

// "name: value; name: value; ..." in feature order.
std::string render_item(const Item& item, const FeatureSpace& space);
// Same format restricted to `features`, in the given order.
std::string render_features(const Item& item, const FeatureSpace& space,
                            const std::vector<int>& features);
// Every "name: value" pair found in `text` that names a real feature and
// value. Later statements about a feature override earlier ones.
std::map<int, int> parse_feature_statements(std::string_view text, const FeatureSpace& space);
bool consistent(const Item& item, const std::map<int, int>& heard);

struct SelectionAnswer {
  enum class Kind { kIndex, kNoMatch, kOutOfRange };
  Kind kind = Kind::kNoMatch;
  int index = -1;  // the parsed number for kIndex and kOutOfRange

  static SelectionAnswer image(int i) { return {Kind::kIndex, i}; }
  static SelectionAnswer no_match() { return {Kind::kNoMatch, -1}; }
  friend bool operator==(const SelectionAnswer&, const SelectionAnswer&) = default;
};

// Last "ANSWER: Image i" or "ANSWER: No match", case-insensitive. Indices
// outside [0, k) come back as kOutOfRange.
std::optional<SelectionAnswer> parse_answer(std::string_view utterance, int k);
std::string to_string(const SelectionAnswer& answer);
bool score(const SelectionInstance& instance, const SelectionAnswer& answer);

}  // namespace pings::selection
