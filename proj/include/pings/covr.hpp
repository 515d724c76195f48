#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pings/core.hpp"

namespace pings::covr {

enum class Kind { kPerson, kAnimal, kObject, kWearable };

struct Category {
  std::string singular;
  std::string plural;
  Kind kind = Kind::kObject;
};

// Closed vocabulary shared by scenes, descriptors and question text.
struct Vocabulary {
  std::vector<Category> categories;
  std::vector<std::string> attributes;
  std::vector<std::string> relations;  // on, in, near, wearing, watching, holding
  std::vector<std::string> scene_types;
  std::map<Kind, std::vector<std::string>> attributes_by_kind;

  const Category& category(std::string_view name) const;
  bool has_relation(std::string_view r) const;
  // Whether `subject rel object` is allowed between the two categories.
  bool relation_allowed(std::string_view rel, const Category& subject,
                        const Category& object) const;
};

const Vocabulary& default_vocabulary();

struct Relation {
  std::string name;
  int target = 0;  // 0-based entity index, always lower than the owner's
  friend bool operator==(const Relation&, const Relation&) = default;
};

struct Entity {
  std::string category;
  std::set<std::string> attributes;
  std::vector<Relation> relations;
  friend bool operator==(const Entity&, const Entity&) = default;
};

struct Scene {
  std::string scene_type;
  std::vector<Entity> entities;

  // Throws unless every relation points to an earlier entity and all words
  // come from `vocab`.
  void validate(const Vocabulary& vocab = default_vocabulary()) const;
  friend bool operator==(const Scene&, const Scene&) = default;
};

struct SceneSize {
  int min_entities = 3;
  int max_entities = 8;
};

Scene generate_scene(std::uint64_t seed, const Vocabulary& vocab = default_vocabulary(),
                     SceneSize size = {});

// "This is a bedroom. It contains:" then one numbered line per entity, e.g.
// "2. a yellow bowl, on 1".
std::string render_scene(const Scene& scene, const Vocabulary& vocab = default_vocabulary());

struct Level {
  std::string category;
  std::set<std::string> attributes;
  friend bool operator==(const Level&, const Level&) = default;
};

// levels[0] is the head; relations[i] links levels[i] to levels[i + 1].
// An optional scene type closes the chain ("that is in a bedroom").
struct Descriptor {
  std::vector<Level> levels;
  std::vector<std::string> relations;
  std::optional<std::string> scene_type;

  int depth() const;  // relation links including the scene link
  void validate(const Vocabulary& vocab = default_vocabulary()) const;
  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

inline constexpr int kMaxDepth = 3;

// Indices of entities matching the head of `d` through the whole chain.
std::set<int> eval_descriptor(const Descriptor& d, const Scene& s);

enum class QueryForm { kExistsEither, kExistsBoth, kCountImages };

struct Query {
  QueryForm form = QueryForm::kExistsEither;
  Descriptor first;
  std::optional<Descriptor> second;  // ExistsBoth only
  // ExistsBoth only: the two referents must come from different scenes.
  bool strict = false;
  friend bool operator==(const Query&, const Query&) = default;
};

std::string_view to_string(QueryForm f);
QueryForm query_form_from_string(std::string_view s);

// "True", "False", or "0".."2".
std::string eval_query(const Query& q, const Scene& a, const Scene& b);

std::string realize_descriptor(const Descriptor& d, bool plural_head,
                               const Vocabulary& vocab = default_vocabulary());
std::string realize_question(const Query& q, const Vocabulary& vocab = default_vocabulary());

// Text after the last "ANSWER:", trimmed; True/False case-folded and number
// words mapped to digits.
std::optional<std::string> parse_answer(std::string_view utterance);

struct CovrInstance {
  Scene scene_a;
  Scene scene_b;
  Query query;
  std::string surface_text;
  std::string gold;
  std::uint64_t seed = 0;
  std::vector<std::string> attachments;  // optional: left image, right image
};

// Target answer stratum -> weight. Keys: "True", "False", "0", "1", "2".
using AnswerBalance = std::map<std::string, double>;
AnswerBalance default_balance();

struct CovrConfig {
  AnswerBalance balance = default_balance();
  SceneSize scene_size;
  bool strict = false;
  int max_attempts = 5000;
};

CovrInstance generate_instance(std::uint64_t seed, const CovrConfig& config = {});

bool score(const CovrInstance& instance, std::string_view parsed_answer);

}  // namespace pings::covr
