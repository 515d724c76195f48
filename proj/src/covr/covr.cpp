#include "pings/covr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "pings/rng.hpp"

namespace pings::covr {

namespace {

Vocabulary make_default_vocabulary() {
  Vocabulary v;
  v.categories = {
      {"woman", "women", Kind::kPerson},       {"man", "men", Kind::kPerson},
      {"child", "children", Kind::kPerson},    {"dog", "dogs", Kind::kAnimal},
      {"cat", "cats", Kind::kAnimal},          {"helmet", "helmets", Kind::kWearable},
      {"hat", "hats", Kind::kWearable},        {"scarf", "scarves", Kind::kWearable},
      {"table", "tables", Kind::kObject},      {"chair", "chairs", Kind::kObject},
      {"bowl", "bowls", Kind::kObject},        {"cup", "cups", Kind::kObject},
      {"plate", "plates", Kind::kObject},      {"paper towel", "paper towels", Kind::kObject},
      {"laptop", "laptops", Kind::kObject},    {"book", "books", Kind::kObject},
      {"lamp", "lamps", Kind::kObject},        {"bottle", "bottles", Kind::kObject},
      {"bag", "bags", Kind::kObject},          {"shelf", "shelves", Kind::kObject},
  };
  v.attributes = {"red",    "yellow", "blue",  "green", "white", "black",   "wooden", "metal",
                  "plastic", "glass", "small", "large", "old",   "young",   "striped"};
  v.relations = {"on", "in", "near", "wearing", "watching", "holding"};
  v.scene_types = {"bedroom", "cafeteria", "living room", "kitchen",
                   "office",  "park",      "street",      "classroom"};
  v.attributes_by_kind = {
      {Kind::kPerson, {"young", "old", "small", "large"}},
      {Kind::kAnimal, {"small", "large", "white", "black", "striped", "old", "young"}},
      {Kind::kWearable, {"red", "yellow", "blue", "green", "white", "black", "striped"}},
      {Kind::kObject,
       {"red", "yellow", "blue", "green", "white", "black", "wooden", "metal", "plastic",
        "glass", "small", "large", "old"}},
  };
  return v;
}

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string with_article(const std::string& phrase) {
  const bool vowel = !phrase.empty() && std::string_view("aeiou").find(phrase[0]) !=
                                            std::string_view::npos;
  return (vowel ? "an " : "a ") + phrase;
}

std::string noun_phrase(const Level& level, bool plural, const Vocabulary& vocab) {
  std::string out;
  for (const auto& a : level.attributes) out += a + " ";
  const Category& c = vocab.category(level.category);
  out += plural ? c.plural : c.singular;
  return out;
}

std::set<std::string> pick_attributes(Rng& rng, const std::vector<std::string>& pool, int n) {
  std::set<std::string> out;
  while (static_cast<int>(out.size()) < n) out.insert(rng.choice(pool));
  return out;
}

// Chain that starts at entity `e` of `s` and follows real relations.
Descriptor descriptor_from_scene(const Scene& s, int e, Rng& rng) {
  Descriptor d;
  int cur = e;
  while (true) {
    const Entity& ent = s.entities[static_cast<std::size_t>(cur)];
    Level level{ent.category, {}};
    if (!ent.attributes.empty() && rng.bernoulli(0.4)) {
      std::vector<std::string> attrs(ent.attributes.begin(), ent.attributes.end());
      level.attributes.insert(rng.choice(attrs));
    }
    d.levels.push_back(std::move(level));
    if (d.levels.size() >= 3 || ent.relations.empty() || !rng.bernoulli(0.6)) break;
    const Relation& r = rng.choice(ent.relations);
    d.relations.push_back(r.name);
    cur = r.target;
  }
  if (d.depth() < kMaxDepth && rng.bernoulli(0.4)) d.scene_type = s.scene_type;
  return d;
}

Descriptor random_descriptor(const Vocabulary& vocab, Rng& rng) {
  Descriptor d;
  const Category& head = rng.choice(vocab.categories);
  Level level{head.singular, {}};
  if (rng.bernoulli(0.3)) level.attributes.insert(rng.choice(vocab.attributes_by_kind.at(head.kind)));
  d.levels.push_back(std::move(level));
  if (rng.bernoulli(0.5)) {
    for (int tries = 0; tries < 20; ++tries) {
      const auto& rel = rng.choice(vocab.relations);
      const Category& obj = rng.choice(vocab.categories);
      if (vocab.relation_allowed(rel, head, obj)) {
        d.relations.push_back(rel);
        d.levels.push_back(Level{obj.singular, {}});
        break;
      }
    }
  }
  if (rng.bernoulli(0.4)) d.scene_type = rng.choice(vocab.scene_types);
  return d;
}

Descriptor sample_descriptor(const Scene& a, const Scene& b, double from_scene,
                             const Vocabulary& vocab, Rng& rng) {
  const Scene& s = rng.bernoulli(0.5) ? a : b;
  if (!s.entities.empty() && rng.bernoulli(from_scene)) {
    const int e = static_cast<int>(rng.uniform(s.entities.size()));
    return descriptor_from_scene(s, e, rng);
  }
  return random_descriptor(vocab, rng);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

const Category& Vocabulary::category(std::string_view name) const {
  for (const auto& c : categories) {
    if (c.singular == name) return c;
  }
  throw InvalidArgument("unknown category: " + std::string(name));
}

bool Vocabulary::has_relation(std::string_view r) const { return contains(relations, r); }

bool Vocabulary::relation_allowed(std::string_view rel, const Category& subject,
                                  const Category& object) const {
  const bool animate = subject.kind == Kind::kPerson || subject.kind == Kind::kAnimal;
  if (rel == "on" || rel == "in") return object.kind == Kind::kObject && subject.kind != Kind::kPerson;
  if (rel == "near") return true;
  if (rel == "wearing") return subject.kind == Kind::kPerson && object.kind == Kind::kWearable;
  if (rel == "watching") return animate;
  if (rel == "holding") {
    return subject.kind == Kind::kPerson &&
           (object.kind == Kind::kObject || object.kind == Kind::kWearable);
  }
  return false;
}

const Vocabulary& default_vocabulary() {
  static const Vocabulary v = make_default_vocabulary();
  return v;
}

void Scene::validate(const Vocabulary& vocab) const {
  if (!contains(vocab.scene_types, scene_type)) {
    throw InvalidArgument("unknown scene type: " + scene_type);
  }
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const Entity& e = entities[i];
    vocab.category(e.category);
    for (const auto& a : e.attributes) {
      if (!contains(vocab.attributes, a)) throw InvalidArgument("unknown attribute: " + a);
    }
    for (const auto& r : e.relations) {
      if (!vocab.has_relation(r.name)) throw InvalidArgument("unknown relation: " + r.name);
      if (r.target < 0 || static_cast<std::size_t>(r.target) >= i) {
        throw InvalidArgument("relation target must be an earlier entity");
      }
    }
  }
}

Scene generate_scene(std::uint64_t seed, const Vocabulary& vocab, SceneSize size) {
  if (size.min_entities < 0 || size.max_entities < size.min_entities) {
    throw InvalidArgument("bad scene size range");
  }
  if (vocab.categories.empty() || vocab.scene_types.empty()) {
    throw InvalidArgument("vocabulary is empty");
  }
  Rng rng(seed);
  Scene s;
  s.scene_type = rng.choice(vocab.scene_types);
  const int n = rng.uniform_int(size.min_entities, size.max_entities);
  for (int i = 0; i < n; ++i) {
    Entity e;
    const Category& cat = rng.choice(vocab.categories);
    e.category = cat.singular;
    const auto& pool = vocab.attributes_by_kind.at(cat.kind);
    e.attributes = pick_attributes(rng, pool, rng.uniform_int(0, 2));
    const int links = i == 0 ? 0 : rng.uniform_int(0, std::min(2, i));
    for (int l = 0, tries = 0; l < links && tries < 10; ++tries) {
      const int target = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(i)));
      const auto& rel = rng.choice(vocab.relations);
      const Relation r{rel, target};
      if (!vocab.relation_allowed(rel, cat,
                                  vocab.category(s.entities[static_cast<std::size_t>(target)]
                                                     .category)) ||
          std::find(e.relations.begin(), e.relations.end(), r) != e.relations.end()) {
        continue;
      }
      e.relations.push_back(r);
      ++l;
    }
    s.entities.push_back(std::move(e));
  }
  s.validate(vocab);
  return s;
}

std::string render_scene(const Scene& scene, const Vocabulary& vocab) {
  std::string out = "This is " + with_article(scene.scene_type) + ". It contains:";
  for (std::size_t i = 0; i < scene.entities.size(); ++i) {
    const Entity& e = scene.entities[i];
    out += "\n" + std::to_string(i + 1) + ". " +
           with_article(noun_phrase(Level{e.category, e.attributes}, false, vocab));
    for (const auto& r : e.relations) out += ", " + r.name + " " + std::to_string(r.target + 1);
  }
  return out;
}

int Descriptor::depth() const {
  return static_cast<int>(relations.size()) + (scene_type ? 1 : 0);
}

void Descriptor::validate(const Vocabulary& vocab) const {
  if (levels.empty() || levels.size() > 3) throw InvalidArgument("descriptor needs 1-3 levels");
  if (relations.size() + 1 != levels.size()) {
    throw InvalidArgument("descriptor needs one relation per link");
  }
  if (depth() > kMaxDepth) throw InvalidArgument("descriptor chain too deep");
  for (const auto& l : levels) {
    vocab.category(l.category);
    for (const auto& a : l.attributes) {
      if (!contains(vocab.attributes, a)) throw InvalidArgument("unknown attribute: " + a);
    }
  }
  for (const auto& r : relations) {
    if (!vocab.has_relation(r)) throw InvalidArgument("unknown relation: " + r);
  }
  if (scene_type && !contains(vocab.scene_types, *scene_type)) {
    throw InvalidArgument("unknown scene type: " + *scene_type);
  }
}

std::set<int> eval_descriptor(const Descriptor& d, const Scene& s) {
  if (d.levels.empty()) return {};
  if (d.scene_type && *d.scene_type != s.scene_type) return {};
  const auto matches_level = [&](const Entity& e, const Level& l) {
    return e.category == l.category &&
           std::includes(e.attributes.begin(), e.attributes.end(), l.attributes.begin(),
                         l.attributes.end());
  };
  // Work backwards: sat holds entities satisfying levels[i..].
  std::set<int> sat;
  for (int i = static_cast<int>(d.levels.size()) - 1; i >= 0; --i) {
    std::set<int> next;
    for (std::size_t e = 0; e < s.entities.size(); ++e) {
      const Entity& ent = s.entities[e];
      if (!matches_level(ent, d.levels[static_cast<std::size_t>(i)])) continue;
      bool ok = static_cast<std::size_t>(i) + 1 == d.levels.size();
      for (std::size_t r = 0; !ok && r < ent.relations.size(); ++r) {
        ok = ent.relations[r].name == d.relations[static_cast<std::size_t>(i)] &&
             sat.count(ent.relations[r].target) > 0;
      }
      if (ok) next.insert(static_cast<int>(e));
    }
    sat = std::move(next);
  }
  return sat;
}

std::string_view to_string(QueryForm f) {
  switch (f) {
    case QueryForm::kExistsEither:
      return "exists_either";
    case QueryForm::kExistsBoth:
      return "exists_both";
    case QueryForm::kCountImages:
      break;
  }
  return "count_images";
}

QueryForm query_form_from_string(std::string_view s) {
  if (s == "exists_either") return QueryForm::kExistsEither;
  if (s == "exists_both") return QueryForm::kExistsBoth;
  if (s == "count_images") return QueryForm::kCountImages;
  throw InvalidArgument("unknown query form: " + std::string(s));
}

std::string eval_query(const Query& q, const Scene& a, const Scene& b) {
  const bool first_a = !eval_descriptor(q.first, a).empty();
  const bool first_b = !eval_descriptor(q.first, b).empty();
  switch (q.form) {
    case QueryForm::kExistsEither:
      return first_a || first_b ? "True" : "False";
    case QueryForm::kExistsBoth: {
      if (!q.second) throw InvalidArgument("ExistsBoth needs two descriptors");
      const bool second_a = !eval_descriptor(*q.second, a).empty();
      const bool second_b = !eval_descriptor(*q.second, b).empty();
      const bool yes = q.strict ? (first_a && second_b) || (first_b && second_a)
                                : (first_a || first_b) && (second_a || second_b);
      return yes ? "True" : "False";
    }
    case QueryForm::kCountImages:
      break;
  }
  return std::to_string(static_cast<int>(first_a) + static_cast<int>(first_b));
}

std::string realize_descriptor(const Descriptor& d, bool plural_head, const Vocabulary& vocab) {
  d.validate(vocab);
  std::string out = plural_head ? noun_phrase(d.levels[0], true, vocab)
                                : with_article(noun_phrase(d.levels[0], false, vocab));
  const auto link = [&](bool first) {
    return std::string(first && plural_head ? " that are " : " that is ");
  };
  for (std::size_t i = 0; i < d.relations.size(); ++i) {
    const std::string np = noun_phrase(d.levels[i + 1], false, vocab);
    out += link(i == 0) + d.relations[i] + " " + (plural_head ? np : with_article(np));
  }
  if (d.scene_type) {
    out += link(d.relations.empty()) + "in " +
           (plural_head ? *d.scene_type : with_article(*d.scene_type));
  }
  return out;
}

std::string realize_question(const Query& q, const Vocabulary& vocab) {
  switch (q.form) {
    case QueryForm::kExistsEither:
      return "Is there " + realize_descriptor(q.first, false, vocab) + "?";
    case QueryForm::kExistsBoth:
      if (!q.second) throw InvalidArgument("ExistsBoth needs two descriptors");
      return "Is there both " + realize_descriptor(q.first, false, vocab) + " and " +
             realize_descriptor(*q.second, false, vocab) + "?";
    case QueryForm::kCountImages:
      break;
  }
  return "How many images contain at least 1 " + realize_descriptor(q.first, true, vocab) + "?";
}

std::optional<std::string> parse_answer(std::string_view utterance) {
  const std::string low = lower(std::string(utterance));
  const auto pos = low.rfind("answer:");
  if (pos == std::string::npos) return std::nullopt;
  std::string_view rest = utterance.substr(pos + 7);
  rest = rest.substr(0, rest.find('\n'));
  std::string ans = trim(rest);
  while (!ans.empty() && std::string_view(".!,;'\"`").find(ans.back()) != std::string_view::npos) {
    ans.pop_back();
  }
  while (!ans.empty() && std::string_view("'\"`").find(ans.front()) != std::string_view::npos) {
    ans.erase(ans.begin());
  }
  ans = trim(ans);
  if (ans.empty()) return std::nullopt;
  const std::string key = lower(ans);
  if (key == "true") return "True";
  if (key == "false") return "False";
  static const char* kWords[] = {"zero", "one", "two",   "three", "four", "five",
                                 "six",  "seven", "eight", "nine", "ten"};
  for (int i = 0; i <= 10; ++i) {
    if (key == kWords[i]) return std::to_string(i);
  }
  return ans;
}

AnswerBalance default_balance() {
  return {{"True", 0.3}, {"False", 0.3}, {"0", 0.1}, {"1", 0.15}, {"2", 0.15}};
}

CovrInstance generate_instance(std::uint64_t seed, const CovrConfig& config) {
  double total = 0;
  for (const auto& [k, w] : config.balance) {
    if (k != "True" && k != "False" && k != "0" && k != "1" && k != "2") {
      throw InvalidArgument("unknown answer stratum: " + k);
    }
    if (w < 0) throw InvalidArgument("negative balance weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-6) throw InvalidArgument("balance weights must sum to 1");
  if (config.max_attempts < 1) throw InvalidArgument("max_attempts must be positive");

  const Vocabulary& vocab = default_vocabulary();
  Rng pick(derive_seed(seed, "stratum"));
  const double u = pick.uniform01();
  std::string stratum;
  double acc = 0;
  for (const auto& [k, w] : config.balance) {
    if (w <= 0) continue;
    stratum = k;
    acc += w;
    if (u < acc) break;
  }
  const bool counting = stratum != "True" && stratum != "False";

  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    const auto base = derive_seed(seed, static_cast<std::uint64_t>(attempt));
    CovrInstance inst;
    inst.seed = seed;
    inst.scene_a = generate_scene(derive_seed(base, "a"), vocab, config.scene_size);
    inst.scene_b = generate_scene(derive_seed(base, "b"), vocab, config.scene_size);
    Rng rng(derive_seed(base, "query"));
    Query q;
    if (counting) {
      q.form = QueryForm::kCountImages;
      q.first = sample_descriptor(inst.scene_a, inst.scene_b, 0.6, vocab, rng);
    } else if (rng.bernoulli(0.4)) {
      q.form = QueryForm::kExistsEither;
      q.first = sample_descriptor(inst.scene_a, inst.scene_b, 0.5, vocab, rng);
    } else {
      q.form = QueryForm::kExistsBoth;
      q.strict = config.strict;
      q.first = sample_descriptor(inst.scene_a, inst.scene_b, 0.5, vocab, rng);
      q.second = sample_descriptor(inst.scene_a, inst.scene_b, 0.5, vocab, rng);
      if (*q.second == q.first) continue;
    }
    inst.gold = eval_query(q, inst.scene_a, inst.scene_b);
    if (inst.gold != stratum) continue;
    inst.query = std::move(q);
    inst.surface_text = realize_question(inst.query, vocab);
    return inst;
  }
  throw Error("could not generate a COVR instance in stratum " + stratum);
}

bool score(const CovrInstance& instance, std::string_view parsed_answer) {
  return parsed_answer == instance.gold;
}

}  // namespace pings::covr
