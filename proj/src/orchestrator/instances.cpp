#include "pings/orchestrator.hpp"

namespace pings::orchestrator {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string("instance record lacks \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("bad instance field \"") + key + "\": " + e.what());
  }
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return field<T>(j, key);
}

Json db_json(const namegame::Database& db) {
  Json out = Json::array();
  for (const auto& r : db) out.push_back(r.fields);
  return out;
}

namegame::Database db_from_json(const Json& j) {
  namegame::Database db;
  for (const auto& row : j) {
    namegame::PersonRecord r{row.get<std::vector<std::string>>()};
    if (r.fields.size() != namegame::kFields) throw InvalidArgument("name-game row needs 5 fields");
    db.push_back(std::move(r));
  }
  return db;
}

}  // namespace

// ---- chess ---------------------------------------------------------------

Json to_json(const chess::ChessInstance& x) {
  Json moves = Json::array();
  for (const auto& m : x.move_list) moves.push_back(m.uci());
  return Json{{"board_a", x.board_a.fen()},
              {"board_b", x.board_b.fen()},
              {"earlier", std::string(to_string(x.earlier))},
              {"moves", std::move(moves)},
              {"gap_plies", x.gap_plies},
              {"seed", x.seed}};
}

chess::ChessInstance chess_instance_from_json(const Json& j) {
  chess::ChessInstance x;
  x.board_a = chess::Board::from_fen(field<std::string>(j, "board_a"));
  x.board_b = chess::Board::from_fen(field<std::string>(j, "board_b"));
  x.earlier = speaker_from_string(field<std::string>(j, "earlier"));
  chess::Board b = chess::Board::initial();
  for (const auto& uci : field_or<std::vector<std::string>>(j, "moves", {})) {
    const chess::Move m = chess::parse_move(b, uci);
    x.move_list.push_back(m);
    b = chess::apply_move(b, m);
  }
  x.gap_plies = field_or<int>(j, "gap_plies", 0);
  x.seed = field_or<std::uint64_t>(j, "seed", 0);
  return x;
}

// ---- name-game -------------------------------------------------------------

Json to_json(const namegame::NameGameInstance& x) {
  return Json{{"schema", x.schema_id},    {"size", x.size},
              {"db_a", db_json(x.db_a)},  {"db_b", db_json(x.db_b)},
              {"common_row_a", x.common_row_a}, {"common_row_b", x.common_row_b},
              {"seed", x.seed}};
}

namegame::NameGameInstance namegame_instance_from_json(const Json& j) {
  namegame::NameGameInstance x;
  x.schema_id = field<std::string>(j, "schema");
  namegame::schema_by_id(x.schema_id);  // throws on unknown ids
  x.db_a = db_from_json(field<Json>(j, "db_a"));
  x.db_b = db_from_json(field<Json>(j, "db_b"));
  x.size = field_or<int>(j, "size", static_cast<int>(x.db_a.size()));
  x.common_row_a = field<int>(j, "common_row_a");
  x.common_row_b = field<int>(j, "common_row_b");
  x.seed = field_or<std::uint64_t>(j, "seed", 0);
  const auto in_range = [](int row, const namegame::Database& db) {
    return row >= 1 && row <= static_cast<int>(db.size());
  };
  if (x.db_a.size() != x.db_b.size() || static_cast<int>(x.db_a.size()) != x.size ||
      !in_range(x.common_row_a, x.db_a) || !in_range(x.common_row_b, x.db_b) ||
      x.db_a[static_cast<std::size_t>(x.common_row_a - 1)] !=
          x.db_b[static_cast<std::size_t>(x.common_row_b - 1)]) {
    throw InvalidArgument("inconsistent name-game record");
  }
  return x;
}

// ---- selection -------------------------------------------------------------

Json to_json(const selection::SelectionInstance& x) {
  Json cands = Json::array();
  for (const auto& c : x.candidates) cands.push_back(c.values);
  Json j{{"space", x.space_id},
         {"target", x.target.values},
         {"candidates", std::move(cands)},
         {"gold", x.gold ? Json(*x.gold) : Json(nullptr)},
         {"seed", x.seed}};
  if (!x.attachments.empty()) j["attachments"] = x.attachments;
  return j;
}

selection::SelectionInstance selection_instance_from_json(const Json& j) {
  selection::SelectionInstance x;
  x.space_id = field<std::string>(j, "space");
  const selection::FeatureSpace space = selection::space_by_id(x.space_id);
  const auto check = [&](const selection::Item& item) {
    if (item.values.size() != space.size()) throw InvalidArgument("item has wrong arity");
    for (std::size_t f = 0; f < space.size(); ++f) {
      const int v = item.values[f];
      if (v < 0 || v >= static_cast<int>(space.features[f].values.size())) {
        throw InvalidArgument("item value out of range");
      }
    }
  };
  x.target.values = field<std::vector<int>>(j, "target");
  check(x.target);
  for (const auto& c : field<Json>(j, "candidates")) {
    x.candidates.push_back(selection::Item{c.get<std::vector<int>>()});
    check(x.candidates.back());
  }
  if (j.contains("gold") && !j["gold"].is_null()) x.gold = j["gold"].get<int>();
  x.seed = field_or<std::uint64_t>(j, "seed", 0);
  x.attachments = field_or<std::vector<std::string>>(j, "attachments", {});
  if (x.gold ? (*x.gold < 0 || *x.gold >= static_cast<int>(x.candidates.size()) ||
                x.candidates[static_cast<std::size_t>(*x.gold)] != x.target)
             : false) {
    throw InvalidArgument("selection gold does not point at the target");
  }
  if (!x.attachments.empty() && x.attachments.size() != x.candidates.size() + 1) {
    throw InvalidArgument("selection attachments need target plus one per candidate");
  }
  return x;
}

// ---- covr ------------------------------------------------------------------

Json to_json(const covr::Scene& x) {
  Json ents = Json::array();
  for (const auto& e : x.entities) {
    Json rels = Json::array();
    for (const auto& r : e.relations) rels.push_back({{"name", r.name}, {"target", r.target}});
    ents.push_back({{"category", e.category},
                    {"attributes", std::vector<std::string>(e.attributes.begin(),
                                                            e.attributes.end())},
                    {"relations", std::move(rels)}});
  }
  return Json{{"type", x.scene_type}, {"entities", std::move(ents)}};
}

covr::Scene scene_from_json(const Json& j) {
  covr::Scene s;
  s.scene_type = field<std::string>(j, "type");
  for (const auto& e : field<Json>(j, "entities")) {
    covr::Entity ent;
    ent.category = field<std::string>(e, "category");
    const auto attrs = field_or<std::vector<std::string>>(e, "attributes", {});
    ent.attributes = {attrs.begin(), attrs.end()};
    for (const auto& r : field_or<Json>(e, "relations", Json::array())) {
      ent.relations.push_back({field<std::string>(r, "name"), field<int>(r, "target")});
    }
    s.entities.push_back(std::move(ent));
  }
  s.validate();
  return s;
}

Json to_json(const covr::Descriptor& x) {
  Json levels = Json::array();
  for (const auto& l : x.levels) {
    levels.push_back(
        {{"category", l.category},
         {"attributes", std::vector<std::string>(l.attributes.begin(), l.attributes.end())}});
  }
  return Json{{"levels", std::move(levels)},
              {"relations", x.relations},
              {"scene_type", x.scene_type ? Json(*x.scene_type) : Json(nullptr)}};
}

covr::Descriptor descriptor_from_json(const Json& j) {
  covr::Descriptor d;
  for (const auto& l : field<Json>(j, "levels")) {
    const auto attrs = field_or<std::vector<std::string>>(l, "attributes", {});
    d.levels.push_back({field<std::string>(l, "category"), {attrs.begin(), attrs.end()}});
  }
  d.relations = field_or<std::vector<std::string>>(j, "relations", {});
  if (j.contains("scene_type") && !j["scene_type"].is_null()) {
    d.scene_type = j["scene_type"].get<std::string>();
  }
  d.validate();
  return d;
}

Json to_json(const covr::Query& x) {
  Json j{{"form", std::string(to_string(x.form))}, {"first", to_json(x.first)}};
  j["second"] = x.second ? to_json(*x.second) : Json(nullptr);
  j["strict"] = x.strict;
  return j;
}

covr::Query query_from_json(const Json& j) {
  covr::Query q;
  q.form = covr::query_form_from_string(field<std::string>(j, "form"));
  q.first = descriptor_from_json(field<Json>(j, "first"));
  if (j.contains("second") && !j["second"].is_null()) q.second = descriptor_from_json(j["second"]);
  q.strict = field_or<bool>(j, "strict", false);
  if ((q.form == covr::QueryForm::kExistsBoth) != q.second.has_value()) {
    throw InvalidArgument("only exists_both queries take a second descriptor");
  }
  return q;
}

Json to_json(const covr::CovrInstance& x) {
  Json j{{"scene_a", to_json(x.scene_a)}, {"scene_b", to_json(x.scene_b)},
         {"query", to_json(x.query)},     {"question", x.surface_text},
         {"gold", x.gold},                {"seed", x.seed}};
  if (!x.attachments.empty()) j["attachments"] = x.attachments;
  return j;
}

covr::CovrInstance covr_instance_from_json(const Json& j) {
  covr::CovrInstance x;
  x.scene_a = scene_from_json(field<Json>(j, "scene_a"));
  x.scene_b = scene_from_json(field<Json>(j, "scene_b"));
  x.query = query_from_json(field<Json>(j, "query"));
  x.surface_text = field_or<std::string>(j, "question", covr::realize_question(x.query));
  x.gold = field<std::string>(j, "gold");
  x.seed = field_or<std::uint64_t>(j, "seed", 0);
  x.attachments = field_or<std::vector<std::string>>(j, "attachments", {});
  if (!x.attachments.empty() && x.attachments.size() != 2) {
    throw InvalidArgument("covr attachments need a left and a right image");
  }
  if (covr::eval_query(x.query, x.scene_a, x.scene_b) != x.gold) {
    throw InvalidArgument("covr gold disagrees with the scenes");
  }
  return x;
}

}  // namespace pings::orchestrator
