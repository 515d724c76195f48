#include "pings/transcript.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace pings {

namespace {

Json optional_string(const std::optional<std::string>& s) {
  return s ? Json(*s) : Json(nullptr);
}

void require(const Json& j, const char* key) {
  if (!j.contains(key)) {
    throw InvalidArgument(std::string("transcript record missing field: ") + key);
  }
}

}  // namespace

Json to_json(const BudgetConfig& b) {
  return Json{{"tokens_per_player", b.tokens_per_player},
              {"turn_budget", b.turn_budget},
              {"allowance", b.allowance},
              {"stated_word_limit", b.stated_word_limit}};
}

BudgetConfig budget_from_json(const Json& j) {
  BudgetConfig b;
  b.tokens_per_player = j.at("tokens_per_player").get<int>();
  b.turn_budget = j.at("turn_budget").get<int>();
  b.allowance = j.at("allowance").get<int>();
  b.stated_word_limit = j.at("stated_word_limit").get<int>();
  return b;
}

Json to_json(const Turn& t) {
  return Json{{"index", t.index},
              {"speaker", to_string(t.speaker)},
              {"text", t.text},
              {"token_count", t.token_count},
              {"truncated", t.truncated}};
}

Json to_json(const Outcome& o) {
  Json tokens{{"Alice", o.tokens_used.alice}, {"Bob", o.tokens_used.bob}};
  return Json{
      {"raw_answer", o.raw_answer},
      {"parsed_answer", optional_string(o.parsed_answer)},
      {"answering_player", o.answering_player
                               ? Json(to_string(*o.answering_player))
                               : Json(nullptr)},
      {"correct", o.correct ? Json(*o.correct) : Json(nullptr)},
      {"turns_used", o.turns_used},
      {"tokens_used", tokens},
      {"unparseable", o.unparseable},
      {"aborted", o.aborted},
      {"error", o.error}};
}

Json to_json(const Transcript& t) {
  Json turns = Json::array();
  for (const auto& turn : t.turns) turns.push_back(to_json(turn));
  return Json{{"schema_version", t.schema_version},
              {"task", t.task},
              {"instance_id", t.instance_id},
              {"seed", t.seed},
              {"budget", to_json(t.budget)},
              {"agents", {{"Alice", t.agents.alice}, {"Bob", t.agents.bob}}},
              {"turns", turns},
              {"outcome", to_json(t.outcome)},
              {"metadata", {{"elapsed_ms", t.elapsed_ms}}},
              {"instance", t.instance}};
}

Transcript transcript_from_json(const Json& j) {
  for (const char* key : {"schema_version", "task", "instance_id", "seed",
                          "budget", "agents", "turns", "outcome"}) {
    require(j, key);
  }
  Transcript t;
  t.schema_version = j.at("schema_version").get<int>();
  if (t.schema_version != kTranscriptSchemaVersion) {
    throw InvalidArgument("unsupported transcript schema_version " +
                          std::to_string(t.schema_version));
  }
  t.task = j.at("task").get<std::string>();
  t.instance_id = j.at("instance_id").get<std::string>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.budget = budget_from_json(j.at("budget"));
  t.agents.alice = j.at("agents").at("Alice").get<std::string>();
  t.agents.bob = j.at("agents").at("Bob").get<std::string>();
  for (const auto& jt : j.at("turns")) {
    Turn turn;
    turn.index = jt.at("index").get<int>();
    turn.speaker = speaker_from_string(jt.at("speaker").get<std::string>());
    turn.text = jt.at("text").get<std::string>();
    turn.token_count = jt.at("token_count").get<int>();
    turn.truncated = jt.at("truncated").get<bool>();
    t.turns.push_back(std::move(turn));
  }
  const Json& o = j.at("outcome");
  t.outcome.raw_answer = o.at("raw_answer").get<std::string>();
  if (!o.at("parsed_answer").is_null()) {
    t.outcome.parsed_answer = o.at("parsed_answer").get<std::string>();
  }
  if (!o.at("answering_player").is_null()) {
    t.outcome.answering_player =
        speaker_from_string(o.at("answering_player").get<std::string>());
  }
  if (!o.at("correct").is_null()) t.outcome.correct = o.at("correct").get<bool>();
  t.outcome.turns_used = o.at("turns_used").get<int>();
  t.outcome.tokens_used.alice = o.at("tokens_used").at("Alice").get<int>();
  t.outcome.tokens_used.bob = o.at("tokens_used").at("Bob").get<int>();
  t.outcome.unparseable = o.at("unparseable").get<bool>();
  t.outcome.aborted = o.at("aborted").get<bool>();
  t.outcome.error = o.at("error").get<std::string>();
  if (static_cast<int>(t.turns.size()) != t.outcome.turns_used) {
    throw InvalidArgument("transcript turns_used disagrees with the turn list");
  }
  if (j.contains("metadata")) {
    t.elapsed_ms = j.at("metadata").value("elapsed_ms", std::int64_t{0});
  }
  if (j.contains("instance")) t.instance = j.at("instance");
  return t;
}

std::string serialize(const Transcript& t) { return to_json(t).dump(); }

Transcript deserialize(std::string_view line) {
  return transcript_from_json(Json::parse(line));
}

std::vector<Transcript> read_transcripts(std::istream& in) {
  std::vector<Transcript> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(deserialize(line));
  }
  return out;
}

void write_transcripts(std::ostream& out, const std::vector<Transcript>& ts) {
  for (const auto& t : ts) out << serialize(t) << '\n';
}

}  // namespace pings
