#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pings/core.hpp"

namespace pings {

using Json = nlohmann::ordered_json;

inline constexpr int kTranscriptSchemaVersion = 1;

struct AgentIds {
  std::string alice;
  std::string bob;
  friend bool operator==(const AgentIds&, const AgentIds&) = default;
};

struct Transcript {
  int schema_version = kTranscriptSchemaVersion;
  std::string task;
  std::string instance_id;
  std::uint64_t seed = 0;
  BudgetConfig budget;
  AgentIds agents;
  std::vector<Turn> turns;
  Outcome outcome;
  // Wall-clock duration; left at zero unless timing is requested so that
  // sweeps stay byte-reproducible.
  std::int64_t elapsed_ms = 0;
  // Serialized game instance, used to re-score the dialogue later.
  Json instance;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

Json to_json(const BudgetConfig& b);
BudgetConfig budget_from_json(const Json& j);
Json to_json(const Turn& t);
Json to_json(const Outcome& o);
Json to_json(const Transcript& t);
Transcript transcript_from_json(const Json& j);

// One record per line, UTF-8.
std::string serialize(const Transcript& t);
Transcript deserialize(std::string_view line);

std::vector<Transcript> read_transcripts(std::istream& in);
void write_transcripts(std::ostream& out, const std::vector<Transcript>& ts);

}  // namespace pings
