#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pings/agents.hpp"
#include "pings/chess.hpp"
#include "pings/core.hpp"
#include "pings/covr.hpp"
#include "pings/namegame.hpp"
#include "pings/selection.hpp"
#include "pings/transcript.hpp"

namespace pings::orchestrator {

// Everything the dialogue loop needs to know about one game instance.
class Game {
 public:
  virtual ~Game() = default;

  virtual std::string task() const = 0;
  virtual std::string instance_id() const = 0;
  virtual Json instance_json() const = 0;

  // Text placed before the "# CONVERSATION" block, without trailing newlines.
  virtual std::string instructions(Speaker recipient, const BudgetConfig& budget) const = 0;
  // Replaces the turns-left line and label on the dialogue's last turn.
  virtual std::string final_block(Speaker recipient) const = 0;
  // Chess labels end in "YOU: ", the other games in "YOU:".
  virtual bool label_trailing_space() const { return false; }

  virtual bool eligible(Speaker s) const = 0;
  // Normalized answer, or nothing when the utterance holds no answer.
  virtual std::optional<std::string> parse(std::string_view utterance) const = 0;
  virtual bool score(Speaker by, const std::string& parsed) const = 0;

  virtual agents::View view(Speaker s) const = 0;
  virtual std::vector<std::string> attachments(Speaker) const { return {}; }
};

// Task ids accepted by make_game / generate_game.
const std::vector<std::string>& task_ids();

std::unique_ptr<Game> make_chess_game(chess::ChessInstance instance, std::string id = {});
std::unique_ptr<Game> make_namegame_game(namegame::NameGameInstance instance, std::string id = {});
// `task` is "md3" or "tangram". When present, instance.attachments holds the
// target first and then one entry per candidate.
std::unique_ptr<Game> make_selection_game(selection::SelectionInstance instance,
                                          std::string task, std::string id = {});
std::unique_ptr<Game> make_covr_game(covr::CovrInstance instance, std::string id = {});

// Rebuilds a game from instance_json() output. Throws InvalidArgument on
// unknown tasks or malformed records.
std::unique_ptr<Game> game_from_json(std::string_view task, const Json& instance,
                                     std::string id = {});

// Fresh instance for the task from one seed; the id is "<task>-<seed hex>".
std::unique_ptr<Game> generate_game(std::string_view task, std::uint64_t seed);

// Instance (de)serialization, shared with game_from_json.
Json to_json(const chess::ChessInstance& x);
chess::ChessInstance chess_instance_from_json(const Json& j);
Json to_json(const namegame::NameGameInstance& x);
namegame::NameGameInstance namegame_instance_from_json(const Json& j);
Json to_json(const selection::SelectionInstance& x);
selection::SelectionInstance selection_instance_from_json(const Json& j);
Json to_json(const covr::Scene& x);
covr::Scene scene_from_json(const Json& j);
Json to_json(const covr::Descriptor& x);
covr::Descriptor descriptor_from_json(const Json& j);
Json to_json(const covr::Query& x);
covr::Query query_from_json(const Json& j);
Json to_json(const covr::CovrInstance& x);
covr::CovrInstance covr_instance_from_json(const Json& j);

// ---- prompts -------------------------------------------------------------

inline constexpr std::string_view kPenultimateWarning =
    "Note that the next turn is the final turn of our conversation, so make sure I have the "
    "information I need.";

// "i. ME: ..." for the partner's turns, "i. YOU: ..." for the recipient's.
std::string render_history(const std::vector<Turn>& history, Speaker recipient);

// Full prompt for the speaker of `turn_index` (1-based, at most t).
std::string build_prompt(const Game& game, const std::vector<Turn>& history, int turn_index,
                         const BudgetConfig& budget);

// ---- dialogues -------------------------------------------------------------

struct DialogueOptions {
  bool record_timing = false;  // fills Transcript::elapsed_ms
};

// Runs one dialogue. Agent failures end it early with outcome.aborted set
// and the message in outcome.error; `failure`, when given, receives the
// exception.
Transcript run_dialogue(const Game& game, agents::Agent& alice, agents::Agent& bob,
                        const BudgetConfig& budget, std::uint64_t seed,
                        const DialogueOptions& options = {},
                        std::exception_ptr* failure = nullptr);

// Replays a stored transcript against its own instance and budget.
Transcript replay_transcript(const Transcript& t);

// ---- sweeps ----------------------------------------------------------------

struct SweepConfig {
  std::string task = "chess";
  std::vector<int> turns{2, 4, 8, 16};
  int tokens = 256;
  std::string alice = "scripted";  // "scripted" or "remote"
  std::string bob = "scripted";
  int n = 100;
  std::uint64_t seed = 0;
  int parallelism = 1;
  std::string out;  // transcript file; empty means the caller decides
  Json remote = Json::object();  // RemoteAgentConfig fields

  void validate() const;
  static SweepConfig from_json(const Json& j);
  Json to_json() const;
};

agents::RemoteAgentConfig remote_config_from_json(const Json& j);

// Seed of the i-th instance. Independent of t, which pairs instances across
// turn budgets.
std::uint64_t instance_seed(const SweepConfig& config, int index);
// Seed handed to the dialogue for instance `index` at turn budget `t`.
std::uint64_t dialogue_seed(const SweepConfig& config, int index, int t);

using AgentFactory =
    std::function<std::shared_ptr<agents::Agent>(const std::string& spec, Speaker speaker)>;
// "scripted" and "remote"; remote agents share one client per factory.
AgentFactory default_agent_factory(const SweepConfig& config);

struct SweepResult {
  std::vector<Transcript> transcripts;  // ordered by t, then instance index
  int aborted = 0;
  // Set when a credential was rejected; remaining dialogues were skipped.
  std::optional<std::string> auth_failure;
};

struct SweepOptions {
  std::ostream* progress = nullptr;  // one line per finished t
  DialogueOptions dialogue;
};

SweepResult run_sweep(const SweepConfig& config, const AgentFactory& factory,
                      const SweepOptions& options = {});
SweepResult run_sweep(const SweepConfig& config);

}  // namespace pings::orchestrator
