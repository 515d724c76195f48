#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pings/chess.hpp"
#include "pings/core.hpp"
#include "pings/covr.hpp"
#include "pings/namegame.hpp"
#include "pings/rng.hpp"
#include "pings/selection.hpp"
#include "pings/transcript.hpp"

namespace pings::agents {

// Private information handed to scripted agents. Remote agents see only the
// prompt.
struct ChessView {
  chess::Board board;
};
struct NameGameView {
  namegame::Database db;
  std::string schema_id;
};
struct SelectionDescriberView {
  selection::Item target;
  std::string space_id;
};
struct SelectionGuesserView {
  std::vector<selection::Item> candidates;
  std::string space_id;
};
struct CovrView {
  covr::Scene scene;
  covr::Query query;
};

using View = std::variant<std::monostate, ChessView, NameGameView, SelectionDescriberView,
                          SelectionGuesserView, CovrView>;

struct AgentContext {
  std::string prompt;  // exactly what a remote model receives
  View view;
  Speaker speaker = Speaker::kAlice;
  int turn_index = 1;   // the turn being produced, 1-based
  int turn_budget = 2;  // t
  int turns_left = 2;   // t minus turns already taken
  std::vector<Turn> history;
  int allowance = 0;
  int stated_word_limit = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> attachments;

  // No later turn belongs to this speaker.
  bool last_own_turn() const { return turn_index + 2 > turn_budget; }
};

class AgentError : public Error {
 public:
  using Error::Error;
};
// Replay agent asked for a turn it does not have.
class Exhausted : public AgentError {
 public:
  using AgentError::AgentError;
};
class RemoteError : public AgentError {
 public:
  using AgentError::AgentError;
};
class AuthError : public RemoteError {
 public:
  using RemoteError::RemoteError;
};
class RateLimited : public RemoteError {
 public:
  using RemoteError::RemoteError;
};
class Timeout : public RemoteError {
 public:
  using RemoteError::RemoteError;
};
class ServerError : public RemoteError {
 public:
  using RemoteError::RemoteError;
};
class MalformedResponse : public RemoteError {
 public:
  MalformedResponse(const std::string& what, std::string raw_body)
      : RemoteError(what), raw_body_(std::move(raw_body)) {}
  const std::string& raw_body() const { return raw_body_; }

 private:
  std::string raw_body_;
};

// Implementations must tolerate concurrent calls for different dialogues.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string id() const = 0;
  virtual std::string next_utterance(const AgentContext& ctx) = 0;
};

// ---- scripted policies -----------------------------------------------------

// Piece-count policy. Turn 1-2 exchange "My board: W white, B black; pawn
// ranks X and Y."; once both summaries are known the player answers. Fewer
// pieces means a later board; white then black pawn advancement break ties.
std::string chess_summary_text(const chess::BoardSummary& s);
std::optional<chess::BoardSummary> parse_chess_summary(std::string_view text);
std::string scripted_chess(const ChessView& view, const AgentContext& ctx);

// Guess-one baseline: one unproposed own record per turn, exact 5-field
// check of the partner's proposal, random unproposed row on the final turn.
std::string guess_one_proposal(const namegame::PersonRecord& r);
std::optional<namegame::PersonRecord> parse_guess_one_proposal(std::string_view text);
std::string scripted_guess_one(const NameGameView& view, const AgentContext& ctx);

// Feature bisection pair for the selection game.
std::string scripted_describer(const SelectionDescriberView& view, const AgentContext& ctx);
std::string scripted_guesser(const SelectionGuesserView& view, const AgentContext& ctx);

// Alice reports which descriptors match her scene; Bob combines and answers.
std::string scripted_covr(const CovrView& view, const AgentContext& ctx);

// Dispatches on the view type. Deterministic in the context alone.
class ScriptedAgent : public Agent {
 public:
  std::string id() const override { return "scripted"; }
  std::string next_utterance(const AgentContext& ctx) override;
};

// Emits the recorded turns of one speaker, looked up by turn index.
class ReplayAgent : public Agent {
 public:
  ReplayAgent(const Transcript& transcript, Speaker speaker);
  std::string id() const override { return id_; }
  std::string next_utterance(const AgentContext& ctx) override;

 private:
  std::string id_;
  std::vector<std::pair<int, std::string>> turns_;
};

// ---- remote chat-completions client ------------------------------------------

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::milliseconds timeout{60000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Throws Timeout when the exchange times out and RemoteError for other
// transport failures.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

// HTTP(S) transport backed by cpp-httplib.
std::unique_ptr<Transport> make_http_transport();

struct RemoteAgentConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model;
  std::string provider = "openai";  // openai | gemini-openai | generic
  double temperature = 1.0;
  bool thinking = false;
  std::string api_key_env = "PINGS_API_KEY";
  std::chrono::milliseconds timeout{60000};
  int max_retries = 4;
  int max_in_flight = 4;
  std::chrono::milliseconds backoff_base{500};
  std::chrono::milliseconds backoff_max{30000};

  void validate() const;
};

struct ChatMessage {
  std::string role;
  std::string content;
};

struct CallResult {
  std::string text;
  int retries = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Extra request fields for the thinking flag, per provider.
Json thinking_fields(const std::string& provider, bool thinking);
Json build_request_body(const RemoteAgentConfig& config, const std::vector<ChatMessage>& messages);

class RemoteClient {
 public:
  static constexpr std::ptrdiff_t kMaxInFlight = 256;

  RemoteClient(RemoteAgentConfig config, std::shared_ptr<Transport> transport,
               Sleeper sleeper = {}, std::uint64_t jitter_seed = 0);

  // Thread-safe. At most config.max_in_flight calls reach the transport at
  // once.
  CallResult complete(const std::vector<ChatMessage>& messages);

  int total_retries() const { return total_retries_.load(); }
  const RemoteAgentConfig& config() const { return config_; }

 private:
  std::chrono::milliseconds backoff(int attempt);

  RemoteAgentConfig config_;
  std::shared_ptr<Transport> transport_;
  Sleeper sleeper_;
  std::counting_semaphore<kMaxInFlight> slots_;
  std::mutex rng_mutex_;
  Rng jitter_;
  std::atomic<int> total_retries_{0};
};

class RemoteAgent : public Agent {
 public:
  explicit RemoteAgent(std::shared_ptr<RemoteClient> client) : client_(std::move(client)) {}
  std::string id() const override;
  std::string next_utterance(const AgentContext& ctx) override;

 private:
  std::shared_ptr<RemoteClient> client_;
};

}  // namespace pings::agents
