#include <doctest.h>

#include <set>
#include <sstream>

#include "fixture_games.hpp"
#include "fixture_loader.hpp"
#include "pings/orchestrator.hpp"

using namespace pings;
using namespace pings::orchestrator;
using namespace pings::testing;

namespace {

// Says `text` on every turn.
class FixedAgent : public agents::Agent {
 public:
  explicit FixedAgent(std::string text) : text_(std::move(text)) {}
  std::string id() const override { return "fixed"; }
  std::string next_utterance(const agents::AgentContext&) override { return text_; }

 private:
  std::string text_;
};

class FailingAgent : public agents::Agent {
 public:
  explicit FailingAgent(int fail_at) : fail_at_(fail_at) {}
  std::string id() const override { return "failing"; }
  std::string next_utterance(const agents::AgentContext& ctx) override {
    if (ctx.turn_index >= fail_at_) throw agents::Timeout("gave up");
    return "still here";
  }

 private:
  int fail_at_;
};

}  // namespace

TEST_CASE("chess prompt matches the reference example byte for byte") {
  const auto game = chess_fixture_game();
  const std::vector<Turn> history = {
      turn(1,
           "Hello Bob. On my board, all black pieces are on their starting squares. White has "
           "moved the d-pawn to d4. No other white pieces")};
  const std::string prompt = build_prompt(*game, history, 2, BudgetConfig::make(256, 8));
  CHECK(prompt == testing::read_fixture("prompt_chess.txt"));
}

TEST_CASE("name-game final-turn prompt matches the reference example") {
  const auto game = namegame_fixture_game();
  const std::vector<Turn> history = {
      turn(1,
           "I know Chloe from Microsoft who loves crimson and Charles Mingus, based in Paris. Do "
           "you know her? Or someone else with matching details?"),
      turn(2,
           "I don't know Chloe. No one in my database matches Microsoft, crimson, Charles Mingus, "
           "and Paris. Do you know anyone else with those traits?"),
      turn(3,
           "I know David from Sony, mustard yellow, Art Blakey, Berlin. Do you know him? Or any "
           "other with exact same traits?")};
  const std::string prompt = build_prompt(*game, history, 4, BudgetConfig::make(256, 4));
  CHECK(prompt == testing::read_fixture("prompt_namegame.txt"));
}

TEST_CASE("tangram guesser prompt matches the reference example") {
  const auto game = tangram_fixture_game();
  const std::vector<Turn> history = {
      turn(1, "Black and white abstract pattern with diagonal stripes and geometric shapes."),
      turn(2, "Is the pattern mostly diagonal or horizontal?"),
      turn(3, "Pattern has both diagonal and horizontal stripes, forming intersecting shapes.")};
  const std::string prompt = build_prompt(*game, history, 4, BudgetConfig::make(256, 16));
  CHECK(prompt == testing::read_fixture("prompt_tangram.txt"));
}

TEST_CASE("covr first-turn prompt matches the reference example") {
  const auto game = covr_fixture_game();
  const std::string prompt = build_prompt(*game, {}, 1, BudgetConfig::make(256, 8));
  const std::string prefix = testing::read_fixture("prompt_covr_prefix.txt");
  REQUIRE(prompt.size() > prefix.size());
  CHECK(prompt.substr(0, prefix.size()) == prefix);
  CHECK(prompt.substr(prefix.size()) == "\n\n# CONVERSATION\n\nYou have 8 turns left.\n\n1. YOU:");
  // Bob sees the mirror image.
  const std::string bob = build_prompt(*game, {turn(1, "hi")}, 2, BudgetConfig::make(256, 8));
  CHECK(bob.find("You can see the `right' image and the other player can see the `left' "
                 "image.") != std::string::npos);
  CHECK(bob.find("Here is the `right' image: <start_of_image>") != std::string::npos);
}

TEST_CASE("stated word limits for the default token budget") {
  const auto game = chess_fixture_game();
  for (auto [t, words] : {std::pair{4, 44}, {8, 22}, {16, 11}}) {
    const std::string p = build_prompt(*game, {}, 1, BudgetConfig::make(256, t));
    CHECK(p.find("You can use only " + std::to_string(words) + " words per turn") !=
          std::string::npos);
  }
}

TEST_CASE("turns-left counter, penultimate warning and final block") {
  const auto game = namegame_fixture_game();
  const BudgetConfig b = BudgetConfig::make(256, 8);
  std::vector<Turn> history;
  for (int k = 1; k <= 8; ++k) {
    const std::string p = build_prompt(*game, history, k, b);
    const bool warned = p.find(kPenultimateWarning) != std::string::npos;
    CHECK(warned == (k == 7));
    if (k < 8) {
      const std::string tail = "You have " + std::to_string(8 - (k - 1)) + " turns left.\n\n" +
                               std::to_string(k) + ". YOU:";
      CHECK(p.size() >= tail.size());
      CHECK(p.substr(p.size() - tail.size()) == tail);
      CHECK(p.find("This is your final turn") == std::string::npos);
    } else {
      CHECK(p.find("turns left.") == std::string::npos);
      CHECK(p.find("must** be `SELECT ROW'") != std::string::npos);
    }
    const bool has_history = p.find("Here is our conversation history.") != std::string::npos;
    CHECK(has_history == (k > 1));
    history.push_back(turn(k, "words " + std::to_string(k)));
  }
  CHECK_THROWS_AS(build_prompt(*game, history, 9, b), InvalidArgument);
}

TEST_CASE("history is rendered from the recipient's side") {
  const std::vector<Turn> h = {turn(1, "a"), turn(2, "b"), turn(3, "c")};
  CHECK(render_history(h, Speaker::kBob) == "1. ME: a\n2. YOU: b\n3. ME: c");
  CHECK(render_history(h, Speaker::kAlice) == "1. YOU: a\n2. ME: b\n3. YOU: c");
}

TEST_CASE("prompt rendering is pure") {
  const auto game = generate_game("md3", 5);
  const std::vector<Turn> h = {turn(1, "motif: star")};
  CHECK(build_prompt(*game, h, 2, BudgetConfig::make(256, 4)) ==
        build_prompt(*game, h, 2, BudgetConfig::make(256, 4)));
}

TEST_CASE("instance records round-trip for every task") {
  for (const auto& task : task_ids()) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto game = generate_game(task, seed);
      const auto again = game_from_json(task, game->instance_json(), game->instance_id());
      CHECK(again->instance_json() == game->instance_json());
      CHECK(again->instance_id() == game->instance_id());
      const BudgetConfig b = BudgetConfig::make(256, 4);
      CHECK(build_prompt(*again, {}, 1, b) == build_prompt(*game, {}, 1, b));
    }
  }
  CHECK_THROWS_AS(game_from_json("poker", Json::object()), InvalidArgument);
  CHECK_THROWS_AS(game_from_json("chess", Json::object()), InvalidArgument);
}

TEST_CASE("recorded dialogues replay to their reported outcomes") {
  for (const auto& f : testing::load_dialogue_fixtures()) {
    if (!f.has_instance) continue;
    CAPTURE(f.name);
    const Transcript out = replay_transcript(f.transcript);
    REQUIRE_FALSE(out.outcome.aborted);
    CHECK(out.outcome.correct == f.expect_correct);
    CHECK(out.outcome.turns_used == f.expect_turns_used);
    CHECK(out.outcome.answering_player == f.expect_answering);
    REQUIRE(out.turns.size() == f.transcript.turns.size());
    for (std::size_t i = 0; i < out.turns.size(); ++i) {
      CHECK(out.turns[i].text == f.transcript.turns[i].text);
    }
  }
}

TEST_CASE("replayed name-game dialogue ends on turn 8 with the right row") {
  const auto f = testing::dialogue_fixture("name-game-lucky");
  const Transcript out = replay_transcript(f.transcript);
  CHECK(out.outcome.turns_used == 8);
  CHECK(out.outcome.parsed_answer == std::optional<std::string>("SELECT ROW 1"));
  CHECK(out.outcome.correct == true);
}

TEST_CASE("replayed tangram dialogue stops at the premature answer") {
  const auto f = testing::dialogue_fixture("tangram-premature");
  CHECK(f.transcript.budget.turn_budget == 16);
  const Transcript out = replay_transcript(f.transcript);
  CHECK(out.outcome.turns_used == 2);
  CHECK(out.outcome.correct == false);
  CHECK_FALSE(out.outcome.unparseable);
}

TEST_CASE("replayed covr dialogue ends with a parsed False") {
  const auto f = testing::dialogue_fixture("covr-false");
  const Transcript out = replay_transcript(f.transcript);
  CHECK(out.outcome.parsed_answer == std::optional<std::string>("False"));
  CHECK(out.outcome.correct == true);
}

TEST_CASE("agents that never answer use every turn and are scored unparseable") {
  const auto game = generate_game("chess", 3);
  FixedAgent a("nothing to say"), b("nothing either");
  for (int t : {2, 4, 8, 16}) {
    const Transcript tr = run_dialogue(*game, a, b, BudgetConfig::make(256, t), 1);
    CHECK(tr.turns.size() == static_cast<std::size_t>(t));
    CHECK(tr.outcome.turns_used == t);
    CHECK(tr.outcome.unparseable);
    CHECK(tr.outcome.correct == false);
    CHECK_FALSE(tr.outcome.parsed_answer.has_value());
    CHECK(tr.outcome.raw_answer == "nothing either");
  }
}

TEST_CASE("replies are truncated to the per-turn allowance") {
  const auto game = generate_game("name-game", 4);
  std::string longer;
  for (int i = 0; i < 100; ++i) longer += "word ";
  FixedAgent a(longer), b(longer);
  const BudgetConfig budget = BudgetConfig::make(256, 8);
  const Transcript tr = run_dialogue(*game, a, b, budget, 1);
  REQUIRE(tr.turns.size() == 8);
  for (const auto& t : tr.turns) {
    CHECK(t.token_count == budget.allowance);
    CHECK(t.truncated);
    CHECK(token_count(t.text) == static_cast<std::size_t>(budget.allowance));
  }
  CHECK(tr.outcome.tokens_used.alice == 4 * budget.allowance);
  CHECK(tr.outcome.tokens_used.bob == 4 * budget.allowance);
}

TEST_CASE("an answer past the allowance is cut off and not seen") {
  const auto game = generate_game("chess", 8);
  std::string reply;
  for (int i = 0; i < 40; ++i) reply += "x ";
  reply += "_MINE_";
  FixedAgent a(reply), b("hmm");
  const Transcript tr = run_dialogue(*game, a, b, BudgetConfig::make(256, 8), 1);
  CHECK(tr.outcome.turns_used == 8);
  CHECK(tr.outcome.unparseable);
}

TEST_CASE("only eligible players can end the dialogue") {
  // In the selection games the describer cannot answer.
  const auto game = generate_game("tangram", 2);
  FixedAgent describer("ANSWER: Image 0"), guesser("Tell me more.");
  const Transcript tr = run_dialogue(*game, describer, guesser, BudgetConfig::make(256, 4), 1);
  CHECK(tr.outcome.turns_used == 4);
  CHECK(tr.outcome.unparseable);
  // Either chess player can.
  const auto chess_game = generate_game("chess", 2);
  FixedAgent mine("_MINE_");
  const Transcript c = run_dialogue(*chess_game, mine, guesser, BudgetConfig::make(256, 4), 1);
  CHECK(c.outcome.turns_used == 1);
  CHECK(c.outcome.answering_player == Speaker::kAlice);
  const auto x = chess_instance_from_json(chess_game->instance_json());
  CHECK(c.outcome.correct == (x.earlier == Speaker::kAlice));
}

TEST_CASE("agent failure leaves an aborted transcript with the turns so far") {
  const auto game = generate_game("covr", 6);
  FailingAgent a(5);
  FixedAgent b("go on");
  std::exception_ptr failure;
  const Transcript tr = run_dialogue(*game, a, b, BudgetConfig::make(256, 8), 1, {}, &failure);
  CHECK(tr.outcome.aborted);
  CHECK_FALSE(tr.outcome.correct.has_value());
  CHECK(tr.outcome.turns_used == 4);
  CHECK(tr.turns.size() == 4);
  CHECK(tr.outcome.error == "gave up");
  CHECK_THROWS_AS(std::rethrow_exception(failure), agents::Timeout);
}

TEST_CASE("timing is recorded only on request") {
  const auto game = generate_game("chess", 1);
  agents::ScriptedAgent a, b;
  CHECK(run_dialogue(*game, a, b, BudgetConfig::make(256, 4), 1).elapsed_ms == 0);
  DialogueOptions timed;
  timed.record_timing = true;
  CHECK(run_dialogue(*game, a, b, BudgetConfig::make(256, 4), 1, timed).elapsed_ms >= 0);
}

TEST_CASE("sweeps pair instances across turn budgets") {
  SweepConfig c;
  c.task = "name-game";
  c.turns = {2, 4};
  c.n = 10;
  c.seed = 99;
  const SweepResult r = run_sweep(c);
  REQUIRE(r.transcripts.size() == 20);
  std::set<std::string> ids;
  for (const auto& t : r.transcripts) ids.insert(t.instance_id);
  CHECK(ids.size() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(r.transcripts[static_cast<std::size_t>(i)].instance ==
          r.transcripts[static_cast<std::size_t>(10 + i)].instance);
    CHECK(r.transcripts[static_cast<std::size_t>(i)].budget.turn_budget == 2);
    CHECK(r.transcripts[static_cast<std::size_t>(i)].turns.size() <= 2);
  }
}

TEST_CASE("sweeps are deterministic and independent of parallelism") {
  for (const auto& task : task_ids()) {
    SweepConfig c;
    c.task = task;
    c.turns = {2, 8};
    c.n = 12;
    c.seed = 5;
    const SweepResult serial = run_sweep(c);
    c.parallelism = 4;
    const SweepResult parallel = run_sweep(c);
    CAPTURE(task);
    REQUIRE(serial.transcripts.size() == parallel.transcripts.size());
    std::ostringstream a, b;
    write_transcripts(a, serial.transcripts);
    write_transcripts(b, parallel.transcripts);
    CHECK(a.str() == b.str());
    for (const auto& t : serial.transcripts) {
      CHECK(t.outcome.turns_used <= t.budget.turn_budget);
      for (const auto& turn : t.turns) CHECK(turn.token_count <= t.budget.allowance);
    }
  }
}

TEST_CASE("a rejected credential stops the sweep") {
  class Rejecting : public agents::Agent {
   public:
    std::string id() const override { return "rejecting"; }
    std::string next_utterance(const agents::AgentContext&) override {
      throw agents::AuthError("credential rejected");
    }
  };
  SweepConfig c;
  c.task = "chess";
  c.n = 5;
  const auto rejecting = std::make_shared<Rejecting>();
  const SweepResult r = run_sweep(
      c, [&](const std::string&, Speaker) -> std::shared_ptr<agents::Agent> { return rejecting; });
  REQUIRE(r.auth_failure.has_value());
  CHECK(r.transcripts.size() == 1);
  CHECK(r.transcripts.front().outcome.aborted);
}

TEST_CASE("sweep configuration parsing") {
  const Json j = Json::parse(R"({"task": "covr", "turns": [2, 4], "tokens": 128,
      "agents": {"alice": "scripted", "bob": "scripted"}, "n": 3, "seed": 7,
      "parallelism": 2, "out": "x.jsonl"})");
  const SweepConfig c = SweepConfig::from_json(j);
  CHECK(c.task == "covr");
  CHECK(c.turns == std::vector<int>{2, 4});
  CHECK(c.tokens == 128);
  CHECK(c.n == 3);
  CHECK(c.seed == 7);
  CHECK(SweepConfig::from_json(c.to_json()).to_json() == c.to_json());
  CHECK_THROWS_AS(SweepConfig::from_json(Json::parse(R"({"turns": [3]})")), InvalidArgument);
  CHECK_THROWS_AS(SweepConfig::from_json(Json::parse(R"({"n": 0})")), InvalidArgument);
  CHECK_THROWS_AS(SweepConfig::from_json(Json::parse(R"({"colour": 1})")), InvalidArgument);
  CHECK_THROWS_AS(SweepConfig::from_json(Json::parse(R"({"task": "poker"})")), InvalidArgument);
  CHECK_THROWS_AS(SweepConfig::from_json(Json::parse(R"({"agents": {"bob": "human"}})")),
                  InvalidArgument);
}

TEST_CASE("remote configuration parsing") {
  const auto c = remote_config_from_json(
      Json::parse(R"({"model": "m", "provider": "generic", "thinking": true,
                      "timeout_ms": 500, "max_retries": 2})"));
  CHECK(c.model == "m");
  CHECK(c.provider == "generic");
  CHECK(c.thinking);
  CHECK(c.timeout.count() == 500);
  CHECK(c.max_retries == 2);
  CHECK_THROWS_AS(remote_config_from_json(Json::parse(R"({"model": ""})")), InvalidArgument);
}
