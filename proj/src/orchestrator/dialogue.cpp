#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <ostream>
#include <thread>

#include "pings/orchestrator.hpp"

namespace pings::orchestrator {

Transcript run_dialogue(const Game& game, agents::Agent& alice, agents::Agent& bob,
                        const BudgetConfig& budget, std::uint64_t seed,
                        const DialogueOptions& options, std::exception_ptr* failure) {
  const auto start = std::chrono::steady_clock::now();
  Transcript tr;
  tr.task = game.task();
  tr.instance_id = game.instance_id();
  tr.seed = seed;
  tr.budget = budget;
  tr.agents = {alice.id(), bob.id()};
  tr.instance = game.instance_json();
  Outcome& out = tr.outcome;

  const int t = budget.turn_budget;
  for (int k = 1; k <= t; ++k) {
    const Speaker s = speaker_for_turn(k);
    agents::AgentContext ctx;
    ctx.prompt = build_prompt(game, tr.turns, k, budget);
    ctx.view = game.view(s);
    ctx.speaker = s;
    ctx.turn_index = k;
    ctx.turn_budget = t;
    ctx.turns_left = t - (k - 1);
    ctx.history = tr.turns;
    ctx.allowance = budget.allowance;
    ctx.stated_word_limit = budget.stated_word_limit;
    ctx.seed = derive_seed(seed, to_string(s));
    ctx.attachments = game.attachments(s);

    std::string reply;
    try {
      reply = (s == Speaker::kAlice ? alice : bob).next_utterance(ctx);
    } catch (const std::exception& e) {
      out.aborted = true;
      out.error = e.what();
      out.turns_used = k - 1;
      if (failure) *failure = std::current_exception();
      break;
    }

    Truncation cut = truncate_to_allowance(reply, budget.allowance);
    Turn turn;
    turn.index = k;
    turn.speaker = s;
    turn.text = std::move(cut.text);
    turn.token_count = static_cast<int>(token_count(turn.text));
    turn.truncated = cut.truncated;
    out.tokens_used[s] += turn.token_count;
    out.turns_used = k;
    tr.turns.push_back(turn);

    std::optional<std::string> parsed;
    if (game.eligible(s)) parsed = game.parse(tr.turns.back().text);
    if (parsed) {
      out.raw_answer = tr.turns.back().text;
      out.parsed_answer = parsed;
      out.answering_player = s;
      out.correct = game.score(s, *parsed);
      break;
    }
    if (k == t) {
      out.raw_answer = tr.turns.back().text;
      out.unparseable = true;
      out.correct = false;
    }
  }

  if (options.record_timing) {
    tr.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  }
  return tr;
}

Transcript replay_transcript(const Transcript& t) {
  const auto game = game_from_json(t.task, t.instance, t.instance_id);
  agents::ReplayAgent alice(t, Speaker::kAlice);
  agents::ReplayAgent bob(t, Speaker::kBob);
  return run_dialogue(*game, alice, bob, t.budget, t.seed);
}

// ---- sweeps ----------------------------------------------------------------

void SweepConfig::validate() const {
  const auto& ids = task_ids();
  if (std::find(ids.begin(), ids.end(), task) == ids.end()) {
    throw InvalidArgument("unknown task: " + task);
  }
  if (turns.empty()) throw InvalidArgument("sweep needs at least one turn budget");
  for (int t : turns) BudgetConfig::make(tokens, t);  // throws on odd or oversized t
  if (n < 1) throw InvalidArgument("sweep needs n >= 1");
  if (parallelism < 1) throw InvalidArgument("parallelism must be >= 1");
  for (const auto& spec : {alice, bob}) {
    if (spec != "scripted" && spec != "remote") throw InvalidArgument("unknown agent: " + spec);
  }
}

SweepConfig SweepConfig::from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("sweep config must be an object");
  static const std::vector<std::string> known = {"task", "turns", "tokens", "agents", "n",
                                                 "seed", "parallelism", "out", "remote"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw InvalidArgument("unknown sweep config key: " + k);
    }
  }
  SweepConfig c;
  try {
    if (j.contains("task")) c.task = j["task"].get<std::string>();
    if (j.contains("turns")) c.turns = j["turns"].get<std::vector<int>>();
    if (j.contains("tokens")) c.tokens = j["tokens"].get<int>();
    if (j.contains("agents")) {
      const Json& a = j["agents"];
      if (a.contains("alice")) c.alice = a["alice"].get<std::string>();
      if (a.contains("bob")) c.bob = a["bob"].get<std::string>();
    }
    if (j.contains("n")) c.n = j["n"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("parallelism")) c.parallelism = j["parallelism"].get<int>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("remote")) c.remote = j["remote"];
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("bad sweep config: ") + e.what());
  }
  c.validate();
  return c;
}

Json SweepConfig::to_json() const {
  return Json{{"task", task},
              {"turns", turns},
              {"tokens", tokens},
              {"agents", {{"alice", alice}, {"bob", bob}}},
              {"n", n},
              {"seed", seed},
              {"parallelism", parallelism},
              {"out", out},
              {"remote", remote}};
}

agents::RemoteAgentConfig remote_config_from_json(const Json& j) {
  agents::RemoteAgentConfig c;
  try {
    if (j.contains("endpoint")) c.endpoint = j["endpoint"].get<std::string>();
    if (j.contains("model")) c.model = j["model"].get<std::string>();
    if (j.contains("provider")) c.provider = j["provider"].get<std::string>();
    if (j.contains("temperature")) c.temperature = j["temperature"].get<double>();
    if (j.contains("thinking")) c.thinking = j["thinking"].get<bool>();
    if (j.contains("api_key_env")) c.api_key_env = j["api_key_env"].get<std::string>();
    if (j.contains("timeout_ms")) c.timeout = std::chrono::milliseconds(j["timeout_ms"].get<int>());
    if (j.contains("max_retries")) c.max_retries = j["max_retries"].get<int>();
    if (j.contains("max_in_flight")) c.max_in_flight = j["max_in_flight"].get<int>();
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("bad remote config: ") + e.what());
  }
  c.validate();
  return c;
}

std::uint64_t instance_seed(const SweepConfig& config, int index) {
  return derive_seed(derive_seed(config.seed, config.task), static_cast<std::uint64_t>(index));
}

std::uint64_t dialogue_seed(const SweepConfig& config, int index, int t) {
  return derive_seed(instance_seed(config, index), static_cast<std::uint64_t>(t));
}

AgentFactory default_agent_factory(const SweepConfig& config) {
  auto scripted = std::make_shared<agents::ScriptedAgent>();
  std::shared_ptr<agents::Agent> remote;
  if (config.alice == "remote" || config.bob == "remote") {
    auto client = std::make_shared<agents::RemoteClient>(
        remote_config_from_json(config.remote),
        std::shared_ptr<agents::Transport>(agents::make_http_transport()), agents::Sleeper{},
        derive_seed(config.seed, "jitter"));
    remote = std::make_shared<agents::RemoteAgent>(std::move(client));
  }
  return [scripted, remote](const std::string& spec, Speaker) -> std::shared_ptr<agents::Agent> {
    if (spec == "scripted") return scripted;
    if (spec == "remote" && remote) return remote;
    throw InvalidArgument("unknown agent: " + spec);
  };
}

SweepResult run_sweep(const SweepConfig& config, const AgentFactory& factory,
                      const SweepOptions& options) {
  config.validate();
  const auto alice = factory(config.alice, Speaker::kAlice);
  const auto bob = factory(config.bob, Speaker::kBob);

  // Instances are generated once and shared by every turn budget.
  std::vector<std::unique_ptr<Game>> games(static_cast<std::size_t>(config.n));
  for (int i = 0; i < config.n; ++i) {
    games[static_cast<std::size_t>(i)] = generate_game(config.task, instance_seed(config, i));
  }

  const std::size_t jobs = config.turns.size() * games.size();
  SweepResult result;
  result.transcripts.resize(jobs);
  std::vector<char> done(jobs, 0);
  std::vector<int> finished_per_t(config.turns.size(), 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;

  const auto worker = [&] {
    for (;;) {
      if (stop.load()) return;
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      const std::size_t ti = job / games.size();
      const int i = static_cast<int>(job % games.size());
      const int t = config.turns[ti];
      const BudgetConfig budget = BudgetConfig::make(config.tokens, t);
      std::exception_ptr failure;
      Transcript tr = run_dialogue(*games[static_cast<std::size_t>(i)], *alice, *bob, budget,
                                   dialogue_seed(config, i, t), options.dialogue, &failure);
      std::lock_guard<std::mutex> lock(mu);
      if (failure) {
        try {
          std::rethrow_exception(failure);
        } catch (const agents::AuthError& e) {
          if (!result.auth_failure) result.auth_failure = e.what();
          stop.store(true);
        } catch (...) {
        }
      }
      if (tr.outcome.aborted) ++result.aborted;
      result.transcripts[job] = std::move(tr);
      done[job] = 1;
      if (++finished_per_t[ti] == config.n && options.progress) {
        const auto first = result.transcripts.begin() + static_cast<std::ptrdiff_t>(ti) * config.n;
        int correct = 0;
        for (auto it = first; it != first + config.n; ++it) correct += it->outcome.correct == true;
        *options.progress << config.task << " t=" << t << ": " << correct << "/" << config.n
                          << " correct\n";
      }
    }
  };

  const int threads = std::min<int>(config.parallelism, static_cast<int>(jobs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (result.auth_failure) {
    std::vector<Transcript> kept;
    for (std::size_t j = 0; j < jobs; ++j) {
      if (done[j]) kept.push_back(std::move(result.transcripts[j]));
    }
    result.transcripts = std::move(kept);
  }
  return result;
}

SweepResult run_sweep(const SweepConfig& config) {
  return run_sweep(config, default_agent_factory(config));
}

}  // namespace pings::orchestrator
