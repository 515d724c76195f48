#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "pings/interactivity.hpp"
#include "pings/metrics.hpp"
#include "pings/orchestrator.hpp"
#include "pings/report.hpp"

namespace fs = std::filesystem;

namespace pings::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

// Transcript files given directly, or every *.jsonl under a directory, in
// path order.
std::vector<Transcript> load_transcripts(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(in)) {
      files.emplace_back(in);
    } else {
      throw Error("no such transcript file or directory: " + in);
    }
  }
  std::vector<Transcript> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw Error("cannot open " + f.string());
    try {
      auto ts = read_transcripts(in);
      out.insert(out.end(), std::make_move_iterator(ts.begin()), std::make_move_iterator(ts.end()));
    } catch (const std::exception& e) {
      throw Error(f.string() + ": " + e.what());
    }
  }
  return out;
}

std::string serialize_all(const std::vector<Transcript>& ts) {
  std::ostringstream ss;
  write_transcripts(ss, ts);
  return ss.str();
}

void check_task(const std::string& task) {
  const auto& ids = orchestrator::task_ids();
  if (std::find(ids.begin(), ids.end(), task) == ids.end()) {
    throw UsageError("unknown task '" + task + "'");
  }
}

// ---- gen --------------------------------------------------------------------

struct GenArgs {
  std::string task;
  int n = 100;
  std::uint64_t seed = 0;
  int size = 0;
  std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  check_task(a.task);
  if (a.size != 0 && a.task != "name-game") throw UsageError("--size applies to name-game only");
  if (a.n < 1) throw UsageError("--n must be >= 1");
  orchestrator::SweepConfig config;
  config.task = a.task;
  config.seed = a.seed;
  fs::create_directories(a.out);
  for (int i = 0; i < a.n; ++i) {
    const std::uint64_t s = orchestrator::instance_seed(config, i);
    std::unique_ptr<orchestrator::Game> game;
    if (a.task == "name-game" && a.size != 0) {
      game = orchestrator::make_namegame_game(namegame::generate_instance(s, a.size));
    } else {
      game = orchestrator::generate_game(a.task, s);
    }
    const Json record{{"task", a.task},
                      {"id", game->instance_id()},
                      {"seed", s},
                      {"instance", game->instance_json()}};
    std::ostringstream name;
    name << a.task << "-" << std::setw(5) << std::setfill('0') << i << ".json";
    write_file(fs::path(a.out) / name.str(), record.dump(2) + "\n");
  }
  out << "wrote " << a.n << " " << a.task << " instances to " << a.out << "\n";
  return 0;
}

// ---- run --------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::string out;
  int parallelism = 0;
  bool timing = false;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  Json j = read_json_file(a.config);
  orchestrator::SweepConfig config = orchestrator::SweepConfig::from_json(j);
  if (a.parallelism > 0) config.parallelism = a.parallelism;
  if (!a.out.empty()) config.out = a.out;
  if (config.out.empty()) config.out = "transcripts.jsonl";

  orchestrator::SweepOptions options;
  options.progress = &out;
  options.dialogue.record_timing = a.timing;
  const auto result =
      orchestrator::run_sweep(config, orchestrator::default_agent_factory(config), options);
  write_file(config.out, serialize_all(result.transcripts));
  int correct = 0;
  for (const auto& t : result.transcripts) correct += t.outcome.correct == true;
  out << "wrote " << result.transcripts.size() << " transcripts to " << config.out << " ("
      << correct << " correct, " << result.aborted << " aborted)\n";
  if (result.auth_failure) {
    err << "pings: error: sweep stopped on authentication failure: " << *result.auth_failure
        << "\n";
    return 1;
  }
  return 0;
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
  std::vector<std::string> in;
  std::string out = "analysis";
  std::string judge;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const auto ts = load_transcripts(a.in);
  std::vector<metrics::LexicalRow> lex;
  std::vector<metrics::CenteringRow> cen;
  std::map<int, std::vector<Transcript>> chess_by_t;
  for (const auto& t : ts) {
    lex.push_back(metrics::lexical_metrics(t));
    cen.push_back(metrics::centering_metrics(t));
    if (t.task == "chess") chess_by_t[t.budget.turn_budget].push_back(t);
  }
  const fs::path dir(a.out);
  write_file(dir / "lexical.csv", report::lexical_csv(lex));
  write_file(dir / "centering.csv", report::centering_csv(cen));
  std::size_t files = 2;
  if (!chess_by_t.empty()) {
    std::vector<std::pair<int, metrics::ProposalStats>> stats;
    for (const auto& [t, group] : chess_by_t) stats.emplace_back(t, metrics::proposal_stats(group));
    write_file(dir / "proposals.csv", report::proposal_csv(stats));
    ++files;
  }
  if (!a.judge.empty()) {
    auto client = std::make_shared<agents::RemoteClient>(
        orchestrator::remote_config_from_json(read_json_file(a.judge)),
        std::shared_ptr<agents::Transport>(agents::make_http_transport()));
    agents::RemoteAgent judge(std::move(client));
    std::ostringstream csv;
    csv << "instance_id,t,label,justification\n";
    for (const auto& [t, group] : chess_by_t) {
      for (const auto& tr : group) {
        if (metrics::detect_proposals(tr).empty()) continue;
        const auto v = metrics::autorate(tr, judge);
        std::string just = v.justification;
        for (std::size_t p = 0; (p = just.find('"', p)) != std::string::npos; p += 2) {
          just.insert(p, "\"");
        }
        csv << tr.instance_id << "," << t << "," << v.label << ",\"" << just << "\"\n";
      }
    }
    write_file(dir / "autorater.csv", csv.str());
    ++files;
  }
  out << "analyzed " << ts.size() << " transcripts; wrote " << files << " tables to " << a.out
      << "\n";
  return 0;
}

// ---- report -----------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> in;
  std::string format = "csv";
  std::string out;
  int bootstrap = 0;
  std::uint64_t seed = 0;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  report::Format format;
  try {
    format = report::parse_format(a.format);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  report::AggregateOptions options;
  if (a.bootstrap > 0) {
    options.interval = report::Interval::kBootstrap;
    options.bootstrap_samples = a.bootstrap;
    options.bootstrap_seed = a.seed;
  }
  const auto rows = report::aggregate(load_transcripts(a.in), options);
  const std::string text = report::emit_report(rows, format);
  if (a.out.empty()) {
    out << text;
  } else {
    write_file(a.out, text);
  }
  return 0;
}

// ---- replay -----------------------------------------------------------------

struct ReplayArgs {
  std::vector<std::string> in;
  std::string out;
};

int cmd_replay(const ReplayArgs& a, std::ostream& out, std::ostream& err) {
  const auto ts = load_transcripts(a.in);
  std::vector<Transcript> rescored;
  int differ = 0;
  for (const auto& t : ts) {
    Transcript r = orchestrator::replay_transcript(t);
    r.elapsed_ms = t.elapsed_ms;
    if (r.outcome != t.outcome || r.turns != t.turns) ++differ;
    rescored.push_back(std::move(r));
  }
  if (!a.out.empty()) write_file(a.out, serialize_all(rescored));
  out << "replayed " << ts.size() << " transcripts; " << ts.size() - static_cast<std::size_t>(differ)
      << " match their stored outcome\n";
  if (differ > 0) {
    err << "pings: error: " << differ << " replayed outcomes differ from the stored ones\n";
    return 1;
  }
  return 0;
}

// ---- level ------------------------------------------------------------------

struct LevelArgs {
  std::string game;
  double c = 0.9;
  int k_max = 3;
  double guard = 1e7;
};

int cmd_level(const LevelArgs& a, std::ostream& out) {
  const auto [g, ms] = interactivity::game_from_json(read_json_file(a.game));
  interactivity::SearchOptions options;
  options.guard = a.guard;
  options.max_level = std::max(options.max_level, a.k_max);
  const auto r = interactivity::interactivity_level(g, ms, a.c, a.k_max, options);
  out << interactivity::to_json(r, g, ms).dump(2) << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Private-information dialogue games: generation, sweeps, metrics and reports",
               "pings"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Write task instances as JSON files");
  g->add_option("--task", gen.task, "chess, name-game, covr, md3 or tangram")->required();
  g->add_option("--n", gen.n, "Number of instances");
  g->add_option("--seed", gen.seed, "Master seed");
  g->add_option("--size", gen.size, "Database size (name-game)");
  g->add_option("--out", gen.out, "Output directory")->required();

  RunArgs runa;
  auto* r = app.add_subcommand("run", "Run a sweep from a JSON config");
  r->add_option("--config", runa.config, "Sweep config file")->required()->check(CLI::ExistingFile);
  r->add_option("--out", runa.out, "Transcript file (overrides the config)");
  r->add_option("--parallelism", runa.parallelism, "Worker threads (overrides the config)");
  r->add_flag("--timing", runa.timing, "Record wall-clock time per dialogue");

  AnalyzeArgs an;
  auto* n = app.add_subcommand("analyze", "Compute dialogue metrics");
  n->add_option("--in", an.in, "Transcript files or directories")->required();
  n->add_option("--out", an.out, "Output directory");
  n->add_option("--judge", an.judge, "Remote model config for the sycophancy autorater")
      ->check(CLI::ExistingFile);

  ReportArgs rep;
  auto* p = app.add_subcommand("report", "Aggregate accuracy and usage");
  p->add_option("--in", rep.in, "Transcript files or directories")->required();
  p->add_option("--format", rep.format, "csv, markdown or plot-series");
  p->add_option("--out", rep.out, "Output file (default stdout)");
  p->add_option("--bootstrap", rep.bootstrap, "Use a bootstrap interval with this many samples");
  p->add_option("--seed", rep.seed, "Bootstrap seed");

  ReplayArgs rp;
  auto* y = app.add_subcommand("replay", "Re-run stored transcripts and re-score them");
  y->add_option("--in", rp.in, "Transcript files or directories")->required();
  y->add_option("--out", rp.out, "Write re-scored transcripts here");

  LevelArgs lv;
  auto* l = app.add_subcommand("level", "Compute the interactivity level of a tiny game");
  l->add_option("--game", lv.game, "Game description (JSON)")->required()->check(CLI::ExistingFile);
  l->add_option("--c", lv.c, "Score threshold");
  l->add_option("--k-max", lv.k_max, "Highest level to try");
  l->add_option("--guard", lv.guard, "Largest search allowed, in encoding tuples");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "pings: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*g) return cmd_gen(gen, out);
    if (*r) return cmd_run(runa, out, err);
    if (*n) return cmd_analyze(an, out);
    if (*p) return cmd_report(rep, out);
    if (*y) return cmd_replay(rp, out, err);
    if (*l) return cmd_level(lv, out);
  } catch (const UsageError& e) {
    err << "pings: usage: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "pings: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace pings::cli
