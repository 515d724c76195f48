#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pings/metrics.hpp"
#include "pings/transcript.hpp"

namespace pings::report {

// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(int successes, int n, double z = 1.96);

enum class Interval { kWilson, kBootstrap };

struct AggregateOptions {
  Interval interval = Interval::kWilson;
  int bootstrap_samples = 2000;
  std::uint64_t bootstrap_seed = 0;
};

struct AggregateRow {
  std::string task;
  std::string alice, bob;
  int t = 0;
  int T = 0;  // tokens per player
  int n = 0;  // scored dialogues; aborted ones are counted separately
  int correct = 0;
  double accuracy = 0, ci_low = 0, ci_high = 0;
  double mean_turns_used = 0;
  double mean_tokens_alice = 0, mean_tokens_bob = 0;
  double unparseable_rate = 0;
  int aborted = 0;
};

// Groups by (task, agents, T, t), sorted on that key. Throws InvalidArgument
// on mixed schema versions. Groups with only aborted dialogues are dropped.
std::vector<AggregateRow> aggregate(const std::vector<Transcript>& ts,
                                    const AggregateOptions& options = {});

enum class Format { kCsv, kMarkdown, kPlotSeries };
Format parse_format(std::string_view name);  // "csv", "markdown", "plot-series"

// CSV and markdown tables, or a JSON document with one accuracy series per
// (task, agents, T) whose x values are the turn budgets present.
std::string emit_report(const std::vector<AggregateRow>& rows, Format format);

// Per-dialogue metric tables for `analyze`.
std::string lexical_csv(const std::vector<metrics::LexicalRow>& rows);
std::string centering_csv(const std::vector<metrics::CenteringRow>& rows);
std::string proposal_csv(const std::vector<std::pair<int, metrics::ProposalStats>>& by_t);

// Fixed-point rendering used by every table.
std::string fixed(double v, int decimals);

}  // namespace pings::report
