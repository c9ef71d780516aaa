#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "readbench/config.hpp"
#include "readbench/corpus.hpp"
#include "readbench/judge.hpp"
#include "readbench/metrics.hpp"
#include "readbench/stats.hpp"

namespace readbench {

/// Metric scored by a judge variant.
MetricId judge_metric(JudgeKind kind);

/// Per-document scores of one metric; empty entries are excluded pairwise.
using ScoreColumn = std::vector<std::optional<double>>;

struct BenchCell {
  std::optional<CorrelationResult> result;
  std::string status = "ok";  // reason when result is empty
  std::size_t excluded = 0;   // documents without a score
};

/// Kendall tau-b between scores and gold over documents that have a score.
BenchCell correlate(const ScoreColumn& scores, std::span<const double> gold);

struct DatasetRun {
  Corpus corpus;
  std::vector<TextStats> stats;
  CorpusSummary summary;
  std::map<JudgeKind, JudgeRun> judge_runs;
};

struct BenchResult {
  std::vector<MetricId> metrics;
  std::vector<std::string> datasets;
  std::vector<std::vector<BenchCell>> cells;  // [metric][dataset]
  TauMatrix tau;
  RankTable ranks;
  std::vector<DatasetRun> runs;
  std::vector<std::string> warnings;

  std::size_t judge_failures() const;
};

struct BenchOptions {
  ChatEndpoint* endpoint = nullptr;  // defaults to an HTTP endpoint built from the config and environment
  std::function<void(std::string_view)> log;
};

/// Loads and samples every dataset, scores the selected metrics and correlates
/// them with the gold labels. Throws ConfigError when there are no datasets.
BenchResult run_bench(const RunConfig& config, const BenchOptions& options = {});

/// Metrics scored when the config does not list any: every text metric with a
/// formula, then the configured judge variants and external scores.
std::vector<MetricId> default_metrics(const RunConfig& config);

/// Runs every configured judge variant over a loaded corpus.
std::map<JudgeKind, JudgeRun> run_judges(const RunConfig& config, const Corpus& corpus, ChatEndpoint* endpoint,
                                         const std::function<void(std::string_view)>& log = {});

}  // namespace readbench
