#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "readbench/corpus.hpp"
#include "readbench/judge.hpp"
#include "readbench/lexicon.hpp"
#include "readbench/metrics.hpp"
#include "readbench/stats.hpp"

namespace readbench {

struct DatasetConfig {
  CorpusSpec spec;
  std::optional<SampleStrategy> sample;
};

struct JudgeSettings {
  std::string base_url;
  std::string model;
  std::vector<JudgeKind> variants;
  std::size_t concurrency = 4;
  std::size_t max_total_requests = 0;
  RetryPolicy retry;
  std::filesystem::path cache;             // empty = in-memory only
  std::optional<std::filesystem::path> exemplars;
};

struct ExternalScoreConfig {
  MetricId metric = MetricId::ReadMePP;
  std::string dataset;
  std::filesystem::path path;
  AggregateMode aggregate = AggregateMode::Mean;
};

/// A benchmark run. Parsed from JSON; relative paths resolve against the
/// directory of the config file.
struct RunConfig {
  std::vector<DatasetConfig> datasets;
  std::vector<MetricId> metrics;  // empty = every metric with a source
  std::optional<JudgeSettings> judge;
  std::vector<ExternalScoreConfig> external_scores;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "readbench-out";
  MetricOptions metric_options;
  TieRule tie_rule = TieRule::Average;
  LexiconPaths lexicon;

  /// Sorted-key JSON of the run-defining settings (everything but the output
  /// directory) with the effective seed.
  std::string canonical_json;

  /// SHA-256 of canonical_json.
  std::string hash() const;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
};

/// Throws ConfigError on unknown keys, bad values or referenced files that do not exist.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = {},
                           const ConfigOverrides& overrides = {});
RunConfig load_run_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

}  // namespace readbench
