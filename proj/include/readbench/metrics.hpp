#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "readbench/textcore.hpp"

namespace readbench {

enum class MetricId {
  // surface form
  Words,
  Sentences,
  AvgSentenceLength,
  AvgReadingTime,
  Syllables,
  Monosyllables,
  Polysyllables,
  DifficultWords,
  FunctionWordFraction,
  TEScore,  // ingested from external scores only; no formula
  // readability tests
  ARI,
  ColemanLiau,
  DaleChall,
  FleschKincaidGrade,
  FleschReadingEase,
  GunningFog,
  LinsearWrite,
  SMOG,
  // model based, supplied by the judge or by external scorers
  ReadMePP,
  MetaRaterReadability,
  MetaRaterProfessionalism,
  JudgeZeroShot,
  JudgeFiveShot,
  JudgeContinuous,
};

enum class MetricGroup { SurfaceForm, Psycholinguistic, ModelBased };

enum class Orientation { HarderIsLarger, EasierIsLarger };

struct MetricInfo {
  MetricId id;
  std::string_view key;           // stable identifier used in CSV files and configs
  std::string_view display_name;  // row label in reports
  MetricGroup group;
  Orientation orientation;
  bool from_text;                 // computable from TextStats alone
};

/// Every known metric in report order.
std::span<const MetricInfo> all_metrics();
const MetricInfo& metric_info(MetricId id);
/// Throws ConfigError for unknown keys.
MetricId parse_metric_id(std::string_view key);
std::optional<MetricId> find_metric_id(std::string_view key);

struct MetricValue {
  MetricId id;
  double value;
  Orientation orientation;

  bool operator==(const MetricValue&) const = default;
};

/// "metric_id,value" with shortest round-trip formatting of the value.
std::string to_csv_row(const MetricValue& v);

enum class DaleChallScale {
  Percent,  // 100 * difficult / words
  Fraction, // difficult / words, as printed without scaling
};

enum class LinsearDenominator {
  Sentences,
  Words,
};

struct MetricOptions {
  double reading_ms_per_char = 14.69;
  DaleChallScale dale_chall_scale = DaleChallScale::Percent;
  LinsearDenominator linsear_denominator = LinsearDenominator::Sentences;
};

struct MetricFailure {
  MetricId id;
  std::string reason;
};

struct MetricReport {
  std::vector<MetricValue> values;
  std::vector<MetricFailure> failures;

  std::optional<double> get(MetricId id) const;
};

/// The nine surface-form metrics. Raw counts are always present; ratio metrics
/// land in `failures` when their denominator is zero.
MetricReport surface_metrics(const TextStats& stats, double reading_ms_per_char = 14.69);

// Readability tests. Each throws DegenerateInputError on a zero denominator.
MetricValue ari(const TextStats& stats);
MetricValue coleman_liau(const TextStats& stats);
MetricValue dale_chall(const TextStats& stats, DaleChallScale scale = DaleChallScale::Percent);
MetricValue fkre(const TextStats& stats);
MetricValue fkgl(const TextStats& stats);
MetricValue gunning_fog(const TextStats& stats);
MetricValue linsear_write(const TextStats& stats, LinsearDenominator denominator = LinsearDenominator::Sentences);
MetricValue smog(const TextStats& stats);

/// Computes one text-derived metric. Throws DegenerateInputError, or
/// ConfigError for metrics that are not computable from text.
MetricValue compute_metric(MetricId id, const TextStats& stats, const MetricOptions& options = {});

/// Computes the selected text-derived metrics, collecting failures instead of throwing.
MetricReport compute_metrics(const TextStats& stats, std::span<const MetricId> selection,
                             const MetricOptions& options = {});

/// All metrics for which `from_text` is true, in report order.
std::vector<MetricId> text_metrics();

}  // namespace readbench
