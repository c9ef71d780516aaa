#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace readbench {

/// Strictly ordered label names mapped onto 0..k-1.
class OrdinalScale {
 public:
  OrdinalScale() = default;
  /// Throws ConfigError on duplicates or an empty list.
  explicit OrdinalScale(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool contains(std::string_view label) const;
  /// Throws DataError for unknown labels.
  int index_of(std::string_view label) const;

  static OrdinalScale eli_why();  // Elementary < High School < Graduate

  bool operator==(const OrdinalScale&) const = default;

 private:
  std::vector<std::string> labels_;
};

std::vector<double> encode_labels(std::span<const std::string> labels, const OrdinalScale& scale);

/// Sums over tie groups of size t, as used by the tau-b variance.
struct TieSums {
  double pairs = 0;     // sum t(t-1)/2
  double var_term = 0;  // sum t(t-1)(2t+5)
  double t1 = 0;        // sum t(t-1)
  double t2 = 0;        // sum t(t-1)(t-2)
};

struct CorrelationResult {
  double tau_b = 0;
  double p_value = 1;
  std::int64_t n = 0;
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  std::int64_t ties_x_only = 0;
  std::int64_t ties_y_only = 0;
  std::int64_t ties_both = 0;
  TieSums x_ties;
  TieSums y_ties;
};

/// Kendall tau-b with tie correction, O(n log n). Throws DataError on length
/// mismatch, fewer than two points or NaN input, and UndefinedCorrelationError
/// when either vector is constant.
CorrelationResult kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value from the tie-corrected normal approximation.
double tau_p_value(const CorrelationResult& result);

enum class TieRule { Average, Min };

TieRule parse_tie_rule(std::string_view s);
std::string_view to_string(TieRule rule);

/// Metrics x datasets matrix of correlations; empty cells are missing.
struct TauMatrix {
  std::vector<std::string> metrics;
  std::vector<std::string> datasets;
  std::vector<std::vector<std::optional<double>>> cells;  // [metric][dataset]

  std::optional<double>& at(std::size_t metric, std::size_t dataset) { return cells[metric][dataset]; }
  const std::optional<double>& at(std::size_t metric, std::size_t dataset) const { return cells[metric][dataset]; }
};

struct RankTable {
  std::vector<std::string> metrics;
  std::vector<std::string> datasets;
  std::vector<std::vector<std::optional<double>>> ranks;  // [metric][dataset]; rank 1 = strongest |tau|
  std::vector<std::optional<double>> avg_rank;            // empty when a metric has no ranked cell
};

/// Ranks metrics within each dataset by descending |tau|, ties sharing rank per
/// `rule`; missing cells are skipped. avg_rank is the mean over ranked cells.
RankTable rank_metrics(const TauMatrix& matrix, TieRule rule = TieRule::Average);

/// CSV with a header row "metric_id,<dataset>..."; empty or "NA" cells are
/// missing; lines starting with '#' are ignored.
TauMatrix parse_tau_matrix_csv(std::string_view content);
TauMatrix read_tau_matrix_csv(const std::filesystem::path& path);
std::string tau_matrix_to_csv(const TauMatrix& matrix);

}  // namespace readbench
