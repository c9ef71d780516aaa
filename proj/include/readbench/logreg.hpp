#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "readbench/tfidf.hpp"

namespace readbench {

enum class Penalty { L1, L2, ElasticNet };

Penalty parse_penalty(std::string_view name);
std::string to_string(Penalty penalty);

struct LogRegConfig {
  Penalty penalty = Penalty::L2;
  double C = 1.0;
  int max_iter = 100;
  double l1_ratio = 0.5;  // elastic-net mixing, 1 = pure l1
  double tol = 1e-6;      // on the norm of the proximal gradient mapping

  std::string describe() const;  // "C=100 max_iter=300 penalty=l1"
};

struct LinearClassifier {
  std::vector<double> weights;
  double bias = 0.0;
  Penalty penalty = Penalty::L2;
  double C = 1.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loss_history;  // full objective, one entry per iterate starting at zeros

  double decision(const SparseRow& row) const;
  double probability(const SparseRow& row) const;
  int predict(const SparseRow& row) const;  // 1 when decision > 0
  std::vector<int> predict(const SparseMatrix& X) const;
};

/// Regularized logistic loss over parameters (w_0..w_{d-1}, b):
///   C * sum_i log(1 + exp(-s_i (w.x_i + b))) + a * ||w||^2 / 2 + r * ||w||_1
/// with s_i = +1 for y_i = 1 and -1 for y_i = 0. The bias is not penalized.
/// l2: a = 1, r = 0. l1: a = 0, r = 1. elasticnet: a = 1 - l1_ratio, r = l1_ratio.
class LogisticObjective {
 public:
  LogisticObjective(const SparseMatrix& X, std::span<const int> y, Penalty penalty, double C, double l1_ratio = 0.5);

  std::size_t dim() const noexcept { return n_features_ + 1; }
  double smooth_value(const std::vector<double>& params) const;
  std::vector<double> smooth_gradient(const std::vector<double>& params) const;
  double nonsmooth_value(const std::vector<double>& params) const;
  double value(const std::vector<double>& params) const { return smooth_value(params) + nonsmooth_value(params); }

  double l2_weight() const noexcept { return l2_; }
  double l1_weight() const noexcept { return l1_; }
  /// Upper bound on the Lipschitz constant of the smooth gradient.
  double lipschitz_bound() const;

 private:
  const SparseMatrix& X_;
  std::vector<double> sign_;
  std::size_t n_features_;
  double C_;
  double l2_;
  double l1_;
};

/// Proximal gradient descent with backtracking from all-zero parameters.
/// Throws DataError when y is not 0/1, has one class only, or mismatches X.
LinearClassifier train_logreg(const SparseMatrix& X, std::span<const int> y, const LogRegConfig& config = {});

double accuracy(std::span<const int> predicted, std::span<const int> truth);
double majority_rate(std::span<const int> y);

/// Fold index (0..k-1) per sample. Each class is shuffled with the seed and
/// dealt round-robin, continuing the deal across classes.
std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t k, std::uint64_t seed);

struct CvResult {
  LogRegConfig config;
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
};

struct GridSearchResult {
  LogRegConfig best;
  double best_accuracy = 0.0;
  double majority_accuracy = 0.0;
  std::vector<CvResult> results;  // grid order
};

/// C x max_iter x penalty over {0.01, 0.1, 1, 10, 100, 500} x {100, 300} x {l1, l2, elasticnet}.
std::vector<LogRegConfig> default_grid();

/// k-fold cross-validated accuracy for every grid point; ties go to the
/// earlier grid point. `threads` = 0 uses the hardware concurrency.
GridSearchResult grid_search_cv(const SparseMatrix& X, std::span<const int> y, std::span<const LogRegConfig> grid,
                                std::size_t k = 10, std::uint64_t seed = 0, std::size_t threads = 0);

/// The k largest weights, descending; equal weights keep vocabulary order.
std::vector<std::pair<std::string, double>> top_features(const LinearClassifier& model,
                                                         const std::vector<std::string>& vocabulary, std::size_t k);

}  // namespace readbench
