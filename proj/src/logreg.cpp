#include "readbench/logreg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "readbench/corpus.hpp"
#include "readbench/error.hpp"

namespace readbench {

Penalty parse_penalty(std::string_view name) {
  if (name == "l1") return Penalty::L1;
  if (name == "l2") return Penalty::L2;
  if (name == "elasticnet") return Penalty::ElasticNet;
  throw ConfigError(fmt::format("unknown penalty '{}'", name));
}

std::string to_string(Penalty penalty) {
  switch (penalty) {
    case Penalty::L1: return "l1";
    case Penalty::L2: return "l2";
    case Penalty::ElasticNet: return "elasticnet";
  }
  return "?";
}

std::string LogRegConfig::describe() const {
  return fmt::format("C={} max_iter={} penalty={}", C, max_iter, to_string(penalty));
}

double LinearClassifier::decision(const SparseRow& row) const { return dot(row, weights) + bias; }

double LinearClassifier::probability(const SparseRow& row) const {
  const double z = decision(row);
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

int LinearClassifier::predict(const SparseRow& row) const { return decision(row) > 0 ? 1 : 0; }

std::vector<int> LinearClassifier::predict(const SparseMatrix& X) const {
  std::vector<int> out;
  out.reserve(X.n_rows());
  for (const auto& row : X.rows) out.push_back(predict(row));
  return out;
}

namespace {

// log(1 + exp(-m)) without overflow.
double log1pexp_neg(double m) { return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m)); }

// 1 / (1 + exp(m))
double sigmoid_neg(double m) {
  if (m > 0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

void check_labels(const SparseMatrix& X, std::span<const int> y) {
  if (X.n_rows() != y.size()) {
    throw DataError(fmt::format("logistic regression: {} rows but {} labels", X.n_rows(), y.size()));
  }
  bool zero = false, one = false;
  for (int v : y) {
    if (v == 0) zero = true;
    else if (v == 1) one = true;
    else throw DataError(fmt::format("logistic regression: label {} is not 0 or 1", v));
  }
  if (!zero || !one) throw DataError("logistic regression: both classes must be present");
}

}  // namespace

LogisticObjective::LogisticObjective(const SparseMatrix& X, std::span<const int> y, Penalty penalty, double C,
                                     double l1_ratio)
    : X_(X), n_features_(X.n_cols), C_(C) {
  check_labels(X, y);
  if (!(C > 0)) throw ConfigError("logistic regression: C must be positive");
  if (!(l1_ratio >= 0 && l1_ratio <= 1)) throw ConfigError("logistic regression: l1_ratio must lie in [0, 1]");
  sign_.reserve(y.size());
  for (int v : y) sign_.push_back(v == 1 ? 1.0 : -1.0);
  switch (penalty) {
    case Penalty::L2: l2_ = 1.0, l1_ = 0.0; break;
    case Penalty::L1: l2_ = 0.0, l1_ = 1.0; break;
    case Penalty::ElasticNet: l2_ = 1.0 - l1_ratio, l1_ = l1_ratio; break;
  }
}

double LogisticObjective::smooth_value(const std::vector<double>& p) const {
  const double b = p[n_features_];
  double loss = 0;
  for (std::size_t i = 0; i < sign_.size(); ++i) loss += log1pexp_neg(sign_[i] * (dot(X_.rows[i], p) + b));
  double sq = 0;
  for (std::size_t j = 0; j < n_features_; ++j) sq += p[j] * p[j];
  return C_ * loss + 0.5 * l2_ * sq;
}

std::vector<double> LogisticObjective::smooth_gradient(const std::vector<double>& p) const {
  std::vector<double> g(dim(), 0.0);
  const double b = p[n_features_];
  for (std::size_t i = 0; i < sign_.size(); ++i) {
    const double m = sign_[i] * (dot(X_.rows[i], p) + b);
    const double coef = -C_ * sign_[i] * sigmoid_neg(m);
    for (const auto& [j, v] : X_.rows[i]) g[j] += coef * v;
    g[n_features_] += coef;
  }
  for (std::size_t j = 0; j < n_features_; ++j) g[j] += l2_ * p[j];
  return g;
}

double LogisticObjective::nonsmooth_value(const std::vector<double>& p) const {
  if (l1_ == 0.0) return 0.0;
  double s = 0;
  for (std::size_t j = 0; j < n_features_; ++j) s += std::abs(p[j]);
  return l1_ * s;
}

double LogisticObjective::lipschitz_bound() const {
  double sq = 0;
  for (const auto& row : X_.rows) {
    sq += 1.0;  // bias column
    for (const auto& [j, v] : row) sq += v * v;
  }
  return 0.25 * C_ * sq + l2_;
}

LinearClassifier train_logreg(const SparseMatrix& X, std::span<const int> y, const LogRegConfig& config) {
  if (config.max_iter < 0) throw ConfigError("logistic regression: max_iter must be non-negative");
  const LogisticObjective f(X, y, config.penalty, config.C, config.l1_ratio);
  const std::size_t d = f.dim();
  const std::size_t nf = d - 1;

  std::vector<double> p(d, 0.0), next(d);
  double fp = f.smooth_value(p);
  LinearClassifier model;
  model.penalty = config.penalty;
  model.C = config.C;
  model.loss_history.push_back(fp + f.nonsmooth_value(p));

  double step = 1.0 / f.lipschitz_bound();
  for (int it = 0; it < config.max_iter; ++it) {
    const auto g = f.smooth_gradient(p);
    step *= 2.0;
    double f_next = 0;
    double dist2 = 0;
    for (;;) {
      const double shrink = step * f.l1_weight();
      double linear = 0;
      dist2 = 0;
      for (std::size_t j = 0; j < d; ++j) {
        double v = p[j] - step * g[j];
        if (j < nf && shrink > 0) v = v > shrink ? v - shrink : (v < -shrink ? v + shrink : 0.0);
        next[j] = v;
        const double delta = v - p[j];
        linear += g[j] * delta;
        dist2 += delta * delta;
      }
      f_next = f.smooth_value(next);
      if (f_next <= fp + linear + dist2 / (2 * step) + 1e-12 * std::abs(fp) || step < 1e-300) break;
      step *= 0.5;
    }
    const double next_total = f_next + f.nonsmooth_value(next);
    model.iterations = it + 1;
    if (next_total > model.loss_history.back()) {
      // Round-off can only cost a last-ulp increase near the optimum; keep the better iterate.
      model.converged = true;
      break;
    }
    std::swap(p, next);
    fp = f_next;
    model.loss_history.push_back(next_total);
    if (std::sqrt(dist2) / step <= config.tol) {
      model.converged = true;
      break;
    }
  }
  model.weights.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(nf));
  model.bias = p[nf];
  return model;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size() || truth.empty()) throw DataError("accuracy: size mismatch or empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double majority_rate(std::span<const int> y) {
  if (y.empty()) throw DataError("majority_rate: empty labels");
  const auto ones = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  return static_cast<double>(std::max(ones, y.size() - ones)) / static_cast<double>(y.size());
}

std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("cross-validation needs at least two folds");
  if (k > y.size()) throw DataError(fmt::format("cross-validation: {} folds for {} samples", k, y.size()));
  std::mt19937_64 engine(seed);
  std::vector<int> classes(y.begin(), y.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  std::vector<std::size_t> fold(y.size());
  std::size_t next = 0;
  for (int c : classes) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == c) members.push_back(i);
    }
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[bounded_draw(engine, i)]);
    }
    for (std::size_t i : members) fold[i] = next++ % k;
  }
  return fold;
}

std::vector<LogRegConfig> default_grid() {
  std::vector<LogRegConfig> grid;
  for (double C : {0.01, 0.1, 1.0, 10.0, 100.0, 500.0}) {
    for (int max_iter : {100, 300}) {
      for (Penalty p : {Penalty::L1, Penalty::L2, Penalty::ElasticNet}) {
        LogRegConfig cfg;
        cfg.C = C;
        cfg.max_iter = max_iter;
        cfg.penalty = p;
        grid.push_back(cfg);
      }
    }
  }
  return grid;
}

GridSearchResult grid_search_cv(const SparseMatrix& X, std::span<const int> y, std::span<const LogRegConfig> grid,
                                std::size_t k, std::uint64_t seed, std::size_t threads) {
  if (grid.empty()) throw ConfigError("grid search: empty grid");
  check_labels(X, y);
  const auto fold = stratified_folds(y, k, seed);

  struct Split {
    SparseMatrix X_train, X_test;
    std::vector<int> y_train, y_test;
  };
  std::vector<Split> splits(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < y.size(); ++i) (fold[i] == f ? test : train).push_back(i);
    auto& s = splits[f];
    s.X_train = X.select_rows(train);
    s.X_test = X.select_rows(test);
    for (std::size_t i : train) s.y_train.push_back(y[i]);
    for (std::size_t i : test) s.y_test.push_back(y[i]);
  }

  // A training fold can lose a class when it is rarer than k; such a fold
  // predicts its only class.
  auto fit_and_score = [&](const LogRegConfig& cfg, const Split& s) {
    const bool one_class = std::all_of(s.y_train.begin(), s.y_train.end(), [&](int v) { return v == s.y_train[0]; });
    std::vector<int> predicted;
    if (one_class) {
      predicted.assign(s.y_test.size(), s.y_train[0]);
    } else {
      predicted = train_logreg(s.X_train, s.y_train, cfg).predict(s.X_test);
    }
    return accuracy(predicted, s.y_test);
  };

  const std::size_t tasks = grid.size() * k;
  std::vector<double> scores(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t t; (t = cursor.fetch_add(1)) < tasks;) {
      try {
        scores[t] = fit_and_score(grid[t / k], splits[t % k]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  std::size_t n_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, tasks);
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  GridSearchResult result;
  result.majority_accuracy = majority_rate(y);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    CvResult r;
    r.config = grid[g];
    r.fold_accuracies.assign(scores.begin() + static_cast<std::ptrdiff_t>(g * k),
                             scores.begin() + static_cast<std::ptrdiff_t>((g + 1) * k));
    r.mean_accuracy = std::accumulate(r.fold_accuracies.begin(), r.fold_accuracies.end(), 0.0) / static_cast<double>(k);
    if (g == 0 || r.mean_accuracy > result.best_accuracy) {
      result.best = r.config;
      result.best_accuracy = r.mean_accuracy;
    }
    result.results.push_back(std::move(r));
  }
  return result;
}

std::vector<std::pair<std::string, double>> top_features(const LinearClassifier& model,
                                                         const std::vector<std::string>& vocabulary, std::size_t k) {
  if (model.weights.size() != vocabulary.size()) throw DataError("top_features: vocabulary does not match the model");
  std::vector<std::size_t> order(vocabulary.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return model.weights[a] > model.weights[b]; });
  order.resize(std::min(k, order.size()));
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t j : order) out.emplace_back(vocabulary[j], model.weights[j]);
  return out;
}

}  // namespace readbench
