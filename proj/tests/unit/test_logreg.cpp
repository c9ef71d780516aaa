#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "readbench/error.hpp"
#include "readbench/logreg.hpp"

using namespace readbench;

namespace {

struct Problem {
  SparseMatrix X;
  std::vector<int> y;
};

// Gaussian features; labels from a noisy linear rule.
Problem random_problem(std::uint64_t seed, std::size_t n, std::size_t d, double noise = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> truth(d);
  for (auto& t : truth) t = g(rng);
  std::vector<std::vector<double>> dense(n, std::vector<double>(d));
  Problem p;
  for (auto& row : dense) {
    double s = 0;
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = (rng() % 3 == 0) ? 0.0 : g(rng);
      s += row[j] * truth[j];
    }
    p.y.push_back(s + noise * g(rng) > 0 ? 1 : 0);
  }
  p.X = SparseMatrix::from_dense(dense);
  return p;
}

Problem separable(std::size_t n) {
  std::vector<std::vector<double>> dense;
  Problem p;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    const double shift = 0.1 * static_cast<double>(i % 7);
    dense.push_back(label ? std::vector<double>{1.0 + shift, 0.0, 0.2} : std::vector<double>{0.0, 1.0 + shift, 0.2});
    p.y.push_back(label);
  }
  p.X = SparseMatrix::from_dense(dense);
  return p;
}

std::vector<double> params_of(const LinearClassifier& m) {
  std::vector<double> p = m.weights;
  p.push_back(m.bias);
  return p;
}

// Damped Newton on the l2 objective with dense linear algebra.
std::vector<double> newton_l2(const Problem& p, double C) {
  const std::size_t d = p.X.n_cols + 1;
  std::vector<std::vector<double>> rows;
  for (const auto& r : p.X.rows) {
    std::vector<double> dense(d, 0.0);
    for (auto [j, v] : r) dense[j] = v;
    dense[d - 1] = 1.0;
    rows.push_back(dense);
  }
  std::vector<double> w(d, 0.0);
  for (int it = 0; it < 100; ++it) {
    std::vector<double> grad(d, 0.0);
    std::vector<std::vector<double>> hess(d, std::vector<double>(d, 0.0));
    for (std::size_t j = 0; j + 1 < d; ++j) {
      grad[j] = w[j];
      hess[j][j] = 1.0;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double z = 0;
      for (std::size_t j = 0; j < d; ++j) z += rows[i][j] * w[j];
      const double s = p.y[i] ? 1.0 : -1.0;
      const double sig = 1.0 / (1.0 + std::exp(s * z));  // sigma(-s z)
      for (std::size_t j = 0; j < d; ++j) {
        grad[j] += C * (-s * sig) * rows[i][j];
        for (std::size_t k = 0; k < d; ++k) hess[j][k] += C * sig * (1 - sig) * rows[i][j] * rows[i][k];
      }
    }
    // Solve hess * step = grad by Gaussian elimination.
    std::vector<std::vector<double>> a = hess;
    std::vector<double> b = grad;
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < d; ++r) {
        if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
      }
      std::swap(a[c], a[piv]);
      std::swap(b[c], b[piv]);
      for (std::size_t r = c + 1; r < d; ++r) {
        const double f = a[r][c] / a[c][c];
        for (std::size_t k = c; k < d; ++k) a[r][k] -= f * a[c][k];
        b[r] -= f * b[c];
      }
    }
    std::vector<double> step(d);
    for (std::size_t c = d; c-- > 0;) {
      double s = b[c];
      for (std::size_t k = c + 1; k < d; ++k) s -= a[c][k] * step[k];
      step[c] = s / a[c][c];
    }
    double norm = 0;
    for (std::size_t j = 0; j < d; ++j) {
      w[j] -= step[j];
      norm += step[j] * step[j];
    }
    if (std::sqrt(norm) < 1e-13) break;
  }
  return w;
}

}  // namespace

TEST_SUITE("logreg") {
  TEST_CASE("gradient matches finite differences") {
    const Problem p = random_problem(1, 40, 6);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0.0, 0.7);
    for (Penalty pen : {Penalty::L1, Penalty::L2, Penalty::ElasticNet}) {
      const LogisticObjective f(p.X, p.y, pen, 3.0);
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> w(f.dim());
        for (auto& v : w) v = g(rng);
        const auto grad = f.smooth_gradient(w);
        for (std::size_t j = 0; j < f.dim(); ++j) {
          const double fd = oracle::central_difference([&](const std::vector<double>& q) { return f.smooth_value(q); }, w, j);
          CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
        }
      }
    }
  }

  TEST_CASE("penalty weights") {
    const Problem p = random_problem(1, 10, 2);
    CHECK(LogisticObjective(p.X, p.y, Penalty::L2, 1).l2_weight() == 1.0);
    CHECK(LogisticObjective(p.X, p.y, Penalty::L2, 1).l1_weight() == 0.0);
    CHECK(LogisticObjective(p.X, p.y, Penalty::L1, 1).l1_weight() == 1.0);
    CHECK(LogisticObjective(p.X, p.y, Penalty::ElasticNet, 1, 0.3).l1_weight() == 0.3);
    CHECK(LogisticObjective(p.X, p.y, Penalty::ElasticNet, 1, 0.3).l2_weight() == doctest::Approx(0.7));
    const LogisticObjective f(p.X, p.y, Penalty::L2, 2.0);
    std::vector<double> zeros(f.dim(), 0.0);
    CHECK(f.value(zeros) == doctest::Approx(2.0 * 10 * std::log(2.0)));
  }

  TEST_CASE("loss history is non-increasing") {
    for (Penalty pen : {Penalty::L1, Penalty::L2, Penalty::ElasticNet}) {
      const Problem p = random_problem(3, 80, 10);
      const auto m = train_logreg(p.X, p.y, {.penalty = pen, .C = 10, .max_iter = 300});
      REQUIRE(m.loss_history.size() >= 2);
      for (std::size_t i = 1; i < m.loss_history.size(); ++i) CHECK(m.loss_history[i] <= m.loss_history[i - 1] + 1e-12);
      const LogisticObjective f(p.X, p.y, pen, 10);
      CHECK(m.loss_history.back() == doctest::Approx(f.value(params_of(m))).epsilon(1e-12));
    }
  }

  TEST_CASE("l2 solution matches Newton's method") {
    const Problem p = random_problem(4, 60, 5, 2.0);
    for (double C : {0.1, 1.0, 10.0}) {
      const auto m = train_logreg(p.X, p.y, {.penalty = Penalty::L2, .C = C, .max_iter = 20000, .tol = 1e-10});
      CHECK(m.converged);
      const auto ref = newton_l2(p, C);
      const auto got = params_of(m);
      for (std::size_t j = 0; j < ref.size(); ++j) CHECK(got[j] == doctest::Approx(ref[j]).epsilon(1e-6).scale(1.0));
    }
  }

  TEST_CASE("separable data is fit perfectly") {
    const Problem p = separable(40);
    const auto m = train_logreg(p.X, p.y, {.penalty = Penalty::L2, .C = 100, .max_iter = 300});
    CHECK(accuracy(m.predict(p.X), p.y) == 1.0);
    CHECK(m.probability(p.X.rows[1]) > 0.5);
  }

  TEST_CASE("tiny C shrinks the weights towards zero") {
    const Problem p = random_problem(5, 50, 4);
    const auto m = train_logreg(p.X, p.y, {.penalty = Penalty::L2, .C = 1e-6, .max_iter = 300});
    for (double w : m.weights) CHECK(std::abs(w) < 1e-4);
    const auto l1 = train_logreg(p.X, p.y, {.penalty = Penalty::L1, .C = 1e-3, .max_iter = 300});
    for (double w : l1.weights) CHECK(w == 0.0);
  }

  TEST_CASE("l1 is sparser than l2") {
    const Problem p = random_problem(6, 100, 30);
    const auto l1 = train_logreg(p.X, p.y, {.penalty = Penalty::L1, .C = 0.5, .max_iter = 300});
    const auto l2 = train_logreg(p.X, p.y, {.penalty = Penalty::L2, .C = 0.5, .max_iter = 300});
    auto zeros = [](const LinearClassifier& m) { return std::count(m.weights.begin(), m.weights.end(), 0.0); };
    CHECK(zeros(l1) > zeros(l2));
  }

  TEST_CASE("training errors") {
    const Problem p = random_problem(7, 10, 2);
    std::vector<int> bad = p.y;
    bad[0] = 2;
    CHECK_THROWS_AS(train_logreg(p.X, bad), DataError);
    CHECK_THROWS_AS(train_logreg(p.X, std::vector<int>(10, 1)), DataError);
    CHECK_THROWS_AS(train_logreg(p.X, std::vector<int>{0, 1}), DataError);
    CHECK_THROWS_AS(parse_penalty("l3"), ConfigError);
    CHECK(parse_penalty("elasticnet") == Penalty::ElasticNet);
    CHECK(LogRegConfig{.penalty = Penalty::L1, .C = 100, .max_iter = 300}.describe() == "C=100 max_iter=300 penalty=l1");
  }

  TEST_CASE("stratified folds") {
    std::vector<int> y;
    for (int i = 0; i < 53; ++i) y.push_back(i % 5 == 0 ? 1 : 0);
    const auto folds = stratified_folds(y, 10, 9);
    REQUIRE(folds.size() == y.size());
    std::vector<int> size(10), pos(10);
    for (std::size_t i = 0; i < y.size(); ++i) {
      REQUIRE(folds[i] < 10);
      ++size[folds[i]];
      pos[folds[i]] += y[i];
    }
    CHECK(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()) <= 1);
    CHECK(*std::max_element(pos.begin(), pos.end()) - *std::min_element(pos.begin(), pos.end()) <= 1);
    CHECK(stratified_folds(y, 10, 9) == folds);
    CHECK(stratified_folds(y, 10, 10) != folds);
    CHECK_THROWS_AS(stratified_folds(y, 1, 0), ConfigError);
    CHECK_THROWS_AS(stratified_folds(std::vector<int>{0, 1}, 3, 0), DataError);
  }

  TEST_CASE("grid search") {
    const Problem p = separable(60);
    const auto grid = default_grid();
    CHECK(grid.size() == 36);
    const auto r = grid_search_cv(p.X, p.y, grid, 10, 0, 2);
    CHECK(r.results.size() == 36);
    CHECK(r.best_accuracy == 1.0);
    CHECK(r.majority_accuracy == 0.5);
    double best = 0;
    for (const auto& c : r.results) best = std::max(best, c.mean_accuracy);
    CHECK(best == r.best_accuracy);
    for (const auto& c : r.results) {
      if (c.mean_accuracy == best) {
        CHECK(c.config.describe() == r.best.describe());
        break;
      }
    }
    const auto again = grid_search_cv(p.X, p.y, grid, 10, 0, 1);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(again.results[i].mean_accuracy == r.results[i].mean_accuracy);
  }

  TEST_CASE("top features") {
    LinearClassifier m;
    m.weights = {2, -1, 0.5};
    const auto top = top_features(m, {"a", "b", "c"}, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0].first == "a");
    CHECK(top[1].first == "c");
    m.weights = {1, 1, 1};
    const auto ties = top_features(m, {"x", "y", "z"}, 5);
    CHECK(ties.size() == 3);
    CHECK(ties[0].first == "x");
    CHECK(ties[2].first == "z");
  }

  TEST_CASE("helper statistics") {
    CHECK(accuracy(std::vector<int>{1, 0, 1}, std::vector<int>{1, 1, 1}) == doctest::Approx(2.0 / 3));
    CHECK(majority_rate(std::vector<int>{1, 0, 0, 0}) == 0.75);
  }
}
