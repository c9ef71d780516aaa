#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "readbench/error.hpp"
#include "readbench/lexicon.hpp"
#include "readbench/stats.hpp"

using namespace readbench;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, int levels) {
  std::uniform_int_distribution<int> d(0, levels - 1);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool constant(const std::vector<double>& v) { return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end(); }

TauMatrix one_dataset(std::vector<double> taus) {
  TauMatrix m;
  m.datasets = {"d"};
  for (std::size_t i = 0; i < taus.size(); ++i) {
    m.metrics.push_back("m" + std::to_string(i));
    m.cells.push_back({taus[i]});
  }
  return m;
}

std::string read_data(const char* name) {
  return read_text_file(std::filesystem::path(READBENCH_TEST_DATA) / "data" / name);
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("ordinal encoding") {
    const std::vector<std::string> labels{"Elementary", "Graduate", "High School"};
    CHECK(encode_labels(labels, OrdinalScale::eli_why()) == std::vector<double>{0, 2, 1});
    const std::vector<std::string> bad{"PhD"};
    CHECK_THROWS_AS(encode_labels(bad, OrdinalScale::eli_why()), DataError);
    CHECK_THROWS_AS(OrdinalScale({"a", "a"}), ConfigError);
    CHECK_THROWS_AS(OrdinalScale(std::vector<std::string>{}), ConfigError);
  }

  TEST_CASE("tau examples") {
    const std::vector<double> up{1, 2, 3, 4, 5};
    const std::vector<double> down{5, 4, 3, 2, 1};
    CHECK(kendall_tau_b(up, up).tau_b == doctest::Approx(1.0));
    CHECK(kendall_tau_b(up, down).tau_b == doctest::Approx(-1.0));
    const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const std::vector<double> y{1, 2, 3, 4, 5, 5, 4, 3, 2, 1};
    const auto r = kendall_tau_b(x, y);
    CHECK(r.tau_b == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r.p_value == doctest::Approx(1.0));
  }

  TEST_CASE("perfect agreement on ten points is significant") {
    std::vector<double> x(10);
    for (int i = 0; i < 10; ++i) x[i] = i;
    const auto r = kendall_tau_b(x, x);
    CHECK(r.p_value < 1e-4);
    CHECK(oracle::exact_tau_p_value(10, 0) == doctest::Approx(2.0 / 3628800.0));
  }

  TEST_CASE("tau agrees with pairwise enumeration") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 2 + rng() % 60;
      const int levels = 2 + static_cast<int>(rng() % 8);
      const auto x = random_vector(rng, n, levels);
      const auto y = random_vector(rng, n, levels);
      if (constant(x) || constant(y)) continue;
      const auto fast = kendall_tau_b(x, y);
      const auto slow = oracle::brute_force_tau(x, y);
      CHECK(fast.tau_b == doctest::Approx(slow.tau_b).epsilon(1e-12));
      CHECK(fast.concordant == slow.concordant);
      CHECK(fast.discordant == slow.discordant);
      CHECK(fast.ties_x_only == slow.tied_x_only);
      CHECK(fast.ties_y_only == slow.tied_y_only);
      CHECK(fast.ties_both == slow.tied_both);
      CHECK(std::abs(fast.tau_b) <= 1.0);
    }
  }

  TEST_CASE("tau is symmetric and invariant to monotone transforms") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = random_vector(rng, 40, 6);
      const auto y = random_vector(rng, 40, 9);
      if (constant(x) || constant(y)) continue;
      const double t = kendall_tau_b(x, y).tau_b;
      CHECK(kendall_tau_b(y, x).tau_b == doctest::Approx(t).epsilon(1e-12));
      std::vector<double> fx(x.size()), neg(y.size());
      std::transform(x.begin(), x.end(), fx.begin(), [](double v) { return std::exp(v) + 3.0 * v; });
      std::transform(y.begin(), y.end(), neg.begin(), [](double v) { return -v; });
      CHECK(kendall_tau_b(fx, y).tau_b == doctest::Approx(t).epsilon(1e-12));
      CHECK(kendall_tau_b(x, neg).tau_b == doctest::Approx(-t).epsilon(1e-12));
    }
  }

  TEST_CASE("tau errors") {
    const std::vector<double> a{1, 2, 3}, b{1, 2}, c{4, 4, 4}, one{1};
    CHECK_THROWS_AS(kendall_tau_b(a, b), DataError);
    CHECK_THROWS_AS(kendall_tau_b(one, one), DataError);
    CHECK_THROWS_AS(kendall_tau_b(a, c), UndefinedCorrelationError);
    const std::vector<double> nan{1, NAN, 3};
    CHECK_THROWS_AS(kendall_tau_b(a, nan), DataError);
  }

  TEST_CASE("exact null distribution oracle matches enumeration") {
    std::mt19937_64 rng(5);
    std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> y = x;
      std::shuffle(y.begin(), y.end(), rng);
      const auto counts = oracle::brute_force_tau(x, y);
      CHECK(oracle::exact_tau_p_value(7, counts.discordant) ==
            doctest::Approx(oracle::enumerated_tau_p_value(x, y)).epsilon(1e-12));
    }
  }

  TEST_CASE("normal p-value tracks the exact distribution for moderate n") {
    std::mt19937_64 rng(6);
    std::vector<double> x(30);
    for (int i = 0; i < 30; ++i) x[i] = i;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> y = x;
      // A few local swaps keep the correlation strong but not perfect.
      for (int k = 0; k < 8 + trial * 4; ++k) {
        const std::size_t i = rng() % 29;
        std::swap(y[i], y[i + 1]);
      }
      const auto r = kendall_tau_b(x, y);
      const double exact = oracle::exact_tau_p_value(30, r.discordant);
      CHECK(r.p_value >= 0.0);
      CHECK(r.p_value <= 1.0);
      if (exact > 1e-6) CHECK(std::abs(std::log10(r.p_value) - std::log10(exact)) < 0.5);
    }
  }

  TEST_CASE("p-value grows as agreement weakens") {
    std::vector<double> x(20);
    for (int i = 0; i < 20; ++i) x[i] = i;
    std::vector<double> y = x;
    double previous = kendall_tau_b(x, y).p_value;
    for (std::size_t k = 0; k < 10; ++k) {
      std::swap(y[2 * k], y[2 * k + 1]);
      const double p = kendall_tau_b(x, y).p_value;
      CHECK(p > previous);
      previous = p;
    }
  }

  TEST_CASE("rank rules") {
    const auto r = rank_metrics(one_dataset({0.9, -0.95, 0.1}));
    CHECK(*r.ranks[0][0] == 2);
    CHECK(*r.ranks[1][0] == 1);
    CHECK(*r.ranks[2][0] == 3);
    const auto tie = rank_metrics(one_dataset({0.5, -0.5, 0.1}));
    CHECK(*tie.ranks[0][0] == 1.5);
    CHECK(*tie.ranks[1][0] == 1.5);
    CHECK(*tie.ranks[2][0] == 3);
    const auto min = rank_metrics(one_dataset({0.5, -0.5, 0.1}), TieRule::Min);
    CHECK(*min.ranks[0][0] == 1);
    CHECK(*min.ranks[1][0] == 1);
    CHECK(*min.ranks[2][0] == 3);
    CHECK(parse_tie_rule("min") == TieRule::Min);
    CHECK_THROWS_AS(parse_tie_rule("dense"), ConfigError);
  }

  TEST_CASE("ranks skip missing cells and are invariant to negation") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1, 1);
    TauMatrix m;
    m.datasets = {"a", "b", "c"};
    for (int i = 0; i < 12; ++i) {
      m.metrics.push_back("m" + std::to_string(i));
      std::vector<std::optional<double>> row;
      for (int d = 0; d < 3; ++d) row.push_back((i + d) % 5 == 0 ? std::nullopt : std::optional(u(rng)));
      m.cells.push_back(row);
    }
    const auto r = rank_metrics(m);
    TauMatrix flipped = m;
    for (auto& row : flipped.cells) {
      if (row[1]) row[1] = -*row[1];
    }
    const auto f = rank_metrics(flipped);
    for (std::size_t i = 0; i < m.metrics.size(); ++i) {
      CHECK(r.avg_rank[i] == f.avg_rank[i]);
      for (std::size_t d = 0; d < 3; ++d) CHECK(r.ranks[i][d].has_value() == m.cells[i][d].has_value());
    }
    for (std::size_t d = 0; d < 3; ++d) {
      double sum = 0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < m.metrics.size(); ++i) {
        if (r.ranks[i][d]) {
          sum += *r.ranks[i][d];
          ++count;
        }
      }
      CHECK(sum == doctest::Approx(count * (count + 1) / 2.0));
    }
  }

  TEST_CASE("metric with no cells has no average rank") {
    TauMatrix m = one_dataset({0.3, 0.2});
    m.metrics.push_back("empty");
    m.cells.push_back({std::nullopt});
    const auto r = rank_metrics(m);
    CHECK_FALSE(r.avg_rank[2].has_value());
  }

  TEST_CASE("tau matrix csv round trip") {
    const TauMatrix m = parse_tau_matrix_csv("# comment\nmetric_id,a,b\nx,0.5,NA\ny,,-0.25\n");
    REQUIRE(m.metrics == std::vector<std::string>{"x", "y"});
    CHECK(*m.at(0, 0) == 0.5);
    CHECK_FALSE(m.at(0, 1).has_value());
    CHECK_FALSE(m.at(1, 0).has_value());
    const TauMatrix again = parse_tau_matrix_csv(tau_matrix_to_csv(m));
    CHECK(again.metrics == m.metrics);
    CHECK(again.datasets == m.datasets);
    CHECK(again.cells == m.cells);
    CHECK_THROWS_AS(parse_tau_matrix_csv("metric_id,a\nx,abc\n"), DataError);
  }

  TEST_CASE("reference matrix replay") {
    const TauMatrix m = parse_tau_matrix_csv(read_data("reference_tau.csv"));
    CHECK(m.metrics.size() == 23);
    CHECK(m.datasets.size() == 5);
    const auto r = rank_metrics(m);
    const auto it = std::find(r.metrics.begin(), r.metrics.end(), "judge_0shot");
    REQUIRE(it != r.metrics.end());
    const auto idx = static_cast<std::size_t>(it - r.metrics.begin());
    CHECK(*r.avg_rank[idx] == doctest::Approx(2.4));
  }
}
