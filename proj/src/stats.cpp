#include "readbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "readbench/csv.hpp"
#include "readbench/error.hpp"
#include "readbench/lexicon.hpp"

namespace readbench {

OrdinalScale::OrdinalScale(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ConfigError("ordinal scale needs at least one label");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = i + 1; j < labels_.size(); ++j) {
      if (labels_[i] == labels_[j]) throw ConfigError("duplicate label in ordinal scale: " + labels_[i]);
    }
  }
}

bool OrdinalScale::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

int OrdinalScale::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw DataError("label '" + std::string(label) + "' is not in the ordinal scale");
  return static_cast<int>(it - labels_.begin());
}

OrdinalScale OrdinalScale::eli_why() { return OrdinalScale({"Elementary", "High School", "Graduate"}); }

std::vector<double> encode_labels(std::span<const std::string> labels, const OrdinalScale& scale) {
  std::vector<double> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(scale.index_of(l));
  return out;
}

namespace {

// Tie-group sums over a sorted sequence.
template <typename Eq>
TieSums tie_sums(std::size_t n, Eq&& equal_to_next) {
  TieSums s;
  std::size_t run = 1;
  auto flush = [&] {
    const double t = static_cast<double>(run);
    s.pairs += t * (t - 1) / 2;
    s.var_term += t * (t - 1) * (2 * t + 5);
    s.t1 += t * (t - 1);
    s.t2 += t * (t - 1) * (t - 2);
    run = 1;
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (equal_to_next(i)) {
      ++run;
    } else {
      flush();
    }
  }
  if (n > 0) flush();
  return s;
}

// Counts inversions while merge-sorting `v`; equal elements are not inversions.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[i] <= v[j]) {
      buf[k++] = v[i++];
    } else {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

CorrelationResult kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("kendall_tau_b: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw DataError("kendall_tau_b: need at least two observations");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) throw DataError("kendall_tau_b: NaN input");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  CorrelationResult r;
  r.n = static_cast<std::int64_t>(n);
  r.x_ties = tie_sums(n, [&](std::size_t i) { return x[order[i]] == x[order[i + 1]]; });
  const TieSums joint =
      tie_sums(n, [&](std::size_t i) { return x[order[i]] == x[order[i + 1]] && y[order[i]] == y[order[i + 1]]; });

  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const std::int64_t swaps = merge_count(ys, buf, 0, n);
  r.y_ties = tie_sums(n, [&](std::size_t i) { return ys[i] == ys[i + 1]; });

  const auto n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const auto n1 = static_cast<std::int64_t>(r.x_ties.pairs);
  const auto n2 = static_cast<std::int64_t>(r.y_ties.pairs);
  const auto n3 = static_cast<std::int64_t>(joint.pairs);
  if (n1 == n0 || n2 == n0) throw UndefinedCorrelationError("kendall_tau_b: constant input");

  r.discordant = swaps;
  r.concordant = n0 - n1 - n2 + n3 - swaps;
  r.ties_x_only = n1 - n3;
  r.ties_y_only = n2 - n3;
  r.ties_both = n3;
  const double num = static_cast<double>(r.concordant - r.discordant);
  const double den = std::sqrt(static_cast<double>(n0 - n1)) * std::sqrt(static_cast<double>(n0 - n2));
  r.tau_b = std::clamp(num / den, -1.0, 1.0);
  r.p_value = tau_p_value(r);
  return r;
}

double tau_p_value(const CorrelationResult& r) {
  if (r.n < 2) throw DataError("tau_p_value: need at least two observations");
  const double n = static_cast<double>(r.n);
  const double s = static_cast<double>(r.concordant - r.discordant);
  double var = (n * (n - 1) * (2 * n + 5) - r.x_ties.var_term - r.y_ties.var_term) / 18.0;
  var += r.x_ties.t1 * r.y_ties.t1 / (2 * n * (n - 1));
  if (r.n > 2) var += r.x_ties.t2 * r.y_ties.t2 / (9 * n * (n - 1) * (n - 2));
  if (var <= 0) return 1.0;
  const double z = s / std::sqrt(var);
  return std::clamp(std::erfc(std::abs(z) / std::sqrt(2.0)), 0.0, 1.0);
}

TieRule parse_tie_rule(std::string_view s) {
  if (s == "average") return TieRule::Average;
  if (s == "min") return TieRule::Min;
  throw ConfigError("unknown tie rule '" + std::string(s) + "' (expected average or min)");
}

std::string_view to_string(TieRule rule) { return rule == TieRule::Average ? "average" : "min"; }

RankTable rank_metrics(const TauMatrix& m, TieRule rule) {
  if (m.metrics.empty() || m.datasets.empty()) throw DataError("rank_metrics: empty matrix");
  if (m.cells.size() != m.metrics.size()) throw DataError("rank_metrics: row count mismatch");
  for (const auto& row : m.cells) {
    if (row.size() != m.datasets.size()) throw DataError("rank_metrics: column count mismatch");
  }

  RankTable t;
  t.metrics = m.metrics;
  t.datasets = m.datasets;
  t.ranks.assign(m.metrics.size(), std::vector<std::optional<double>>(m.datasets.size()));

  for (std::size_t d = 0; d < m.datasets.size(); ++d) {
    std::vector<std::pair<double, std::size_t>> col;
    for (std::size_t i = 0; i < m.metrics.size(); ++i) {
      if (m.at(i, d)) col.emplace_back(std::abs(*m.at(i, d)), i);
    }
    std::stable_sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t b = 0; b < col.size();) {
      std::size_t e = b + 1;
      while (e < col.size() && col[e].first == col[b].first) ++e;
      const double shared = rule == TieRule::Average ? (static_cast<double>(b + 1) + static_cast<double>(e)) / 2.0
                                                     : static_cast<double>(b + 1);
      for (std::size_t k = b; k < e; ++k) t.ranks[col[k].second][d] = shared;
      b = e;
    }
  }

  t.avg_rank.resize(m.metrics.size());
  for (std::size_t i = 0; i < m.metrics.size(); ++i) {
    double sum = 0;
    int count = 0;
    for (const auto& r : t.ranks[i]) {
      if (r) {
        sum += *r;
        ++count;
      }
    }
    if (count > 0) t.avg_rank[i] = sum / count;
  }
  return t;
}

TauMatrix parse_tau_matrix_csv(std::string_view content) {
  const CsvTable table = parse_csv(content, {.comment_prefix = '#'});
  if (table.header.size() < 2) throw DataError("tau matrix: header needs metric_id and at least one dataset", 1);
  TauMatrix m;
  m.datasets.assign(table.header.begin() + 1, table.header.end());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.row_lines[r];
    if (row.size() != table.header.size()) throw DataError("tau matrix: wrong number of fields", line);
    m.metrics.push_back(row[0]);
    std::vector<std::optional<double>> cells;
    for (std::size_t c = 1; c < row.size(); ++c) {
      const std::string& cell = row[c];
      if (cell.empty() || cell == "NA") {
        cells.emplace_back();
        continue;
      }
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw DataError("tau matrix: invalid number '" + cell + "'", line);
      }
      if (used != cell.size() || !std::isfinite(v)) throw DataError("tau matrix: invalid number '" + cell + "'", line);
      cells.emplace_back(v);
    }
    m.cells.push_back(std::move(cells));
  }
  if (m.metrics.empty()) throw DataError("tau matrix: no rows");
  return m;
}

TauMatrix read_tau_matrix_csv(const std::filesystem::path& path) { return parse_tau_matrix_csv(read_text_file(path)); }

std::string tau_matrix_to_csv(const TauMatrix& m) {
  CsvWriter w;
  std::vector<std::string> header{"metric_id"};
  header.insert(header.end(), m.datasets.begin(), m.datasets.end());
  w.row(header);
  for (std::size_t i = 0; i < m.metrics.size(); ++i) {
    std::vector<std::string> row{m.metrics[i]};
    for (const auto& c : m.cells[i]) row.push_back(c ? format_double(*c) : std::string("NA"));
    w.row(row);
  }
  return w.str();
}

}  // namespace readbench
