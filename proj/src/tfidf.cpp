#include "readbench/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "readbench/error.hpp"

namespace readbench {

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<double>>& dense) {
  SparseMatrix m;
  for (const auto& r : dense) {
    m.n_cols = std::max(m.n_cols, r.size());
    SparseRow row;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r[j] != 0.0) row.emplace_back(j, r[j]);
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

SparseMatrix SparseMatrix::select_rows(const std::vector<std::size_t>& indices) const {
  SparseMatrix m;
  m.n_cols = n_cols;
  m.rows.reserve(indices.size());
  for (std::size_t i : indices) m.rows.push_back(rows.at(i));
  return m;
}

double dot(const SparseRow& row, const std::vector<double>& dense) {
  double s = 0;
  for (const auto& [j, v] : row) s += v * dense[j];
  return s;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, std::size_t min_n, std::size_t max_n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string gram;
    for (std::size_t n = 1; n <= max_n && i + n <= tokens.size(); ++n) {
      if (n > 1) gram += ' ';
      gram += tokens[i + n - 1];
      if (n >= min_n) out.push_back(gram);
    }
  }
  return out;
}

namespace {

SparseRow weigh(const std::vector<std::string>& tokens, const SparseDocTermMatrix& m) {
  std::map<std::size_t, double> counts;
  for (const auto& g : ngrams(tokens, m.options.ngram_min, m.options.ngram_max)) {
    if (auto it = m.index.find(g); it != m.index.end()) counts[it->second] += 1.0;
  }
  SparseRow row;
  double norm = 0;
  for (const auto& [j, tf] : counts) {
    const double w = tf * m.idf[j];
    row.emplace_back(j, w);
    norm += w * w;
  }
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (auto& [j, w] : row) w /= norm;
  }
  return row;
}

}  // namespace

SparseMatrix SparseDocTermMatrix::transform(const std::vector<std::vector<std::string>>& docs) const {
  SparseMatrix out;
  out.n_cols = vocabulary.size();
  for (const auto& d : docs) out.rows.push_back(weigh(d, *this));
  return out;
}

SparseDocTermMatrix tfidf_fit(const std::vector<std::vector<std::string>>& docs, const TfidfOptions& options) {
  if (docs.size() < 2) throw DataError("tfidf_fit: need at least two documents");
  if (options.ngram_min < 1 || options.ngram_max < options.ngram_min) throw ConfigError("tfidf_fit: bad n-gram range");

  std::map<std::string, std::size_t> df;
  for (const auto& d : docs) {
    const auto grams = ngrams(d, options.ngram_min, options.ngram_max);
    for (const auto& g : std::set<std::string>(grams.begin(), grams.end())) ++df[g];
  }

  SparseDocTermMatrix m;
  m.options = options;
  const double n = static_cast<double>(docs.size());
  for (const auto& [gram, count] : df) {
    if (count < options.min_df) continue;
    m.index.emplace(gram, m.vocabulary.size());
    m.vocabulary.push_back(gram);
    m.document_frequency.push_back(count);
    m.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  if (m.vocabulary.empty()) throw DataError("tfidf_fit: empty vocabulary after min_df filtering");
  m.matrix = m.transform(docs);
  return m;
}

}  // namespace readbench
