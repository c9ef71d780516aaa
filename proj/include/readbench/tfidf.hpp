#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace readbench {

using SparseRow = std::vector<std::pair<std::size_t, double>>;  // (column, value), columns ascending

struct SparseMatrix {
  std::size_t n_cols = 0;
  std::vector<SparseRow> rows;

  std::size_t n_rows() const noexcept { return rows.size(); }
  static SparseMatrix from_dense(const std::vector<std::vector<double>>& dense);
  SparseMatrix select_rows(const std::vector<std::size_t>& indices) const;
};

double dot(const SparseRow& row, const std::vector<double>& dense);

struct TfidfOptions {
  std::size_t ngram_min = 1;
  std::size_t ngram_max = 4;
  std::size_t min_df = 2;
};

/// Document-term matrix with tf-idf weights. Raw counts are weighted by
/// idf = ln((1 + N) / (1 + df)) + 1 and each row is L2-normalized.
/// The vocabulary is sorted, n-grams are space-joined.
struct SparseDocTermMatrix {
  std::vector<std::string> vocabulary;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<double> idf;
  std::vector<std::size_t> document_frequency;
  SparseMatrix matrix;
  TfidfOptions options;

  /// Weights new documents with the fitted vocabulary and idf.
  SparseMatrix transform(const std::vector<std::vector<std::string>>& docs) const;
};

/// Throws DataError with fewer than two documents or when no n-gram reaches min_df.
SparseDocTermMatrix tfidf_fit(const std::vector<std::vector<std::string>>& docs, const TfidfOptions& options = {});

/// All n-grams of `tokens` with n in [min_n, max_n], in order of position then length.
std::vector<std::string> ngrams(const std::vector<std::string>& tokens, std::size_t min_n, std::size_t max_n);

}  // namespace readbench
