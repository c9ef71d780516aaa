#include <algorithm>
#include <cmath>
#include <numeric>

#include "readbench/csv.hpp"
#include "readbench/judge.hpp"
#include "readbench/lexicon.hpp"

namespace readbench {

AggregateMode parse_aggregate_mode(std::string_view s) {
  if (s == "mean" || s == "avg") return AggregateMode::Mean;
  if (s == "max") return AggregateMode::Max;
  throw ConfigError("unknown aggregate mode '" + std::string(s) + "' (expected mean or max)");
}

double aggregate_sentence_scores(std::span<const double> per_sentence, AggregateMode mode) {
  if (per_sentence.empty()) throw DataError("aggregate_sentence_scores: no sentence scores");
  if (mode == AggregateMode::Max) return *std::max_element(per_sentence.begin(), per_sentence.end());
  return std::accumulate(per_sentence.begin(), per_sentence.end(), 0.0) / static_cast<double>(per_sentence.size());
}

std::map<std::string, double> parse_external_scores(std::string_view content, AggregateMode mode) {
  const CsvTable t = parse_csv(content, {.comment_prefix = '#'});
  const auto id_col = t.column("doc_id");
  const auto score_col = t.column("score");
  if (!id_col || !score_col) throw DataError("external scores need doc_id and score columns", 1);
  const bool per_sentence = t.column("sentence_index").has_value();

  std::map<std::string, std::vector<double>> grouped;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() != t.header.size()) throw DataError("wrong number of fields", t.row_lines[r]);
    double v = 0;
    std::size_t used = 0;
    try {
      v = std::stod(row[*score_col], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != row[*score_col].size() || !std::isfinite(v)) {
      throw DataError("invalid score '" + row[*score_col] + "'", t.row_lines[r]);
    }
    auto& bucket = grouped[row[*id_col]];
    if (!per_sentence && !bucket.empty()) throw DataError("duplicate doc_id '" + row[*id_col] + "'", t.row_lines[r]);
    bucket.push_back(v);
  }
  std::map<std::string, double> out;
  for (const auto& [id, scores] : grouped) out[id] = aggregate_sentence_scores(scores, mode);
  return out;
}

std::map<std::string, double> read_external_scores(const std::filesystem::path& path, AggregateMode mode) {
  return parse_external_scores(read_text_file(path), mode);
}

}  // namespace readbench
