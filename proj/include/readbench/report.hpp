#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "readbench/bench.hpp"
#include "readbench/rationales.hpp"

namespace readbench {

/// Identifies the run in every emitted file.
struct ReportHeader {
  std::string config_sha256;
  std::uint64_t seed = 0;
};

/// Two-decimal tau with '*' for p < 0.01.
std::string format_tau_cell(double tau, std::optional<double> p_value);

std::string correlations_csv(const BenchResult& result, const ReportHeader& header);
std::string tau_matrix_csv(const BenchResult& result, const ReportHeader& header);
std::string rank_table_csv(const BenchResult& result, const ReportHeader& header);
std::string corpus_summary_csv(const BenchResult& result, const ReportHeader& header);
std::string judgments_csv(const JudgeRun& run, const ReportHeader& header);
/// Grouped table with starred cells, the four strongest |tau| per dataset in
/// bold and an Avg. Rank column, followed by corpus summaries and notes.
std::string bench_markdown(const BenchResult& result, const ReportHeader& header);

/// Writes every bench report into `dir` and returns the file names, sorted.
std::vector<std::string> write_bench_reports(const BenchResult& result, const ReportHeader& header,
                                             const std::filesystem::path& dir);

struct RationaleReport {
  std::size_t annotations = 0;
  std::size_t examples = 0;
  std::optional<double> agreement;  // needs two annotators
  std::map<std::string, std::map<Category, long>> consensus;
  std::vector<ClassFrequencies> frequencies;
  std::optional<PredictiveAnalysis> predictive;
};

std::vector<std::string> write_rationale_reports(const RationaleReport& report, const ReportHeader& header,
                                                 const std::filesystem::path& dir, std::size_t top_terms = 30);
std::string rationale_markdown(const RationaleReport& report, const ReportHeader& header, std::size_t top_terms = 30);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace readbench
