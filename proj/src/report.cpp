#include "readbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "readbench/csv.hpp"
#include "readbench/error.hpp"

namespace readbench {

namespace {

void header_comments(CsvWriter& w, const ReportHeader& h) {
  w.comment("config_sha256=" + h.config_sha256);
  w.comment("seed=" + std::to_string(h.seed));
}

std::string header_markdown(const ReportHeader& h) {
  return fmt::format("config_sha256: `{}`  \nseed: {}\n\n", h.config_sha256, h.seed);
}

std::string two_decimals(double v) {
  std::string s = fmt::format("{:.2f}", v);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string_view group_name(MetricGroup g) {
  switch (g) {
    case MetricGroup::SurfaceForm: return "Surface-form";
    case MetricGroup::Psycholinguistic: return "Psycholinguistics";
    case MetricGroup::ModelBased: return "Model-based";
  }
  return "";
}

std::string md_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|' || c == '*' || c == '_') out += '\\';
    out += c;
  }
  return out;
}

std::string slug(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out;
}

std::string percent(double v) { return fmt::format("{:.2f}", 100.0 * v); }

}  // namespace

std::string format_tau_cell(double tau, std::optional<double> p_value) {
  std::string s = two_decimals(tau);
  if (p_value && *p_value < 0.01) s += '*';
  return s;
}

std::string correlations_csv(const BenchResult& r, const ReportHeader& h) {
  CsvWriter w;
  header_comments(w, h);
  w.row({"metric_id", "dataset", "tau_b", "p_value", "n", "concordant", "discordant", "ties_x_only", "ties_y_only",
         "ties_both", "excluded", "status"});
  for (std::size_t m = 0; m < r.metrics.size(); ++m) {
    for (std::size_t d = 0; d < r.datasets.size(); ++d) {
      const BenchCell& c = r.cells[m][d];
      const std::string key(metric_info(r.metrics[m]).key);
      if (c.result) {
        const auto& x = *c.result;
        w.row({key, r.datasets[d], format_double(x.tau_b), format_double(x.p_value), std::to_string(x.n),
               std::to_string(x.concordant), std::to_string(x.discordant), std::to_string(x.ties_x_only),
               std::to_string(x.ties_y_only), std::to_string(x.ties_both), std::to_string(c.excluded), "ok"});
      } else {
        w.row({key, r.datasets[d], "", "", "", "", "", "", "", "", std::to_string(c.excluded), c.status});
      }
    }
  }
  return w.str();
}

std::string tau_matrix_csv(const BenchResult& r, const ReportHeader& h) {
  CsvWriter w;
  header_comments(w, h);
  return w.str() + tau_matrix_to_csv(r.tau);
}

std::string rank_table_csv(const BenchResult& r, const ReportHeader& h) {
  CsvWriter w;
  header_comments(w, h);
  std::vector<std::string> head{"metric_id"};
  head.insert(head.end(), r.ranks.datasets.begin(), r.ranks.datasets.end());
  head.push_back("avg_rank");
  w.row(head);
  for (std::size_t m = 0; m < r.ranks.metrics.size(); ++m) {
    std::vector<std::string> row{r.ranks.metrics[m]};
    for (const auto& rank : r.ranks.ranks[m]) row.push_back(rank ? format_double(*rank) : "");
    row.push_back(r.ranks.avg_rank[m] ? format_double(*r.ranks.avg_rank[m]) : "");
    w.row(row);
  }
  return w.str();
}

std::string corpus_summary_csv(const BenchResult& r, const ReportHeader& h) {
  std::vector<CorpusSummary> summaries;
  for (const auto& run : r.runs) summaries.push_back(run.summary);
  CsvWriter w;
  header_comments(w, h);
  return w.str() + summaries_to_csv(summaries);
}

std::string judgments_csv(const JudgeRun& run, const ReportHeader& h) {
  CsvWriter w;
  header_comments(w, h);
  w.row({"doc_id", "value", "status", "raw_completion"});
  for (const auto& o : run.outcomes) {
    if (o.judgment) {
      w.row({o.document_id, std::to_string(o.judgment->value), "ok", o.judgment->raw_completion});
    } else {
      w.row({o.document_id, "", o.error, ""});
    }
  }
  return w.str();
}

std::string bench_markdown(const BenchResult& r, const ReportHeader& h) {
  std::string out = "# Readability metric correlations\n\n" + header_markdown(h);
  out +=
      "Kendall tau-b between each metric and the gold labels. `*` marks p < 0.01. Bold marks the four strongest "
      "|tau| in each dataset and the four best average ranks. `-` marks a missing cell.\n\n";

  out += "| Type | Metric |";
  for (const auto& d : r.datasets) out += " " + md_escape(d) + " |";
  out += " Avg. Rank |\n|---|---|";
  for (std::size_t d = 0; d < r.datasets.size(); ++d) out += "---:|";
  out += "---:|\n";

  std::vector<double> avgs;
  for (const auto& a : r.ranks.avg_rank) {
    if (a) avgs.push_back(*a);
  }
  std::sort(avgs.begin(), avgs.end());
  const double avg_cut = avgs.empty() ? 0.0 : avgs[std::min<std::size_t>(3, avgs.size() - 1)];

  std::optional<MetricGroup> current;
  for (std::size_t m = 0; m < r.metrics.size(); ++m) {
    const MetricInfo& info = metric_info(r.metrics[m]);
    out += "| ";
    if (current != info.group) {
      out += group_name(info.group);
      current = info.group;
    }
    out += " | " + md_escape(info.display_name) + " |";
    for (std::size_t d = 0; d < r.datasets.size(); ++d) {
      const BenchCell& c = r.cells[m][d];
      if (!c.result) {
        out += " - |";
        continue;
      }
      const std::string cell = md_escape(format_tau_cell(c.result->tau_b, c.result->p_value));
      const auto& rank = r.ranks.ranks[m][d];
      out += (rank && *rank <= 4.0) ? " **" + cell + "** |" : " " + cell + " |";
    }
    const auto& avg = r.ranks.avg_rank[m];
    if (!avg) {
      out += " - |\n";
    } else {
      const std::string v = fmt::format("{:.1f}", *avg);
      out += *avg <= avg_cut ? " **" + v + "** |\n" : " " + v + " |\n";
    }
  }

  std::vector<CorpusSummary> summaries;
  for (const auto& run : r.runs) summaries.push_back(run.summary);
  out += "\n## Corpora\n\n" + summaries_to_markdown(summaries);

  std::vector<std::string> notes = r.warnings;
  for (std::size_t m = 0; m < r.metrics.size(); ++m) {
    for (std::size_t d = 0; d < r.datasets.size(); ++d) {
      const BenchCell& c = r.cells[m][d];
      if (!c.result) {
        notes.push_back(fmt::format("{} on {}: {}", metric_info(r.metrics[m]).key, r.datasets[d], c.status));
      } else if (c.excluded > 0) {
        notes.push_back(fmt::format("{} on {}: {} documents without a score were excluded",
                                    metric_info(r.metrics[m]).key, r.datasets[d], c.excluded));
      }
    }
  }
  if (!notes.empty()) {
    out += "\n## Notes\n\n";
    for (const auto& n : notes) out += "- " + md_escape(n) + "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError(fmt::format("cannot write '{}'", path.string()));
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw DataError(fmt::format("failed writing '{}'", path.string()));
}

std::vector<std::string> write_bench_reports(const BenchResult& r, const ReportHeader& h,
                                             const std::filesystem::path& dir) {
  std::map<std::string, std::string> files{
      {"correlations.csv", correlations_csv(r, h)},     {"tau_matrix.csv", tau_matrix_csv(r, h)},
      {"rank_table.csv", rank_table_csv(r, h)},         {"corpus_summary.csv", corpus_summary_csv(r, h)},
      {"report.md", bench_markdown(r, h)},
  };
  for (const auto& run : r.runs) {
    for (const auto& [kind, jr] : run.judge_runs) {
      files.emplace(fmt::format("judgments_{}_{}.csv", slug(run.corpus.name), to_string(kind)), judgments_csv(jr, h));
    }
  }
  std::vector<std::string> names;
  for (const auto& [name, content] : files) {
    write_text_file(dir / name, content);
    names.push_back(name);
  }
  return names;
}

std::string rationale_markdown(const RationaleReport& rep, const ReportHeader& h, std::size_t top_terms) {
  std::string out = "# Rationale analysis\n\n" + header_markdown(h);
  out += fmt::format("{} annotations over {} examples.", rep.annotations, rep.examples);
  if (rep.agreement) out += fmt::format(" Mean sample-level Jaccard agreement: {:.2f}.", *rep.agreement);
  out += "\n\n## Consensus categories per class\n\n| Class |";
  for (Category c : kAllCategories) out += " " + md_escape(to_string(c)) + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < std::size(kAllCategories); ++i) out += "---:|";
  out += "\n";
  for (const auto& [label, counts] : rep.consensus) {
    out += "| " + md_escape(label.empty() ? "(unlabeled)" : label) + " |";
    for (Category c : kAllCategories) {
      const auto it = counts.find(c);
      out += fmt::format(" {} |", it == counts.end() ? 0 : it->second);
    }
    out += "\n";
  }

  if (!rep.frequencies.empty()) {
    out += "\n## Most frequent terms\n";
    for (const auto& cf : rep.frequencies) {
      out += "\n### " + md_escape(cf.label) + "\n\n| Term | Count |\n|---|---:|\n";
      for (std::size_t i = 0; i < std::min(top_terms, cf.terms.size()); ++i) {
        out += fmt::format("| {} | {} |\n", md_escape(cf.terms[i].first), cf.terms[i].second);
      }
    }
  }

  if (rep.predictive) {
    const auto& p = *rep.predictive;
    out += fmt::format("\n## One-vs-all logistic regression\n\n{} documents, {} n-grams.\n\n", p.documents,
                       p.vocabulary_size);
    out += "| Readability Class | Hyperparameters | Majority Accuracy (%) | Best Accuracy (%) |\n|---|---|---:|---:|\n";
    for (const auto& c : p.classes) {
      out += fmt::format("| {} | {} | {} | {} |\n", md_escape(c.label), md_escape(c.search.best.describe()),
                         percent(c.search.majority_accuracy), percent(c.search.best_accuracy));
    }
    for (const auto& c : p.classes) {
      out += "\n### Top n-grams: " + md_escape(c.label) + "\n\n| N-gram | Weight |\n|---|---:|\n";
      for (const auto& [gram, weight] : c.top_features) {
        out += fmt::format("| {} | {:.4f} |\n", md_escape(gram), weight);
      }
    }
  }
  return out;
}

std::vector<std::string> write_rationale_reports(const RationaleReport& rep, const ReportHeader& h,
                                                 const std::filesystem::path& dir, std::size_t top_terms) {
  std::map<std::string, std::string> files;
  files["rationale_report.md"] = rationale_markdown(rep, h, top_terms);
  {
    CsvWriter w;
    header_comments(w, h);
    w.row({"label", "category", "count"});
    for (const auto& [label, counts] : rep.consensus) {
      for (const auto& [c, n] : counts) w.row({label, to_string(c), std::to_string(n)});
    }
    files["category_counts.csv"] = w.str();
  }
  {
    CsvWriter w;
    header_comments(w, h);
    w.row({"label", "term", "count"});
    for (const auto& cf : rep.frequencies) {
      for (const auto& [term, n] : cf.terms) w.row({cf.label, term, std::to_string(n)});
    }
    files["term_frequencies.csv"] = w.str();
  }
  if (rep.predictive) {
    CsvWriter grid;
    header_comments(grid, h);
    grid.row({"label", "C", "max_iter", "penalty", "mean_accuracy", "majority_accuracy", "best"});
    CsvWriter top;
    header_comments(top, h);
    top.row({"label", "rank", "ngram", "weight"});
    for (const auto& c : rep.predictive->classes) {
      for (const auto& res : c.search.results) {
        const bool best = res.config.C == c.search.best.C && res.config.max_iter == c.search.best.max_iter &&
                          res.config.penalty == c.search.best.penalty;
        grid.row({c.label, format_double(res.config.C), std::to_string(res.config.max_iter), to_string(res.config.penalty),
                  format_double(res.mean_accuracy), format_double(c.search.majority_accuracy), best ? "1" : "0"});
      }
      for (std::size_t i = 0; i < c.top_features.size(); ++i) {
        top.row({c.label, std::to_string(i + 1), c.top_features[i].first, format_double(c.top_features[i].second)});
      }
    }
    files["grid_search.csv"] = grid.str();
    files["top_features.csv"] = top.str();
  }
  std::vector<std::string> names;
  for (const auto& [name, content] : files) {
    write_text_file(dir / name, content);
    names.push_back(name);
  }
  return names;
}

}  // namespace readbench
