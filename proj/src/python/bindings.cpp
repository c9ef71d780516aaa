#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "readbench/cli.hpp"
#include "readbench/error.hpp"
#include "readbench/judge.hpp"
#include "readbench/logreg.hpp"
#include "readbench/metrics.hpp"
#include "readbench/rationales.hpp"
#include "readbench/stats.hpp"
#include "readbench/textcore.hpp"

namespace py = pybind11;
using namespace readbench;

namespace {

py::dict stats_dict(const TextStats& s) {
  py::dict d;
  d["words"] = s.n_words;
  d["sentences"] = s.n_sentences;
  d["syllables"] = s.n_syllables;
  d["monosyllables"] = s.n_monosyllables;
  d["polysyllables"] = s.n_polysyllables;
  d["difficult_words"] = s.n_difficult_words;
  d["complex_words"] = s.n_complex_words;
  d["chars"] = s.n_chars;
  d["letters"] = s.n_letters;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Readability metrics, rank correlation and judge prompt utilities";

  auto base = py::register_exception<Error>(m, "ReadbenchError");
  py::register_exception<DataError>(m, "DataError", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base);
  py::register_exception<UndefinedCorrelationError>(m, "UndefinedCorrelationError", base);
  py::register_exception<UnparseableCompletionError>(m, "UnparseableCompletionError", base);

  m.def("text_stats", [](const std::string& text) { return stats_dict(compute_stats(text)); }, py::arg("text"),
        "Lexical counts of a text.");

  m.def(
      "score",
      [](const std::string& text, std::optional<std::vector<std::string>> metrics) {
        std::vector<MetricId> ids;
        if (metrics) {
          for (const auto& k : *metrics) ids.push_back(parse_metric_id(k));
        } else {
          ids = text_metrics();
        }
        const MetricReport report = compute_metrics(compute_stats(text), ids);
        py::dict out;
        for (MetricId id : ids) {
          const auto v = report.get(id);
          out[py::str(std::string(metric_info(id).key))] = v ? py::cast(*v) : py::none();
        }
        return out;
      },
      py::arg("text"), py::arg("metrics") = py::none(),
      "Metric values keyed by metric id; None where a denominator is zero.");

  m.def("metric_ids", [] {
    std::vector<std::string> out;
    for (const auto& info : all_metrics()) out.emplace_back(info.key);
    return out;
  });

  m.def("count_syllables", [](const std::string& word) { return count_syllables(word); }, py::arg("word"));

  m.def(
      "kendall_tau_b",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const CorrelationResult r = kendall_tau_b(x, y);
        return py::make_tuple(r.tau_b, r.p_value);
      },
      py::arg("x"), py::arg("y"), "(tau_b, p_value)");

  m.def(
      "rank_metrics",
      [](const std::string& tau_csv, const std::string& tie_rule) {
        const RankTable t = rank_metrics(parse_tau_matrix_csv(tau_csv), parse_tie_rule(tie_rule));
        py::dict out;
        for (std::size_t i = 0; i < t.metrics.size(); ++i) {
          out[py::str(t.metrics[i])] = t.avg_rank[i] ? py::cast(*t.avg_rank[i]) : py::none();
        }
        return out;
      },
      py::arg("tau_csv"), py::arg("tie_rule") = "average", "Average rank per metric from tau matrix CSV text.");

  m.def(
      "build_prompt",
      [](const std::string& kind, const std::string& text, const std::string& model) {
        const JudgeVariant v = JudgeVariant::make(parse_judge_kind(kind));
        std::vector<Exemplar> shots;
        if (v.kind == JudgeKind::Categorical5Shot) shots = builtin_exemplars();
        return build_prompt(v, text, shots, model).to_json();
      },
      py::arg("kind"), py::arg("text"), py::arg("model") = "", "Chat request body as JSON.");

  m.def(
      "parse_judgment",
      [](const std::string& kind, const std::string& completion) {
        return parse_judgment(JudgeVariant::make(parse_judge_kind(kind)), completion).value;
      },
      py::arg("kind"), py::arg("completion"));

  m.def(
      "preprocess", [](const std::string& text) { return preprocess(text); }, py::arg("text"),
      "Lowercased, stopword-free, lemmatized tokens.");

  m.def(
      "jaccard",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        CategorySet sa, sb;
        for (const auto& c : a) sa.insert(parse_category(c));
        for (const auto& c : b) sb.insert(parse_category(c));
        return jaccard(sa, sb);
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args, const std::string& stdin_text) {
        std::istringstream in(stdin_text);
        std::ostringstream out, err;
        const int code = run_cli(std::move(args), in, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), py::arg("stdin") = "", "(exit_code, stdout, stderr)");
}
