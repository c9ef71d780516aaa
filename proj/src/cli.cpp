#include "readbench/cli.hpp"

#include <cmath>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "readbench/bench.hpp"
#include "readbench/config.hpp"
#include "readbench/csv.hpp"
#include "readbench/error.hpp"
#include "readbench/hashing.hpp"
#include "readbench/metrics.hpp"
#include "readbench/rationales.hpp"
#include "readbench/report.hpp"
#include "readbench/stats.hpp"

namespace readbench {

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

ConfigOverrides overrides(const Globals& g) {
  ConfigOverrides o;
  o.seed = g.seed;
  if (!g.out.empty()) o.out_dir = g.out;
  return o;
}

RunConfig require_config(const Globals& g) {
  if (g.config.empty()) throw ConfigError("this command needs --config");
  return load_run_config(g.config, overrides(g));
}

// Up to four decimals, trailing zeros dropped.
std::string table_number(double v) {
  std::string s = fmt::format("{:.4f}", v);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

// ---- score ----

struct ScoreArgs {
  std::vector<std::string> text;
  std::string file;
  std::vector<std::string> metrics;
  std::string format = "table";
  std::optional<double> reading_ms;
  std::string dale_chall_scale;
  std::string linsear_denominator;
};

int cmd_score(const ScoreArgs& a, const Globals& g, Streams s) {
  MetricOptions options;
  LexiconPaths lexicon_paths;
  if (!g.config.empty()) {
    const RunConfig cfg = require_config(g);
    options = cfg.metric_options;
    lexicon_paths = cfg.lexicon;
  }
  if (a.reading_ms) {
    if (!(*a.reading_ms > 0)) throw ConfigError("--reading-ms must be positive");
    options.reading_ms_per_char = *a.reading_ms;
  }
  if (a.dale_chall_scale == "fraction") options.dale_chall_scale = DaleChallScale::Fraction;
  if (a.linsear_denominator == "words") options.linsear_denominator = LinsearDenominator::Words;

  std::string text;
  if (!a.text.empty()) {
    for (std::size_t i = 0; i < a.text.size(); ++i) text += (i ? " " : "") + a.text[i];
  } else if (!a.file.empty()) {
    text = read_text_file(a.file);
  } else {
    text.assign(std::istreambuf_iterator<char>(s.in), std::istreambuf_iterator<char>());
  }
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw DataError("empty input");

  std::vector<MetricId> selection;
  for (const auto& m : a.metrics) selection.push_back(parse_metric_id(m));
  if (selection.empty()) selection = text_metrics();
  for (MetricId id : selection) {
    if (!metric_info(id).from_text) {
      throw ConfigError(fmt::format("metric '{}' cannot be computed from text", metric_info(id).key));
    }
  }

  const Lexicon lexicon = load_lexicon(lexicon_paths);
  const TextStats stats = compute_stats(text, lexicon);
  if (stats.n_words == 0) throw DataError("input contains no words");
  const MetricReport report = compute_metrics(stats, selection, options);

  if (a.format == "csv") {
    s.out << "metric_id,value\n";
    for (MetricId id : selection) {
      if (const auto v = report.get(id)) {
        s.out << to_csv_row(MetricValue{id, *v, metric_info(id).orientation}) << '\n';
      } else {
        s.out << metric_info(id).key << ",\n";
      }
    }
  } else {
    std::size_t width = 0;
    for (MetricId id : selection) width = std::max(width, metric_info(id).display_name.size());
    for (MetricId id : selection) {
      const auto v = report.get(id);
      s.out << fmt::format("{:<{}}  {}\n", metric_info(id).display_name, width, v ? table_number(*v) : "n/a");
    }
  }
  for (const auto& f : report.failures) s.err << fmt::format("{}: {}\n", metric_info(f.id).key, f.reason);
  return kExitOk;
}

// ---- bench ----

int cmd_bench(const Globals& g, Streams s) {
  const RunConfig cfg = require_config(g);
  BenchOptions opts;
  opts.log = [&](std::string_view msg) { s.err << msg << '\n'; };
  const BenchResult result = run_bench(cfg, opts);
  const ReportHeader header{cfg.hash(), cfg.seed};
  for (const auto& name : write_bench_reports(result, header, cfg.out_dir)) {
    s.out << (cfg.out_dir / name).string() << '\n';
  }
  for (const auto& w : result.warnings) s.err << "warning: " << w << '\n';
  return result.judge_failures() > 0 ? kExitUpstream : kExitOk;
}

// ---- judge ----

struct JudgeArgs {
  std::vector<std::string> datasets;
  std::vector<std::string> variants;
};

int cmd_judge(const JudgeArgs& a, const Globals& g, Streams s) {
  RunConfig cfg = require_config(g);
  if (!cfg.judge) throw ConfigError("the config has no judge section");
  if (!a.variants.empty()) {
    cfg.judge->variants.clear();
    for (const auto& v : a.variants) cfg.judge->variants.push_back(parse_judge_kind(v));
  }
  auto endpoint = HttpChatEndpoint::from_environment(cfg.judge->base_url);
  const ReportHeader header{cfg.hash(), cfg.seed};
  auto log = [&](std::string_view msg) { s.err << msg << '\n'; };

  std::size_t failures = 0;
  bool any = false;
  for (const auto& dc : cfg.datasets) {
    if (!a.datasets.empty() && std::find(a.datasets.begin(), a.datasets.end(), dc.spec.name) == a.datasets.end()) {
      continue;
    }
    any = true;
    Corpus corpus = load_corpus(dc.spec);
    if (dc.sample) corpus = sample(corpus, *dc.sample, cfg.seed).corpus;
    for (const auto& [kind, run] : run_judges(cfg, corpus, endpoint.get(), log)) {
      const auto failed = run.failed_ids();
      failures += failed.size();
      const auto name = fmt::format("judgments_{}_{}.csv", dc.spec.name, to_string(kind));
      write_text_file(cfg.out_dir / name, judgments_csv(run, header));
      s.out << fmt::format("{} {}: {} judged, {} failed, {} cached, {} requests, {} retries -> {}\n", dc.spec.name,
                           to_string(kind), run.outcomes.size() - failed.size(), failed.size(), run.cache_hits,
                           run.network_calls, run.retries, (cfg.out_dir / name).string());
      for (const auto& id : failed) s.err << fmt::format("failed: {} {}\n", dc.spec.name, id);
    }
  }
  if (!any) throw ConfigError("no dataset matched --dataset");
  return failures > 0 ? kExitUpstream : kExitOk;
}

// ---- rationales ----

struct RationaleArgs {
  std::string annotations;
  std::size_t folds = 10;
  std::size_t top_k = 20;
  std::size_t top_terms = 30;
  std::size_t threads = 0;
  bool no_model = false;
  std::vector<double> C;
  std::vector<int> max_iter;
  std::vector<std::string> penalty;
};

int cmd_rationales(const RationaleArgs& a, const Globals& g, Streams s) {
  std::uint64_t seed = g.seed.value_or(0);
  std::filesystem::path out_dir = g.out.empty() ? std::filesystem::path("readbench-out") : std::filesystem::path(g.out);
  if (!g.config.empty()) {
    const RunConfig cfg = require_config(g);
    seed = cfg.seed;
    out_dir = cfg.out_dir;
  }

  const std::string content = read_text_file(a.annotations);
  const auto annotations = parse_annotations(content);
  RationaleReport rep;
  rep.annotations = annotations.size();
  std::set<std::string> examples, annotators;
  for (const auto& x : annotations) {
    examples.insert(x.example_id);
    annotators.insert(x.annotator_id);
  }
  rep.examples = examples.size();
  if (annotators.size() >= 2) rep.agreement = jaccard_agreement(annotations);
  rep.consensus = consensus_counts(annotations);
  const auto docs = rationale_documents(annotations);
  rep.frequencies = frequency_profile(docs);

  PredictiveOptions popts;
  popts.folds = a.folds;
  popts.seed = seed;
  popts.top_k = a.top_k;
  popts.threads = a.threads;
  if (!a.C.empty() || !a.max_iter.empty() || !a.penalty.empty()) {
    const std::vector<double> Cs = a.C.empty() ? std::vector<double>{0.01, 0.1, 1, 10, 100, 500} : a.C;
    const std::vector<int> iters = a.max_iter.empty() ? std::vector<int>{100, 300} : a.max_iter;
    const std::vector<std::string> pens =
        a.penalty.empty() ? std::vector<std::string>{"l1", "l2", "elasticnet"} : a.penalty;
    popts.grid.clear();
    for (double C : Cs) {
      for (int it : iters) {
        for (const auto& p : pens) {
          LogRegConfig cfg;
          cfg.C = C;
          cfg.max_iter = it;
          cfg.penalty = parse_penalty(p);
          popts.grid.push_back(cfg);
        }
      }
    }
  }
  if (!a.no_model) {
    if (docs.size() < 2) {
      s.err << "warning: fewer than two labeled classes with rationale text; skipping the predictive analysis\n";
    } else {
      rep.predictive = predictive_analysis(docs, popts);
    }
  }

  nlohmann::json canonical = {{"command", "rationales"},
                              {"annotations_sha256", sha256_hex(content)},
                              {"folds", a.folds},
                              {"seed", seed},
                              {"top_k", a.top_k},
                              {"top_terms", a.top_terms},
                              {"model", !a.no_model}};
  for (const auto& c : popts.grid) canonical["grid"].push_back(c.describe());
  const ReportHeader header{sha256_hex(canonical.dump()), seed};

  s.out << fmt::format("annotations: {} over {} examples\n", rep.annotations, rep.examples);
  if (rep.agreement) s.out << fmt::format("jaccard agreement: {:.4f}\n", *rep.agreement);
  if (rep.predictive) {
    for (const auto& c : rep.predictive->classes) {
      s.out << fmt::format("{}: best {} accuracy {:.2f}% (majority {:.2f}%)\n", c.label, c.search.best.describe(),
                           100 * c.search.best_accuracy, 100 * c.search.majority_accuracy);
    }
  }
  for (const auto& name : write_rationale_reports(rep, header, out_dir, a.top_terms)) {
    s.out << (out_dir / name).string() << '\n';
  }
  return kExitOk;
}

// ---- stats ----

struct StatsCorpusArgs {
  std::string preset;
  std::string path;
  std::string format = "markdown";
};

int cmd_stats_corpus(const StatsCorpusArgs& a, const Globals& g, Streams s) {
  std::vector<CorpusSummary> summaries;
  if (!a.path.empty()) {
    const CorpusSpec spec = a.preset.empty() ? CorpusSpec{} : preset_spec(a.preset);
    CorpusSpec with_path = spec;
    with_path.path = a.path;
    if (with_path.name.empty()) with_path.name = std::filesystem::path(a.path).stem().string();
    summaries.push_back(corpus_stats(load_corpus(with_path)));
  } else {
    const RunConfig cfg = require_config(g);
    const Lexicon lexicon = load_lexicon(cfg.lexicon);
    for (const auto& dc : cfg.datasets) {
      Corpus corpus = load_corpus(dc.spec);
      if (dc.sample) corpus = sample(corpus, *dc.sample, cfg.seed).corpus;
      summaries.push_back(corpus_stats(corpus, lexicon));
    }
  }
  s.out << (a.format == "csv" ? summaries_to_csv(summaries) : summaries_to_markdown(summaries));
  return kExitOk;
}

struct StatsRankArgs {
  std::string tau_csv;
  std::string tie_rule = "average";
};

int cmd_stats_rank(const StatsRankArgs& a, Streams s) {
  const RankTable t = rank_metrics(read_tau_matrix_csv(a.tau_csv), parse_tie_rule(a.tie_rule));
  CsvWriter w;
  std::vector<std::string> head{"metric_id"};
  head.insert(head.end(), t.datasets.begin(), t.datasets.end());
  head.push_back("avg_rank");
  w.row(head);
  for (std::size_t m = 0; m < t.metrics.size(); ++m) {
    std::vector<std::string> row{t.metrics[m]};
    for (const auto& r : t.ranks[m]) row.push_back(r ? format_double(*r) : "");
    row.push_back(t.avg_rank[m] ? table_number(*t.avg_rank[m]) : "");
    w.row(row);
  }
  s.out << w.str();
  return kExitOk;
}

struct StatsTauArgs {
  std::string file;
  std::string x;
  std::string y;
};

int cmd_stats_tau(const StatsTauArgs& a, Streams s) {
  const CsvTable table = parse_csv(read_text_file(a.file));
  const auto cx = table.column(a.x), cy = table.column(a.y);
  if (!cx || !cy) throw DataError(fmt::format("columns '{}' and '{}' must both exist", a.x, a.y));
  std::vector<double> xs, ys;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto num = [&](std::size_t c) {
      try {
        std::size_t used = 0;
        const double v = std::stod(row.at(c), &used);
        if (used != row[c].size()) throw std::invalid_argument("trailing characters");
        return v;
      } catch (const std::exception&) {
        throw DataError(fmt::format("'{}' is not a number", c < row.size() ? row[c] : ""), table.row_lines[r]);
      }
    };
    xs.push_back(num(*cx));
    ys.push_back(num(*cy));
  }
  const CorrelationResult r = kendall_tau_b(xs, ys);
  s.out << fmt::format("tau_b={}\np_value={}\nn={}\nconcordant={}\ndiscordant={}\n", format_double(r.tau_b),
                       format_double(r.p_value), r.n, r.concordant, r.discordant);
  return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  Streams streams{in, out, err};
  Globals g;
  CLI::App app{"Readability metric benchmark", "readbench"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--config", g.config, "Run configuration (JSON)");
  app.add_option("--seed", g.seed, "Seed for sampling and cross-validation");
  app.add_option("--out", g.out, "Output directory");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score one text with the readability metrics");
  score_cmd->add_option("text", score.text, "Text to score (default: standard input)");
  score_cmd->add_option("--file", score.file, "Read the text from a file")->check(CLI::ExistingFile);
  score_cmd->add_option("--metrics", score.metrics, "Comma-separated metric ids")->delimiter(',')->allow_extra_args(false);
  score_cmd->add_option("--format", score.format, "table or csv")->check(CLI::IsMember({"table", "csv"}));
  score_cmd->add_option("--reading-ms", score.reading_ms, "Reading time per character in milliseconds");
  score_cmd->add_option("--dale-chall-scale", score.dale_chall_scale, "percent or fraction")
      ->check(CLI::IsMember({"percent", "fraction"}));
  score_cmd->add_option("--linsear-denominator", score.linsear_denominator, "sentences or words")
      ->check(CLI::IsMember({"sentences", "words"}));

  auto* bench_cmd = app.add_subcommand("bench", "Correlate metrics with gold labels and write reports");

  JudgeArgs judge;
  auto* judge_cmd = app.add_subcommand("judge", "Collect judge scores for the configured datasets");
  judge_cmd->add_option("--dataset", judge.datasets, "Restrict to these datasets");
  judge_cmd->add_option("--variant", judge.variants, "Restrict to these judge variants");

  RationaleArgs rat;
  auto* rat_cmd = app.add_subcommand("rationales", "Analyze annotator rationales");
  rat_cmd->add_option("annotations", rat.annotations, "Annotation CSV")->required()->check(CLI::ExistingFile);
  rat_cmd->add_option("--folds", rat.folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
  rat_cmd->add_option("--top-k", rat.top_k, "N-grams listed per class");
  rat_cmd->add_option("--top-terms", rat.top_terms, "Terms listed per class in the markdown report");
  rat_cmd->add_option("--threads", rat.threads, "Worker threads for the grid search (0 = all cores)");
  rat_cmd->add_flag("--no-model", rat.no_model, "Skip the logistic-regression analysis");
  rat_cmd->add_option("--C", rat.C, "Grid values of C")->delimiter(',')->allow_extra_args(false);
  rat_cmd->add_option("--max-iter", rat.max_iter, "Grid values of max_iter")->delimiter(',')->allow_extra_args(false);
  rat_cmd->add_option("--penalty", rat.penalty, "Grid penalties (l1, l2, elasticnet)")->delimiter(',')->allow_extra_args(false);

  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics and rank utilities");
  stats_cmd->fallthrough();
  stats_cmd->require_subcommand(1);
  StatsCorpusArgs sc;
  auto* corpus_cmd = stats_cmd->add_subcommand("corpus", "Length distributions per dataset and label");
  corpus_cmd->add_option("--preset", sc.preset, "Dataset preset for --path");
  corpus_cmd->add_option("--path", sc.path, "Corpus file (default: datasets of --config)")->check(CLI::ExistingFile);
  corpus_cmd->add_option("--format", sc.format, "markdown or csv")->check(CLI::IsMember({"markdown", "csv"}));
  StatsRankArgs sr;
  auto* rank_cmd = stats_cmd->add_subcommand("rank", "Rank metrics from a tau matrix CSV");
  rank_cmd->add_option("tau_csv", sr.tau_csv, "Tau matrix CSV")->required()->check(CLI::ExistingFile);
  rank_cmd->add_option("--tie-rule", sr.tie_rule, "average or min")->check(CLI::IsMember({"average", "min"}));
  StatsTauArgs st;
  auto* tau_cmd = stats_cmd->add_subcommand("tau", "Kendall tau-b between two CSV columns");
  tau_cmd->add_option("file", st.file, "CSV file")->required()->check(CLI::ExistingFile);
  tau_cmd->add_option("--x", st.x, "First column")->required();
  tau_cmd->add_option("--y", st.y, "Second column")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (score_cmd->parsed()) return cmd_score(score, g, streams);
    if (bench_cmd->parsed()) return cmd_bench(g, streams);
    if (judge_cmd->parsed()) return cmd_judge(judge, g, streams);
    if (rat_cmd->parsed()) return cmd_rationales(rat, g, streams);
    if (corpus_cmd->parsed()) return cmd_stats_corpus(sc, g, streams);
    if (rank_cmd->parsed()) return cmd_stats_rank(sr, streams);
    if (tau_cmd->parsed()) return cmd_stats_tau(st, streams);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const EndpointError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUpstream;
  } catch (const UnparseableCompletionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUpstream;
  } catch (const PartialResultError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUpstream;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace readbench
