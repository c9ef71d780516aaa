#include "readbench/bench.hpp"

#include <algorithm>
#include <memory>

#include <fmt/format.h>

#include "readbench/error.hpp"

namespace readbench {

MetricId judge_metric(JudgeKind kind) {
  switch (kind) {
    case JudgeKind::Categorical0Shot: return MetricId::JudgeZeroShot;
    case JudgeKind::Categorical5Shot: return MetricId::JudgeFiveShot;
    case JudgeKind::Continuous: return MetricId::JudgeContinuous;
  }
  throw ConfigError("unknown judge kind");
}

std::size_t BenchResult::judge_failures() const {
  std::size_t n = 0;
  for (const auto& r : runs) {
    for (const auto& [kind, run] : r.judge_runs) n += run.failed_ids().size();
  }
  return n;
}

BenchCell correlate(const ScoreColumn& scores, std::span<const double> gold) {
  if (scores.size() != gold.size()) throw DataError("correlate: score and gold lengths differ");
  std::vector<double> x, y;
  BenchCell cell;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!scores[i]) {
      ++cell.excluded;
      continue;
    }
    x.push_back(*scores[i]);
    y.push_back(gold[i]);
  }
  if (x.size() < 2) {
    cell.status = "fewer than two scored documents";
    return cell;
  }
  try {
    cell.result = kendall_tau_b(x, y);
  } catch (const UndefinedCorrelationError& e) {
    cell.status = e.what();
  }
  return cell;
}

std::vector<MetricId> default_metrics(const RunConfig& config) {
  std::vector<MetricId> out;
  for (MetricId id : text_metrics()) out.push_back(id);
  if (config.judge) {
    for (JudgeKind k : config.judge->variants) out.push_back(judge_metric(k));
  }
  for (const auto& e : config.external_scores) out.push_back(e.metric);
  std::vector<MetricId> ordered;
  for (const auto& info : all_metrics()) {
    if (std::find(out.begin(), out.end(), info.id) != out.end()) ordered.push_back(info.id);
  }
  return ordered;
}

std::map<JudgeKind, JudgeRun> run_judges(const RunConfig& config, const Corpus& corpus, ChatEndpoint* endpoint,
                                         const std::function<void(std::string_view)>& log) {
  std::map<JudgeKind, JudgeRun> runs;
  if (!config.judge) return runs;
  const JudgeSettings& js = *config.judge;
  JudgeCache cache(js.cache);
  std::vector<Exemplar> shots;
  if (js.exemplars) shots = exemplars_from_json(read_text_file(*js.exemplars));
  for (JudgeKind kind : js.variants) {
    JudgeOptions opts;
    opts.model = js.model;
    opts.concurrency_limit = js.concurrency;
    opts.retry = js.retry;
    opts.max_total_requests = js.max_total_requests;
    opts.cache = &cache;
    if (kind == JudgeKind::Categorical5Shot) opts.shots = shots;
    opts.log = log;
    runs.emplace(kind, judge_corpus(corpus, endpoint, JudgeVariant::make(kind), opts));
  }
  return runs;
}

BenchResult run_bench(const RunConfig& config, const BenchOptions& options) {
  if (config.datasets.empty()) throw ConfigError("bench: the config lists no datasets");
  auto log = [&](std::string_view msg) {
    if (options.log) options.log(msg);
  };

  const Lexicon lexicon = load_lexicon(config.lexicon);
  std::unique_ptr<ChatEndpoint> owned;
  ChatEndpoint* endpoint = options.endpoint;
  if (!endpoint && config.judge) {
    try {
      owned = HttpChatEndpoint::from_environment(config.judge->base_url);
      endpoint = owned.get();
    } catch (const ConfigError& e) {
      log(fmt::format("{}; only cached judgments are available", e.what()));
    }
  }

  BenchResult result;
  result.metrics = config.metrics.empty() ? default_metrics(config) : config.metrics;
  for (const auto& d : config.datasets) result.datasets.push_back(d.spec.name);
  result.cells.assign(result.metrics.size(), std::vector<BenchCell>(result.datasets.size()));

  for (std::size_t di = 0; di < config.datasets.size(); ++di) {
    const DatasetConfig& dc = config.datasets[di];
    DatasetRun run;
    run.corpus = load_corpus(dc.spec);
    if (dc.sample) {
      auto sampled = sample(run.corpus, *dc.sample, config.seed);
      for (auto& w : sampled.warnings) result.warnings.push_back(fmt::format("{}: {}", dc.spec.name, w));
      run.corpus = std::move(sampled.corpus);
    }
    log(fmt::format("{}: {} documents", dc.spec.name, run.corpus.size()));
    const std::vector<double> gold = run.corpus.gold_values();
    run.stats.reserve(run.corpus.size());
    for (const auto& doc : run.corpus.documents) run.stats.push_back(compute_stats(doc.text, lexicon));
    run.summary = corpus_stats(run.corpus, run.stats);
    run.judge_runs = run_judges(config, run.corpus, endpoint, options.log);
    for (const auto& [kind, jr] : run.judge_runs) {
      const auto failed = jr.failed_ids();
      if (!failed.empty()) {
        result.warnings.push_back(
            fmt::format("{}: {} of {} documents not judged by {}", dc.spec.name, failed.size(), jr.outcomes.size(),
                        to_string(kind)));
      }
    }

    for (std::size_t mi = 0; mi < result.metrics.size(); ++mi) {
      const MetricId id = result.metrics[mi];
      const MetricInfo& info = metric_info(id);
      BenchCell& cell = result.cells[mi][di];
      std::optional<ScoreColumn> scores;

      if (info.from_text) {
        scores.emplace();
        for (const auto& st : run.stats) {
          try {
            scores->push_back(compute_metric(id, st, config.metric_options).value);
          } catch (const DegenerateInputError&) {
            scores->push_back(std::nullopt);
          }
        }
      } else {
        for (const auto& [kind, jr] : run.judge_runs) {
          if (judge_metric(kind) != id) continue;
          scores.emplace();
          for (const auto& o : jr.outcomes) {
            scores->push_back(o.judgment ? std::optional<double>(o.judgment->value) : std::nullopt);
          }
        }
        for (const auto& e : config.external_scores) {
          if (e.metric != id || e.dataset != dc.spec.name) continue;
          const auto by_id = read_external_scores(e.path, e.aggregate);
          scores.emplace();
          for (const auto& doc : run.corpus.documents) {
            const auto it = by_id.find(doc.id);
            scores->push_back(it == by_id.end() ? std::nullopt : std::optional<double>(it->second));
          }
        }
      }

      if (!scores) {
        cell.status = "no source for this metric";
        continue;
      }
      cell = correlate(*scores, gold);
    }
    result.runs.push_back(std::move(run));
  }

  result.tau.datasets = result.datasets;
  for (std::size_t mi = 0; mi < result.metrics.size(); ++mi) {
    result.tau.metrics.emplace_back(metric_info(result.metrics[mi]).key);
    auto& row = result.tau.cells.emplace_back();
    for (const auto& cell : result.cells[mi]) {
      row.push_back(cell.result ? std::optional<double>(cell.result->tau_b) : std::nullopt);
    }
  }
  result.ranks = rank_metrics(result.tau, config.tie_rule);
  return result;
}

}  // namespace readbench
