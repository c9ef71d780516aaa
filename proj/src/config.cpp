#include "readbench/config.hpp"

#include <set>

#include <fmt/format.h>
#include "json.hpp"

#include "readbench/error.hpp"
#include "readbench/hashing.hpp"

namespace readbench {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(fmt::format("config: '{}' must be an object", where));
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(fmt::format("config: unknown key '{}' in {}", key, where));
    }
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

std::filesystem::path existing(const std::filesystem::path& base, const std::string& p, std::string_view what) {
  auto path = resolve(base, p);
  if (!std::filesystem::exists(path)) throw ConfigError(fmt::format("config: {} '{}' does not exist", what, path.string()));
  return path;
}

SampleStrategy parse_sample(const json& j) {
  check_keys(j, "sample", {"strategy", "n"});
  const auto strategy = j.value("strategy", std::string("uniform"));
  const auto n = j.at("n").get<std::size_t>();
  if (strategy == "uniform") return SampleStrategy::uniform(n);
  if (strategy == "per_class") return SampleStrategy::per_class(n);
  throw ConfigError(fmt::format("config: unknown sampling strategy '{}'", strategy));
}

JudgeSettings parse_judge(const json& j, const std::filesystem::path& base) {
  check_keys(j, "judge", {"base_url", "model", "variants", "concurrency", "max_total_requests", "max_attempts",
                          "initial_backoff_ms", "backoff_multiplier", "max_backoff_ms", "cache", "exemplars"});
  JudgeSettings s;
  s.base_url = j.at("base_url").get<std::string>();
  s.model = j.at("model").get<std::string>();
  for (const auto& v : j.at("variants")) s.variants.push_back(parse_judge_kind(v.get<std::string>()));
  if (s.variants.empty()) throw ConfigError("config: judge.variants is empty");
  s.concurrency = j.value("concurrency", s.concurrency);
  if (s.concurrency == 0) throw ConfigError("config: judge.concurrency must be positive");
  s.max_total_requests = j.value("max_total_requests", s.max_total_requests);
  s.retry.max_attempts = j.value("max_attempts", s.retry.max_attempts);
  if (s.retry.max_attempts < 1) throw ConfigError("config: judge.max_attempts must be at least 1");
  s.retry.initial_backoff = std::chrono::milliseconds(j.value("initial_backoff_ms", s.retry.initial_backoff.count()));
  s.retry.multiplier = j.value("backoff_multiplier", s.retry.multiplier);
  s.retry.max_backoff = std::chrono::milliseconds(j.value("max_backoff_ms", s.retry.max_backoff.count()));
  if (j.contains("cache")) s.cache = resolve(base, j.at("cache").get<std::string>());
  if (j.contains("exemplars")) s.exemplars = existing(base, j.at("exemplars").get<std::string>(), "exemplar file");
  return s;
}

}  // namespace

std::string RunConfig::hash() const { return sha256_hex(canonical_json); }

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir,
                           const ConfigOverrides& overrides) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  try {
    check_keys(j, "config", {"seed", "out", "reading_ms_per_char", "dale_chall_scale", "linsear_denominator",
                             "tie_rule", "metrics", "lexicon", "datasets", "judge", "external_scores"});
    cfg.seed = overrides.seed.value_or(j.value("seed", std::uint64_t{0}));
    if (overrides.out_dir) {
      cfg.out_dir = *overrides.out_dir;
    } else if (j.contains("out")) {
      cfg.out_dir = resolve(base_dir, j.at("out").get<std::string>());
    }

    cfg.metric_options.reading_ms_per_char = j.value("reading_ms_per_char", cfg.metric_options.reading_ms_per_char);
    if (!(cfg.metric_options.reading_ms_per_char > 0)) throw ConfigError("config: reading_ms_per_char must be positive");
    if (j.contains("dale_chall_scale")) {
      const auto s = j.at("dale_chall_scale").get<std::string>();
      if (s == "percent") cfg.metric_options.dale_chall_scale = DaleChallScale::Percent;
      else if (s == "fraction") cfg.metric_options.dale_chall_scale = DaleChallScale::Fraction;
      else throw ConfigError(fmt::format("config: unknown dale_chall_scale '{}'", s));
    }
    if (j.contains("linsear_denominator")) {
      const auto s = j.at("linsear_denominator").get<std::string>();
      if (s == "sentences") cfg.metric_options.linsear_denominator = LinsearDenominator::Sentences;
      else if (s == "words") cfg.metric_options.linsear_denominator = LinsearDenominator::Words;
      else throw ConfigError(fmt::format("config: unknown linsear_denominator '{}'", s));
    }
    if (j.contains("tie_rule")) cfg.tie_rule = parse_tie_rule(j.at("tie_rule").get<std::string>());
    if (j.contains("metrics")) {
      for (const auto& m : j.at("metrics")) cfg.metrics.push_back(parse_metric_id(m.get<std::string>()));
    }
    if (j.contains("lexicon")) {
      const auto& lx = j.at("lexicon");
      check_keys(lx, "lexicon", {"easy_words", "function_words", "abbreviations", "syllable_exceptions"});
      auto opt = [&](const char* key) -> std::optional<std::filesystem::path> {
        if (!lx.contains(key)) return std::nullopt;
        return existing(base_dir, lx.at(key).get<std::string>(), "lexicon file");
      };
      cfg.lexicon.easy_words = opt("easy_words");
      cfg.lexicon.function_words = opt("function_words");
      cfg.lexicon.abbreviations = opt("abbreviations");
      cfg.lexicon.syllable_exceptions = opt("syllable_exceptions");
    }

    std::set<std::string> names;
    for (const auto& d : j.value("datasets", json::array())) {
      if (!d.is_object()) throw ConfigError("config: dataset entries must be objects");
      const auto name = d.at("name").get<std::string>();
      if (!names.insert(name).second) throw ConfigError(fmt::format("config: duplicate dataset '{}'", name));
      json spec_json = d;
      spec_json.erase("name");
      spec_json.erase("sample");
      DatasetConfig dc;
      dc.spec = corpus_spec_from_json(name, spec_json.dump(), base_dir);
      if (dc.spec.path.empty()) throw ConfigError(fmt::format("config: dataset '{}' has no path", name));
      if (!std::filesystem::exists(dc.spec.path)) {
        throw ConfigError(fmt::format("config: dataset file '{}' does not exist", dc.spec.path.string()));
      }
      if (d.contains("sample")) dc.sample = parse_sample(d.at("sample"));
      cfg.datasets.push_back(std::move(dc));
    }

    if (j.contains("judge") && !j.at("judge").is_null()) cfg.judge = parse_judge(j.at("judge"), base_dir);

    for (const auto& e : j.value("external_scores", json::array())) {
      check_keys(e, "external_scores", {"metric", "dataset", "path", "aggregate"});
      ExternalScoreConfig x;
      x.metric = parse_metric_id(e.at("metric").get<std::string>());
      if (metric_info(x.metric).from_text) {
        throw ConfigError(fmt::format("config: metric '{}' is computed from text", metric_info(x.metric).key));
      }
      x.dataset = e.at("dataset").get<std::string>();
      if (!names.contains(x.dataset)) throw ConfigError(fmt::format("config: unknown dataset '{}'", x.dataset));
      x.path = existing(base_dir, e.at("path").get<std::string>(), "score file");
      if (e.contains("aggregate")) x.aggregate = parse_aggregate_mode(e.at("aggregate").get<std::string>());
      cfg.external_scores.push_back(std::move(x));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  json canonical = j;
  canonical.erase("out");
  canonical["seed"] = cfg.seed;
  cfg.canonical_json = canonical.dump();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  if (!std::filesystem::exists(path)) throw ConfigError(fmt::format("config file '{}' does not exist", path.string()));
  return parse_run_config(read_text_file(path), path.parent_path(), overrides);
}

}  // namespace readbench
