#include "readbench/metrics.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "readbench/error.hpp"

namespace readbench {
namespace {

using G = MetricGroup;
using O = Orientation;

constexpr std::array kMetrics = {
    MetricInfo{MetricId::Words, "words", "# Words", G::SurfaceForm, O::HarderIsLarger, true},
    MetricInfo{MetricId::Sentences, "sentences", "# Sentences", G::SurfaceForm, O::HarderIsLarger, true},
    MetricInfo{MetricId::AvgSentenceLength, "avg_sentence_length", "Avg. Sentence Length", G::SurfaceForm,
               O::HarderIsLarger, true},
    MetricInfo{MetricId::AvgReadingTime, "avg_reading_time", "Avg. Reading Time (s)", G::SurfaceForm,
               O::HarderIsLarger, true},
    MetricInfo{MetricId::Syllables, "syllables", "# Syllables", G::SurfaceForm, O::HarderIsLarger, true},
    MetricInfo{MetricId::Monosyllables, "monosyllables", "# Monosyllables", G::SurfaceForm, O::HarderIsLarger, true},
    MetricInfo{MetricId::Polysyllables, "polysyllables", "# Polysyllables", G::SurfaceForm, O::HarderIsLarger, true},
    MetricInfo{MetricId::DifficultWords, "difficult_words", "# Difficult Words", G::SurfaceForm, O::HarderIsLarger,
               true},
    MetricInfo{MetricId::FunctionWordFraction, "function_word_fraction", "Function Word Fraction", G::SurfaceForm,
               O::HarderIsLarger, true},
    MetricInfo{MetricId::TEScore, "te_score", "TE Score", G::SurfaceForm, O::HarderIsLarger, false},
    MetricInfo{MetricId::ARI, "ari", "Automatic Readability Index", G::Psycholinguistic, O::HarderIsLarger, true},
    MetricInfo{MetricId::ColemanLiau, "coleman_liau", "Coleman Liau Index", G::Psycholinguistic, O::HarderIsLarger,
               true},
    MetricInfo{MetricId::DaleChall, "dale_chall", "Dale Chall Readability Score", G::Psycholinguistic,
               O::HarderIsLarger, true},
    MetricInfo{MetricId::FleschKincaidGrade, "fkgl", "Flesch Reading Grade", G::Psycholinguistic, O::HarderIsLarger,
               true},
    MetricInfo{MetricId::FleschReadingEase, "fkre", "Flesch-Kincaid Reading Ease", G::Psycholinguistic,
               O::EasierIsLarger, true},
    MetricInfo{MetricId::GunningFog, "gunning_fog", "Gunning Fog", G::Psycholinguistic, O::HarderIsLarger, true},
    MetricInfo{MetricId::LinsearWrite, "linsear_write", "Linsear Write Formula", G::Psycholinguistic,
               O::HarderIsLarger, true},
    MetricInfo{MetricId::SMOG, "smog", "SMOG Index", G::Psycholinguistic, O::HarderIsLarger, true},
    MetricInfo{MetricId::ReadMePP, "readmepp", "ReadMe++", G::ModelBased, O::HarderIsLarger, false},
    MetricInfo{MetricId::MetaRaterReadability, "meta_rater_readability", "Meta Rater (readability)", G::ModelBased,
               O::HarderIsLarger, false},
    MetricInfo{MetricId::MetaRaterProfessionalism, "meta_rater_professionalism", "Meta Rater (professionalism)",
               G::ModelBased, O::HarderIsLarger, false},
    MetricInfo{MetricId::JudgeZeroShot, "judge_0shot", "LLM-as-a-judge (0-shot)", G::ModelBased, O::HarderIsLarger,
               false},
    MetricInfo{MetricId::JudgeFiveShot, "judge_5shot", "LLM-as-a-judge (5-shot)", G::ModelBased, O::HarderIsLarger,
               false},
    MetricInfo{MetricId::JudgeContinuous, "judge_continuous", "LLM-as-a-judge (continuous 0-100)", G::ModelBased,
               O::EasierIsLarger, false},
};

MetricValue make(MetricId id, double value) { return {id, value, metric_info(id).orientation}; }

void require_words(const TextStats& s, std::string_view metric) {
  if (s.n_words <= 0) throw DegenerateInputError(std::string(metric) + ": text has no words");
}

void require_sentences(const TextStats& s, std::string_view metric) {
  if (s.n_sentences <= 0) throw DegenerateInputError(std::string(metric) + ": text has no sentences");
}

double words_per_sentence(const TextStats& s) {
  return static_cast<double>(s.n_words) / static_cast<double>(s.n_sentences);
}

}  // namespace

std::span<const MetricInfo> all_metrics() { return kMetrics; }

const MetricInfo& metric_info(MetricId id) {
  for (const auto& m : kMetrics) {
    if (m.id == id) return m;
  }
  throw ConfigError("unknown metric id");
}

std::optional<MetricId> find_metric_id(std::string_view key) {
  for (const auto& m : kMetrics) {
    if (m.key == key) return m.id;
  }
  return std::nullopt;
}

MetricId parse_metric_id(std::string_view key) {
  if (auto id = find_metric_id(key)) return *id;
  throw ConfigError("unknown metric '" + std::string(key) + "'");
}

std::string to_csv_row(const MetricValue& v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v.value);
  (void)ec;
  return std::string(metric_info(v.id).key) + "," + std::string(buf, ptr);
}

std::optional<double> MetricReport::get(MetricId id) const {
  for (const auto& v : values) {
    if (v.id == id) return v.value;
  }
  return std::nullopt;
}

MetricReport surface_metrics(const TextStats& s, double reading_ms_per_char) {
  MetricReport r;
  r.values.push_back(make(MetricId::Words, static_cast<double>(s.n_words)));
  r.values.push_back(make(MetricId::Sentences, static_cast<double>(s.n_sentences)));
  if (s.n_sentences > 0) {
    r.values.push_back(make(MetricId::AvgSentenceLength, words_per_sentence(s)));
  } else {
    r.failures.push_back({MetricId::AvgSentenceLength, "text has no sentences"});
  }
  r.values.push_back(make(MetricId::AvgReadingTime, static_cast<double>(s.n_chars) * reading_ms_per_char / 1000.0));
  r.values.push_back(make(MetricId::Syllables, static_cast<double>(s.n_syllables)));
  r.values.push_back(make(MetricId::Monosyllables, static_cast<double>(s.n_monosyllables)));
  r.values.push_back(make(MetricId::Polysyllables, static_cast<double>(s.n_polysyllables)));
  r.values.push_back(make(MetricId::DifficultWords, static_cast<double>(s.n_difficult_words)));
  if (s.n_words > 0) {
    r.values.push_back(make(MetricId::FunctionWordFraction,
                            static_cast<double>(s.n_function_words) / static_cast<double>(s.n_words)));
  } else {
    r.failures.push_back({MetricId::FunctionWordFraction, "text has no words"});
  }
  return r;
}

MetricValue ari(const TextStats& s) {
  require_words(s, "ari");
  require_sentences(s, "ari");
  const double raw = 4.71 * (static_cast<double>(s.n_chars) / static_cast<double>(s.n_words)) +
                     0.5 * words_per_sentence(s) - 21.43;
  return make(MetricId::ARI, std::ceil(raw));
}

MetricValue coleman_liau(const TextStats& s) {
  require_words(s, "coleman_liau");
  const double per100 = 100.0 / static_cast<double>(s.n_words);
  const double letters = static_cast<double>(s.n_letters) * per100;
  const double sentences = static_cast<double>(s.n_sentences) * per100;
  return make(MetricId::ColemanLiau, 0.0588 * letters - 0.296 * sentences - 15.8);
}

MetricValue dale_chall(const TextStats& s, DaleChallScale scale) {
  require_words(s, "dale_chall");
  require_sentences(s, "dale_chall");
  double difficult = static_cast<double>(s.n_difficult_words) / static_cast<double>(s.n_words);
  if (scale == DaleChallScale::Percent) difficult *= 100.0;
  return make(MetricId::DaleChall, std::floor(64.0 - 0.95 * difficult - 0.69 * words_per_sentence(s)));
}

MetricValue fkre(const TextStats& s) {
  require_words(s, "fkre");
  require_sentences(s, "fkre");
  return make(MetricId::FleschReadingEase,
              206.835 - 1.015 * words_per_sentence(s) -
                  84.6 * (static_cast<double>(s.n_syllables) / static_cast<double>(s.n_words)));
}

MetricValue fkgl(const TextStats& s) {
  require_words(s, "fkgl");
  require_sentences(s, "fkgl");
  return make(MetricId::FleschKincaidGrade,
              0.39 * words_per_sentence(s) +
                  11.8 * (static_cast<double>(s.n_syllables) / static_cast<double>(s.n_words)) - 15.59);
}

MetricValue gunning_fog(const TextStats& s) {
  require_words(s, "gunning_fog");
  require_sentences(s, "gunning_fog");
  return make(MetricId::GunningFog,
              0.4 * (words_per_sentence(s) +
                     100.0 * (static_cast<double>(s.n_complex_words) / static_cast<double>(s.n_words))));
}

MetricValue linsear_write(const TextStats& s, LinsearDenominator denominator) {
  const LinsearSample& w = s.linsear_sample;
  const double points = 3.0 * static_cast<double>(w.hard_words) + static_cast<double>(w.easy_words);
  double r = 0.0;
  if (denominator == LinsearDenominator::Sentences) {
    if (w.sentences <= 0) throw DegenerateInputError("linsear_write: no sentences in the sample window");
    r = points / static_cast<double>(w.sentences);
  } else {
    const long words = w.easy_words + w.hard_words;
    if (words <= 0) throw DegenerateInputError("linsear_write: no words in the sample window");
    r = points / static_cast<double>(words);
  }
  return make(MetricId::LinsearWrite, r > 20.0 ? r / 2.0 : r / 2.0 - 1.0);
}

MetricValue smog(const TextStats& s) {
  require_sentences(s, "smog");
  return make(MetricId::SMOG,
              1.043 * std::sqrt(static_cast<double>(s.n_polysyllables) * 30.0 / static_cast<double>(s.n_sentences)) +
                  3.1291);
}

MetricValue compute_metric(MetricId id, const TextStats& s, const MetricOptions& options) {
  switch (id) {
    case MetricId::ARI: return ari(s);
    case MetricId::ColemanLiau: return coleman_liau(s);
    case MetricId::DaleChall: return dale_chall(s, options.dale_chall_scale);
    case MetricId::FleschReadingEase: return fkre(s);
    case MetricId::FleschKincaidGrade: return fkgl(s);
    case MetricId::GunningFog: return gunning_fog(s);
    case MetricId::LinsearWrite: return linsear_write(s, options.linsear_denominator);
    case MetricId::SMOG: return smog(s);
    default: break;
  }
  if (!metric_info(id).from_text) {
    throw ConfigError("metric '" + std::string(metric_info(id).key) + "' is not computable from text");
  }
  const MetricReport surface = surface_metrics(s, options.reading_ms_per_char);
  if (auto v = surface.get(id)) return make(id, *v);
  for (const auto& f : surface.failures) {
    if (f.id == id) throw DegenerateInputError(std::string(metric_info(id).key) + ": " + f.reason);
  }
  throw ConfigError("unhandled metric");
}

MetricReport compute_metrics(const TextStats& s, std::span<const MetricId> selection, const MetricOptions& options) {
  MetricReport r;
  for (MetricId id : selection) {
    try {
      r.values.push_back(compute_metric(id, s, options));
    } catch (const DegenerateInputError& e) {
      r.failures.push_back({id, e.what()});
    }
  }
  return r;
}

std::vector<MetricId> text_metrics() {
  std::vector<MetricId> out;
  for (const auto& m : kMetrics) {
    if (m.from_text) out.push_back(m.id);
  }
  return out;
}

}  // namespace readbench
