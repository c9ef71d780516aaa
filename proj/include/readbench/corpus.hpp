#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "readbench/lexicon.hpp"
#include "readbench/stats.hpp"
#include "readbench/textcore.hpp"

namespace readbench {

enum class LabelType { None, Ordinal, Continuous };

LabelType parse_label_type(std::string_view s);
std::string_view to_string(LabelType t);

/// Gold label: absent, an ordinal label name, or a continuous score.
using GoldLabel = std::variant<std::monostate, std::string, double>;

struct Document {
  std::string id;
  std::string text;
  GoldLabel gold;
  std::map<std::string, std::string> metadata;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::string name;
  LabelType label_type = LabelType::None;
  std::optional<OrdinalScale> scale;  // set iff label_type == Ordinal
  std::vector<Document> documents;

  std::size_t size() const noexcept { return documents.size(); }
  /// Gold labels as numbers: scale index for ordinal corpora, the raw value for
  /// continuous ones. Throws DataError when the corpus has no labels.
  std::vector<double> gold_values() const;
};

enum class CorpusFormat { Jsonl, Csv };

/// One text field of the composition template. Missing or empty fields are
/// omitted together with their prefix; present parts are joined by '\n'.
struct CompositionField {
  std::string field;
  std::string prefix;
};

struct CorpusSpec {
  std::string name;
  std::filesystem::path path;
  CorpusFormat format = CorpusFormat::Jsonl;
  std::string id_field = "id";  // records without it get their 1-based record number
  std::vector<CompositionField> text_fields{{"text", ""}};
  std::string label_field = "label";
  LabelType label_type = LabelType::None;
  std::optional<OrdinalScale> scale;

  /// Throws ConfigError when an ordinal spec lacks a scale or there are no text fields.
  void validate() const;
};

/// Names of the built-in presets (scienceqa, clear, eli_why_gpt4, ...).
std::vector<std::string> preset_names();
/// Spec for a built-in preset. Throws ConfigError for unknown names.
CorpusSpec preset_spec(std::string_view preset, std::filesystem::path path = {});

/// Spec from a JSON object. Recognized keys: preset, path, format, id_field,
/// text_fields [{field, prefix}], text_field, label_field, label_type, scale.
/// Explicit keys override the preset's values.
CorpusSpec corpus_spec_from_json(std::string_view name, std::string_view json_text,
                                 const std::filesystem::path& base_dir = {});

/// Loads documents from `spec.path`.
Corpus load_corpus(const CorpusSpec& spec);
/// Same, but parses `content` instead of reading the file.
Corpus parse_corpus(const CorpusSpec& spec, std::string_view content);

/// JSONL with {"id","text","label","metadata"}; `generic_spec` reads it back.
std::string serialize_jsonl(const Corpus& corpus);
CorpusSpec generic_spec(const Corpus& corpus, std::filesystem::path path = {});

struct SampleStrategy {
  enum class Kind { Uniform, PerClass } kind = Kind::Uniform;
  std::size_t n = 0;

  static SampleStrategy uniform(std::size_t n) { return {Kind::Uniform, n}; }
  static SampleStrategy per_class(std::size_t n) { return {Kind::PerClass, n}; }
};

struct SampleResult {
  Corpus corpus;
  std::vector<std::string> warnings;
};

/// Sampling without replacement, driven by std::mt19937_64 seeded with `seed`
/// and a partial Fisher-Yates shuffle with rejection-sampled bounded draws, so
/// samples are reproducible across platforms. Strata are visited in scale
/// order; a stratum smaller than n is taken whole and reported in warnings.
/// Selected documents keep their corpus order.
SampleResult sample(const Corpus& corpus, const SampleStrategy& strategy, std::uint64_t seed);

/// Uniform bounded draw in [0, bound) from a 64-bit engine, by rejection.
std::uint64_t bounded_draw(std::mt19937_64& engine, std::uint64_t bound);

struct Quartiles {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
};

/// Linear-interpolation quantiles (the common "type 7" definition). Throws on empty input.
Quartiles quartiles(std::vector<double> values);

struct LabelDistribution {
  std::string label;
  std::size_t count = 0;
  Quartiles words;
  Quartiles sentences;
};

struct CorpusSummary {
  std::string name;
  std::size_t size = 0;
  LabelType label_type = LabelType::None;
  double avg_words = 0;
  double avg_sentences = 0;
  std::vector<LabelDistribution> per_label;  // ordinal corpora only, in scale order
};

/// Throws DataError for an empty corpus.
CorpusSummary corpus_stats(const Corpus& corpus, const Lexicon& lexicon = Lexicon::builtin());
CorpusSummary corpus_stats(const Corpus& corpus, const std::vector<TextStats>& per_document);

std::string summaries_to_csv(const std::vector<CorpusSummary>& summaries);
std::string summaries_to_markdown(const std::vector<CorpusSummary>& summaries);

}  // namespace readbench
