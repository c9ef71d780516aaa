#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "readbench/lexicon.hpp"
#include "readbench/logreg.hpp"
#include "readbench/tfidf.hpp"

namespace readbench {

/// Suffix-rule lemmatizer: exceptions first, then plural, -ing, -ed and
/// comparative rules. Expects lowercase input.
class Lemmatizer {
 public:
  explicit Lemmatizer(std::unordered_map<std::string, std::string> exceptions);
  static const Lemmatizer& builtin();

  std::string lemmatize(std::string_view word) const;

 private:
  std::unordered_map<std::string, std::string> exceptions_;
};

const WordSet& builtin_stopwords();

/// Lowercase, drop stopwords, lemmatize.
std::vector<std::string> preprocess(std::string_view text, const WordSet& stopwords = builtin_stopwords(),
                                    const Lemmatizer& lemmatizer = Lemmatizer::builtin());

enum class Category { Wording, SentenceStructure, Examples, Depth, Curriculum };

inline constexpr Category kAllCategories[] = {Category::Wording, Category::SentenceStructure, Category::Examples,
                                              Category::Depth, Category::Curriculum};

/// Accepts the display names ("Wording/Terminology", ...) and the short keys
/// ("wording", "structure", "examples", "depth", "curriculum"), case-insensitively.
Category parse_category(std::string_view name);
std::string to_string(Category category);  // display name

using CategorySet = std::set<Category>;

struct RationaleAnnotation {
  std::string example_id;
  std::string annotator_id;
  CategorySet categories;
  std::optional<std::string> label;
  std::optional<std::string> rationale;
};

/// CSV with columns example_id, annotator_id, categories (';'-joined) and
/// optional label and rationale. Throws DataError naming the line on schema errors.
std::vector<RationaleAnnotation> parse_annotations(std::string_view csv);
std::vector<RationaleAnnotation> read_annotations(const std::filesystem::path& path);

double jaccard(const CategorySet& a, const CategorySet& b);

/// Mean per-example Jaccard index between two annotators' sets.
/// Throws DataError when the example ids differ.
double jaccard_agreement(const std::map<std::string, CategorySet>& a, const std::map<std::string, CategorySet>& b);

/// Agreement between the first two annotators (by id) of an annotation table.
double jaccard_agreement(const std::vector<RationaleAnnotation>& annotations);

/// Categories chosen by more than half of an example's annotators, counted per
/// example label. The label is the first annotator's (by id) non-empty label.
std::map<std::string, std::map<Category, long>> consensus_counts(const std::vector<RationaleAnnotation>& annotations);

using TermFrequencies = std::vector<std::pair<std::string, long>>;  // count descending, then term

TermFrequencies term_frequencies(const std::vector<std::string>& texts, const WordSet& stopwords = builtin_stopwords(),
                                 const Lemmatizer& lemmatizer = Lemmatizer::builtin());

struct ClassTexts {
  std::string label;
  std::vector<std::string> texts;
};

struct ClassFrequencies {
  std::string label;
  TermFrequencies terms;
};

std::vector<ClassFrequencies> frequency_profile(const std::vector<ClassTexts>& classes,
                                                const WordSet& stopwords = builtin_stopwords(),
                                                const Lemmatizer& lemmatizer = Lemmatizer::builtin());

/// One document per non-empty line of each annotation's rationale, grouped by
/// label in first-seen order. Annotations without label or rationale are skipped.
std::vector<ClassTexts> rationale_documents(const std::vector<RationaleAnnotation>& annotations);

struct ClassModel {
  std::string label;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  GridSearchResult search;
  std::vector<std::pair<std::string, double>> top_features;  // best config refit on all documents
};

struct PredictiveOptions {
  TfidfOptions tfidf;
  std::vector<LogRegConfig> grid = default_grid();
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  std::size_t top_k = 20;
  std::size_t threads = 0;
};

struct PredictiveAnalysis {
  std::size_t documents = 0;
  std::size_t vocabulary_size = 0;
  std::vector<ClassModel> classes;
};

/// One-vs-all tf-idf + logistic regression over the documents of every class.
PredictiveAnalysis predictive_analysis(const std::vector<ClassTexts>& classes, const PredictiveOptions& options = {},
                                       const WordSet& stopwords = builtin_stopwords(),
                                       const Lemmatizer& lemmatizer = Lemmatizer::builtin());

}  // namespace readbench
