#include "readbench/rationales.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "readbench/csv.hpp"
#include "readbench/error.hpp"

namespace readbench {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

struct CategoryName {
  Category category;
  std::string_view display;
  std::string_view key;
};

constexpr CategoryName kCategoryNames[] = {
    {Category::Wording, "Wording/Terminology", "wording"},
    {Category::SentenceStructure, "Sentence Structure", "structure"},
    {Category::Examples, "Examples/Analogies", "examples"},
    {Category::Depth, "Details and Depth", "depth"},
    {Category::Curriculum, "Curriculum-based", "curriculum"},
};

}  // namespace

Category parse_category(std::string_view name) {
  const std::string lower = ascii_lower(trim(name));
  for (const auto& c : kCategoryNames) {
    if (lower == ascii_lower(c.display) || lower == c.key) return c.category;
  }
  throw DataError(fmt::format("unknown rationale category '{}'", name));
}

std::string to_string(Category category) {
  for (const auto& c : kCategoryNames) {
    if (c.category == category) return std::string(c.display);
  }
  return "?";
}

std::vector<RationaleAnnotation> parse_annotations(std::string_view csv) {
  const CsvTable table = parse_csv(csv);
  auto required = [&](std::string_view name) {
    const auto col = table.column(name);
    if (!col) throw DataError(fmt::format("annotations: missing column '{}'", name), 1);
    return *col;
  };
  const std::size_t c_example = required("example_id");
  const std::size_t c_annotator = required("annotator_id");
  const std::size_t c_categories = required("categories");
  const auto c_label = table.column("label");
  const auto c_rationale = table.column("rationale");

  std::vector<RationaleAnnotation> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.row_lines[r];
    if (row.size() != table.header.size()) {
      throw DataError(fmt::format("annotations: expected {} fields, got {}", table.header.size(), row.size()), line);
    }
    RationaleAnnotation a;
    a.example_id = trim(row[c_example]);
    a.annotator_id = trim(row[c_annotator]);
    if (a.example_id.empty() || a.annotator_id.empty()) {
      throw DataError("annotations: empty example_id or annotator_id", line);
    }
    std::stringstream cats(row[c_categories]);
    for (std::string item; std::getline(cats, item, ';');) {
      if (trim(item).empty()) continue;
      try {
        a.categories.insert(parse_category(item));
      } catch (const DataError& e) {
        throw DataError(std::string("annotations: ") + e.what(), line);
      }
    }
    if (a.categories.empty()) throw DataError("annotations: no category given", line);
    if (c_label && !trim(row[*c_label]).empty()) a.label = trim(row[*c_label]);
    if (c_rationale && !trim(row[*c_rationale]).empty()) a.rationale = row[*c_rationale];
    if (!seen.emplace(a.example_id, a.annotator_id).second) {
      throw DataError(fmt::format("annotations: duplicate row for example '{}' and annotator '{}'", a.example_id,
                                  a.annotator_id),
                      line);
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<RationaleAnnotation> read_annotations(const std::filesystem::path& path) {
  return parse_annotations(read_text_file(path));
}

double jaccard(const CategorySet& a, const CategorySet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (Category c : a) common += b.contains(c);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

double jaccard_agreement(const std::map<std::string, CategorySet>& a, const std::map<std::string, CategorySet>& b) {
  if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) {
        return x.first == y.first;
      })) {
    throw DataError("jaccard_agreement: annotators labeled different examples");
  }
  if (a.empty()) throw DataError("jaccard_agreement: no examples");
  double sum = 0;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) sum += jaccard(ia->second, ib->second);
  return sum / static_cast<double>(a.size());
}

double jaccard_agreement(const std::vector<RationaleAnnotation>& annotations) {
  std::map<std::string, std::map<std::string, CategorySet>> by_annotator;
  for (const auto& a : annotations) by_annotator[a.annotator_id][a.example_id] = a.categories;
  if (by_annotator.size() < 2) throw DataError("jaccard_agreement: need two annotators");
  auto it = by_annotator.begin();
  const auto& first = it->second;
  return jaccard_agreement(first, (++it)->second);
}

std::map<std::string, std::map<Category, long>> consensus_counts(const std::vector<RationaleAnnotation>& annotations) {
  struct Example {
    std::map<std::string, const RationaleAnnotation*> by_annotator;
  };
  std::map<std::string, Example> examples;
  for (const auto& a : annotations) examples[a.example_id].by_annotator[a.annotator_id] = &a;

  std::map<std::string, std::map<Category, long>> out;
  for (const auto& [id, ex] : examples) {
    std::optional<std::string> label;
    std::map<Category, std::size_t> votes;
    for (const auto& [annotator, a] : ex.by_annotator) {
      if (!label && a->label) label = a->label;
      for (Category c : a->categories) ++votes[c];
    }
    auto& row = out[label.value_or("")];
    for (Category c : kAllCategories) row.try_emplace(c, 0);
    for (const auto& [c, n] : votes) {
      if (2 * n > ex.by_annotator.size()) ++row[c];
    }
  }
  return out;
}

TermFrequencies term_frequencies(const std::vector<std::string>& texts, const WordSet& stopwords,
                                 const Lemmatizer& lemmatizer) {
  std::unordered_map<std::string, long> counts;
  for (const auto& t : texts) {
    for (auto& term : preprocess(t, stopwords, lemmatizer)) ++counts[std::move(term)];
  }
  TermFrequencies out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return out;
}

std::vector<ClassFrequencies> frequency_profile(const std::vector<ClassTexts>& classes, const WordSet& stopwords,
                                                const Lemmatizer& lemmatizer) {
  std::vector<ClassFrequencies> out;
  for (const auto& c : classes) out.push_back({c.label, term_frequencies(c.texts, stopwords, lemmatizer)});
  return out;
}

std::vector<ClassTexts> rationale_documents(const std::vector<RationaleAnnotation>& annotations) {
  std::vector<ClassTexts> out;
  for (const auto& a : annotations) {
    if (!a.label || !a.rationale) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const ClassTexts& c) { return c.label == *a.label; });
    if (it == out.end()) {
      out.push_back({*a.label, {}});
      it = std::prev(out.end());
    }
    std::stringstream lines(*a.rationale);
    for (std::string line; std::getline(lines, line);) {
      if (!trim(line).empty()) it->texts.push_back(trim(line));
    }
  }
  return out;
}

PredictiveAnalysis predictive_analysis(const std::vector<ClassTexts>& classes, const PredictiveOptions& options,
                                       const WordSet& stopwords, const Lemmatizer& lemmatizer) {
  if (classes.size() < 2) throw DataError("predictive analysis: need at least two classes");
  std::vector<std::vector<std::string>> docs;
  std::vector<std::size_t> owner;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (const auto& t : classes[c].texts) {
      docs.push_back(preprocess(t, stopwords, lemmatizer));
      owner.push_back(c);
    }
  }
  const SparseDocTermMatrix tfidf = tfidf_fit(docs, options.tfidf);

  PredictiveAnalysis out;
  out.documents = docs.size();
  out.vocabulary_size = tfidf.vocabulary.size();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    std::vector<int> y;
    y.reserve(owner.size());
    for (std::size_t o : owner) y.push_back(o == c ? 1 : 0);
    ClassModel m;
    m.label = classes[c].label;
    m.positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    m.negatives = y.size() - m.positives;
    m.search = grid_search_cv(tfidf.matrix, y, options.grid, options.folds, options.seed, options.threads);
    const auto model = train_logreg(tfidf.matrix, y, m.search.best);
    m.top_features = top_features(model, tfidf.vocabulary, options.top_k);
    out.classes.push_back(std::move(m));
  }
  return out;
}

}  // namespace readbench
