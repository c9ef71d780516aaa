#include <cmath>
#include <set>

#include "doctest.h"
#include "readbench/error.hpp"
#include "readbench/rationales.hpp"

using namespace readbench;

namespace {

std::vector<std::vector<std::string>> split_docs(std::initializer_list<const char*> docs) {
  std::vector<std::vector<std::string>> out;
  for (const char* d : docs) {
    std::vector<std::string> tokens;
    std::string cur;
    for (const char* c = d; *c; ++c) {
      if (*c == ' ') {
        if (!cur.empty()) tokens.push_back(cur);
        cur.clear();
      } else {
        cur += *c;
      }
    }
    if (!cur.empty()) tokens.push_back(cur);
    out.push_back(tokens);
  }
  return out;
}

const char* kAnnotations =
    "example_id,annotator_id,categories,label,rationale\n"
    "e1,a1,Wording/Terminology,Graduate,\"Uses technical terms.\nLong sentences.\"\n"
    "e1,a2,wording;structure,Graduate,Jargon everywhere.\n"
    "e2,a1,examples,Elementary,Simple analogy.\n"
    "e2,a2,examples,Elementary,\n"
    "e3,a1,depth;curriculum,High School,\n"
    "e3,a2,Depth,High School,Some detail.\n";

}  // namespace

TEST_SUITE("rationales") {
  TEST_CASE("lemmatizer rules") {
    const Lemmatizer& l = Lemmatizer::builtin();
    CHECK(l.lemmatize("studies") == "study");
    CHECK(l.lemmatize("classes") == "class");
    CHECK(l.lemmatize("boxes") == "box");
    CHECK(l.lemmatize("words") == "word");
    CHECK(l.lemmatize("analysis") == "analysis");
    CHECK(l.lemmatize("status") == "status");
    CHECK(l.lemmatize("glass") == "glass");
    CHECK(l.lemmatize("running") == "run");
    CHECK(l.lemmatize("making") == "make");
    CHECK(l.lemmatize("explained") == "explain");
    CHECK(l.lemmatize("agreed") == "agree");
    CHECK(l.lemmatize("children") == "child");
    CHECK(l.lemmatize("easier") == "easy");
    CHECK(l.lemmatize("bigger") == "big");
    CHECK(l.lemmatize("during") == "during");
    CHECK(l.lemmatize("bus") == "bus");
    CHECK(l.lemmatize("naïve") == "naïve");
    const Lemmatizer custom(std::unordered_map<std::string, std::string>{{"went", "go"}});
    CHECK(custom.lemmatize("went") == "go");
  }

  TEST_CASE("preprocess") {
    CHECK(preprocess("The Examples were simple!") == std::vector<std::string>{"example", "simple"});
    CHECK(preprocess("") .empty());
    CHECK(preprocess("It’s the analogies") == std::vector<std::string>{"analogy"});
  }

  TEST_CASE("ngrams and tf-idf") {
    CHECK(ngrams({"a", "b", "c"}, 1, 2) == std::vector<std::string>{"a", "a b", "b", "b c", "c"});
    CHECK(ngrams({"a"}, 2, 3).empty());
    const auto m = tfidf_fit(split_docs({"a b", "a c"}));
    CHECK(m.vocabulary == std::vector<std::string>{"a"});
    CHECK_THROWS_AS(tfidf_fit(split_docs({"a b"})), DataError);
    CHECK_THROWS_AS(tfidf_fit(split_docs({"a", "b"})), DataError);
    CHECK_THROWS_AS(tfidf_fit(split_docs({"a", "a"}), {.ngram_min = 2, .ngram_max = 1}), ConfigError);
  }

  TEST_CASE("tf-idf properties") {
    const auto docs = split_docs({"the cat sat on the mat", "the dog sat", "a cat and a dog", "cat cat cat"});
    const auto m = tfidf_fit(docs, {.ngram_min = 1, .ngram_max = 2, .min_df = 2});
    CHECK(std::is_sorted(m.vocabulary.begin(), m.vocabulary.end()));
    CHECK(m.matrix.n_rows() == 4);
    CHECK(m.matrix.n_cols == m.vocabulary.size());
    for (std::size_t j = 0; j < m.vocabulary.size(); ++j) {
      CHECK(m.document_frequency[j] >= 2);
      CHECK(m.idf[j] == doctest::Approx(std::log((1.0 + 4) / (1.0 + m.document_frequency[j])) + 1));
    }
    for (const auto& row : m.matrix.rows) {
      double norm = 0;
      for (auto [j, v] : row) {
        CHECK(v > 0);
        norm += v * v;
      }
      if (!row.empty()) CHECK(norm == doctest::Approx(1.0));
      for (std::size_t k = 1; k < row.size(); ++k) CHECK(row[k - 1].first < row[k].first);
    }
    const auto again = m.transform(docs);
    CHECK(again.rows == m.matrix.rows);
  }

  TEST_CASE("categories") {
    CHECK(parse_category("Wording/Terminology") == Category::Wording);
    CHECK(parse_category("STRUCTURE") == Category::SentenceStructure);
    CHECK(parse_category("Curriculum-based") == Category::Curriculum);
    CHECK_THROWS_AS(parse_category("tone"), DataError);
    for (Category c : kAllCategories) CHECK(parse_category(to_string(c)) == c);
  }

  TEST_CASE("annotation parsing and errors") {
    const auto a = parse_annotations(kAnnotations);
    REQUIRE(a.size() == 6);
    CHECK(a[1].categories == CategorySet{Category::Wording, Category::SentenceStructure});
    CHECK(*a[0].label == "Graduate");
    CHECK(a[3].rationale.value_or("") == "");
    try {
      parse_annotations("example_id,annotator_id,categories\ne1,a1,wording\ne2,a1,tone\n");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_annotations("example_id,categories\ne1,wording\n"), DataError);
    CHECK_THROWS_AS(parse_annotations("example_id,annotator_id,categories\ne1,a1,\n"), DataError);
    CHECK_THROWS_AS(parse_annotations("example_id,annotator_id,categories\ne1,a1,wording\ne1,a1,depth\n"), DataError);
  }

  TEST_CASE("jaccard") {
    CHECK(jaccard({Category::Wording}, {Category::Wording, Category::SentenceStructure}) == 0.5);
    CHECK(jaccard({}, {}) == 1.0);
    CHECK(jaccard({Category::Depth}, {Category::Examples}) == 0.0);
    const auto a = parse_annotations(kAnnotations);
    CHECK(jaccard_agreement(a) == doctest::Approx((0.5 + 1.0 + 0.5) / 3));
    std::map<std::string, CategorySet> x{{"e1", {Category::Wording}}}, y{{"e2", {Category::Wording}}};
    CHECK_THROWS_AS(jaccard_agreement(x, y), DataError);
    CHECK(jaccard_agreement(x, x) == 1.0);
  }

  TEST_CASE("consensus counts") {
    const auto counts = consensus_counts(parse_annotations(kAnnotations));
    CHECK(counts.at("Graduate").at(Category::Wording) == 1);
    CHECK(counts.at("Graduate").at(Category::SentenceStructure) == 0);
    CHECK(counts.at("Elementary").at(Category::Examples) == 1);
    CHECK(counts.at("High School").at(Category::Depth) == 1);
    CHECK(counts.at("High School").at(Category::Curriculum) == 0);
  }

  TEST_CASE("term frequencies") {
    const auto f = frequency_profile({{"x", {"simple simple word"}}});
    REQUIRE(f.size() == 1);
    CHECK(f[0].terms == TermFrequencies{{"simple", 2}, {"word", 1}});
    const auto tf = term_frequencies({"beta alpha", "alpha"});
    CHECK(tf == TermFrequencies{{"alpha", 2}, {"beta", 1}});
  }

  TEST_CASE("rationale documents split on lines") {
    const auto docs = rationale_documents(parse_annotations(kAnnotations));
    REQUIRE(docs.size() == 3);
    CHECK(docs[0].label == "Graduate");
    CHECK(docs[0].texts == std::vector<std::string>{"Uses technical terms.", "Long sentences.", "Jargon everywhere."});
    CHECK(docs[1].texts.size() == 1);
    CHECK(docs[2].texts == std::vector<std::string>{"Some detail."});
  }

  TEST_CASE("predictive analysis finds the discriminative terms") {
    std::vector<ClassTexts> classes{{"Elementary", {}}, {"Graduate", {}}};
    for (int i = 0; i < 12; ++i) {
      classes[0].texts.push_back("simple analogy example number " + std::to_string(i));
      classes[1].texts.push_back("technical jargon terminology paragraph " + std::to_string(i));
    }
    PredictiveOptions opts;
    opts.folds = 4;
    opts.top_k = 3;
    opts.threads = 1;
    opts.grid = {{.penalty = Penalty::L2, .C = 10, .max_iter = 100}};
    const auto r = predictive_analysis(classes, opts);
    CHECK(r.documents == 24);
    REQUIRE(r.classes.size() == 2);
    CHECK(r.classes[0].positives == 12);
    CHECK(r.classes[0].negatives == 12);
    CHECK(r.classes[0].search.best_accuracy == 1.0);
    REQUIRE(r.classes[0].top_features.size() == 3);
    const std::set<std::string> allowed{"simple", "analogy", "example", "number"};
    for (const auto& [term, weight] : r.classes[0].top_features) {
      CHECK(weight > 0);
      std::string word;
      for (char c : term + " ") {
        if (c != ' ') {
          word += c;
          continue;
        }
        CHECK(allowed.count(word) == 1);
        word.clear();
      }
    }
  }
}
