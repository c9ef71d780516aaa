#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "readbench/error.hpp"
#include "readbench/textcore.hpp"
#include "syllable_dictionary.hpp"

using namespace readbench;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

}  // namespace

TEST_SUITE("textcore") {
  TEST_CASE("tokenize keeps apostrophes and internal hyphens") {
    CHECK(tokenize("").empty());
    CHECK(surfaces(tokenize("It's raining.")) == std::vector<std::string>{"It's", "raining"});
    CHECK(surfaces(tokenize("state-of-the-art (2024)")) == std::vector<std::string>{"state-of-the-art", "2024"});
    CHECK(surfaces(tokenize("-dash- 'quoted' end-")) == std::vector<std::string>{"dash", "quoted", "end"});
    CHECK(surfaces(tokenize("rock’n’roll")) == std::vector<std::string>{"rock’n’roll"});
  }

  TEST_CASE("token character counts") {
    const auto tokens = tokenize("Café 2024 naïve");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0].char_count == 4);
    CHECK(tokens[0].letter_count == 4);
    CHECK(tokens[1].char_count == 4);
    CHECK(tokens[1].letter_count == 0);
    for (const auto& t : tokens) {
      CHECK(t.char_count >= 1);
      CHECK(t.letter_count <= t.char_count);
    }
  }

  TEST_CASE("numbers can be excluded from words") {
    const auto tokens = tokenize("In 2024 we met", {.numbers_are_words = false});
    REQUIRE(tokens.size() == 4);
    CHECK_FALSE(tokens[1].is_word);
    CHECK(tokens[0].is_word);
  }

  TEST_CASE("tokenize is idempotent on its re-serialization") {
    const std::string text = "Well-known facts, e.g. \"quotes\" and (brackets); it's 3.5 times — faster!";
    const auto once = surfaces(tokenize(text));
    std::string joined;
    for (const auto& s : once) joined += s + " ";
    CHECK(surfaces(tokenize(joined)) == once);
  }

  TEST_CASE("sentence splitting") {
    CHECK(split_sentences("Hello").size() == 1);
    CHECK(split_sentences("").empty());
    CHECK(split_sentences("Dr. Smith arrived. It rained!").size() == 2);
    CHECK(split_sentences("Is it? Yes. No!").size() == 3);
    CHECK(split_sentences("He said \"Stop.\" Then he left.").size() == 2);
    CHECK(split_sentences("Version 2.5 is out. See e.g. the notes.").size() == 2);
    CHECK(split_sentences("lowercase after. period stays one").size() == 1);
    CHECK(split_sentences("... !!! ???").empty());
  }

  TEST_CASE("sentence spans are offsets into the normalized text") {
    const std::string text = "First one. Second one!";
    const auto sentences = split_sentences(text);
    REQUIRE(sentences.size() == 2);
    CHECK(sentences[0].text == "First one.");
    CHECK(sentences[1].text == "Second one!");
    CHECK(normalize(text).substr(sentences[1].begin, sentences[1].end - sentences[1].begin) == "Second one!");
  }

  TEST_CASE("split_sentences is idempotent on its re-serialization") {
    const std::string text = "Mr. Brown went home. Did he eat? He did! The end";
    const auto once = split_sentences(text);
    std::string joined;
    for (const auto& s : once) joined += s.text + " ";
    const auto twice = split_sentences(joined);
    REQUIRE(twice.size() == once.size());
    for (std::size_t i = 0; i < once.size(); ++i) CHECK(twice[i].text == once[i].text);
  }

  TEST_CASE("syllables of fixed words") {
    CHECK(count_syllables("cat") == 1);
    CHECK(count_syllables("reading") == 2);
    CHECK(count_syllables("university") == 5);
    CHECK(count_syllables("state-of-the-art") == 4);
    CHECK(count_syllables("2024") == 1);
    CHECK(count_syllables("Reading") == 2);
  }

  TEST_CASE("syllables agree with the pronunciation dictionary") {
    int agree = 0, total = 0;
    for (const auto& [word, expected] : oracle::kPronouncedSyllables) {
      ++total;
      if (count_syllables(word) == expected) ++agree;
    }
    CHECK(static_cast<double>(agree) / total >= 0.9);
  }

  TEST_CASE("syllable count is at least one") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> len(1, 12), letter(0, 25);
    for (int i = 0; i < 2000; ++i) {
      std::string w;
      for (int k = len(rng); k > 0; --k) w += static_cast<char>('a' + letter(rng));
      CHECK(count_syllables(w) >= 1);
    }
    CHECK(count_syllables("日本語") == 3);
  }

  TEST_CASE("non-word tokens are rejected") {
    CHECK_THROWS_AS(count_syllables(""), InvalidTokenError);
    CHECK_THROWS_AS(count_syllables("..."), InvalidTokenError);
  }

  TEST_CASE("compute_stats examples") {
    const TextStats s = compute_stats("The cat sat.");
    CHECK(s.n_words == 3);
    CHECK(s.n_sentences == 1);
    CHECK(s.n_syllables == 3);
    CHECK(s.n_polysyllables == 0);
    CHECK(compute_stats("") == TextStats{});

    Lexicon lexicon = Lexicon::builtin();
    lexicon.easy_words.insert("matters");
    CHECK(compute_stats("Endergonicity matters.", lexicon).n_difficult_words == 1);
  }

  TEST_CASE("capitalized words inside a sentence are not complex") {
    const TextStats s = compute_stats("We visited Washington yesterday. Washington was beautiful.");
    CHECK(s.n_polysyllables >= 2);
    // Only the sentence-initial occurrence counts.
    const TextStats t = compute_stats("Washington");
    CHECK(t.n_complex_words == 1);
    CHECK(compute_stats("we saw Washington").n_complex_words == 0);
  }

  TEST_CASE("NFC normalization makes composed and decomposed text equal") {
    CHECK(compute_stats("caf\xC3\xA9 au lait.") == compute_stats("cafe\xCC\x81 au lait."));
  }

  TEST_CASE("stats match the construction of synthetic documents") {
    const auto corpus = oracle::synthetic_corpus(50, 20240521);
    for (const auto& doc : corpus) {
      CAPTURE(doc.text);
      const TextStats s = compute_stats(doc.text);
      CHECK(s == doc.expected);
      CHECK(s.n_monosyllables + s.n_polysyllables <= s.n_words);
      CHECK(s.n_syllables >= s.n_words);
      CHECK(s.n_easy_words_linsear + s.n_hard_words_linsear == s.n_words);
      CHECK(s.n_sentences >= 1);
    }
  }

  TEST_CASE("per-sentence word counts sum to the document count") {
    const auto corpus = oracle::synthetic_corpus(20, 99);
    for (const auto& doc : corpus) {
      long sum = 0;
      for (const auto& sentence : split_sentences(doc.text)) sum += compute_stats(sentence.text).n_words;
      CHECK(sum == compute_stats(doc.text).n_words);
    }
  }

  TEST_CASE("linsear window covers the first hundred words") {
    std::string text;
    for (int i = 0; i < 30; ++i) text += "Cats like university cheese a lot. ";  // 6 words each
    const TextStats s = compute_stats(text);
    CHECK(s.linsear_sample.easy_words + s.linsear_sample.hard_words == 100);
    CHECK(s.linsear_sample.sentences == 17);
  }
}
