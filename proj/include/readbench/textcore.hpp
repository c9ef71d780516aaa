#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "readbench/lexicon.hpp"

namespace readbench {

struct Token {
  std::string surface;
  bool is_word = true;   // false only for number-only tokens when numbers are excluded
  int char_count = 0;    // code points in `surface`
  int letter_count = 0;  // alphabetic code points in `surface`

  bool operator==(const Token&) const = default;
};

struct TokenizeOptions {
  bool numbers_are_words = true;
};

/// NFC-normalizes UTF-8 text. Every other entry point normalizes its input first.
std::string normalize(std::string_view text);

/// Splits text into tokens: maximal runs of letters and digits, joined by
/// apostrophes or hyphens that sit between two alphanumerics. Everything else
/// separates tokens and is dropped.
std::vector<Token> tokenize(std::string_view text, const TokenizeOptions& options = {});

/// One sentence, as byte offsets into normalize(text) plus its trimmed text.
struct Sentence {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string text;
};

/// Sentence boundaries fall after a run of '.', '!' or '?' (plus closing quotes
/// and brackets) that is followed by whitespace and an uppercase letter, or by
/// the end of the text. A single '.' after a token listed in
/// `lexicon.abbreviations` never ends a sentence. Spans without a word are dropped,
/// so a non-empty text without terminators is one sentence.
std::vector<Sentence> split_sentences(std::string_view text, const Lexicon& lexicon = Lexicon::builtin());

/// Vowel-group syllable estimate, always >= 1. Hyphenated compounds are the
/// sum of their parts. Number-only tokens count as one syllable. Throws
/// InvalidTokenError when `word` contains no letter or digit.
int count_syllables(std::string_view word, const Lexicon& lexicon = Lexicon::builtin());

/// Counts restricted to the first 100 words, used by Linsear Write.
struct LinsearSample {
  long easy_words = 0;
  long hard_words = 0;
  long sentences = 0;  // sentences with at least one word inside the window

  bool operator==(const LinsearSample&) const = default;
};

struct TextStats {
  long n_chars = 0;    // letters and digits of word tokens
  long n_letters = 0;
  long n_words = 0;
  long n_sentences = 0;
  long n_syllables = 0;
  long n_monosyllables = 0;
  long n_polysyllables = 0;   // 3+ syllables
  long n_difficult_words = 0; // 2+ syllables and not a familiar word
  long n_complex_words = 0;   // Gunning Fog complex words
  long n_easy_words_linsear = 0;
  long n_hard_words_linsear = 0;
  long n_function_words = 0;
  LinsearSample linsear_sample;

  bool operator==(const TextStats&) const = default;
};

inline constexpr std::size_t kLinsearWindow = 100;

TextStats compute_stats(std::string_view text, const Lexicon& lexicon = Lexicon::builtin());

}  // namespace readbench
