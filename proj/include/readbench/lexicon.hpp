#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace readbench {

using WordSet = std::unordered_set<std::string>;

/// Word lists consulted by the lexical analysis. Entries are stored lowercase.
/// Immutable after construction and safe to share between threads.
struct Lexicon {
  WordSet easy_words;      // Dale-Chall familiar words
  WordSet function_words;
  WordSet abbreviations;   // tokens after which '.' does not end a sentence
  std::unordered_map<std::string, int> syllable_exceptions;

  bool is_easy(std::string_view lower_word) const;
  bool is_function_word(std::string_view lower_word) const;
  bool is_abbreviation(std::string_view lower_word) const;

  /// The lists compiled into the library from data/lexicon/.
  static const Lexicon& builtin();
};

/// Optional overrides; unset entries fall back to the built-in list.
struct LexiconPaths {
  std::optional<std::filesystem::path> easy_words;
  std::optional<std::filesystem::path> function_words;
  std::optional<std::filesystem::path> abbreviations;
  std::optional<std::filesystem::path> syllable_exceptions;
};

Lexicon load_lexicon(const LexiconPaths& paths);

/// Parses a word list: one word per line, UTF-8, blank lines and lines starting
/// with '#' ignored, entries lowercased.
WordSet parse_word_list(std::string_view content);
WordSet read_word_list(const std::filesystem::path& path);

/// Parses "word count" lines.
std::unordered_map<std::string, int> parse_syllable_exceptions(std::string_view content);

/// Parses "form lemma" lines.
std::unordered_map<std::string, std::string> parse_word_pairs(std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace readbench
