#include "readbench/textcore.hpp"

#include <algorithm>

#include "readbench/error.hpp"
#include "unicode.hpp"

namespace readbench {
namespace {

using unicode::is_alnum;

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_closer(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U')': case U']': case U'}':
    case U'’': case U'”': case U'»':
      return true;
    default:
      return false;
  }
}

bool is_opener(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U'(': case U'[': case U'{':
    case U'‘': case U'“': case U'«':
      return true;
    default:
      return false;
  }
}

// Decoded text plus the byte offset of every code point (and one past the end).
struct DecodedText {
  std::u32string cps;
  std::vector<std::size_t> offsets;

  explicit DecodedText(const std::string& utf8) : cps(unicode::decode(utf8)) {
    offsets.reserve(cps.size() + 1);
    std::size_t off = 0;
    for (char32_t c : cps) {
      offsets.push_back(off);
      off += unicode::encode(c).size();
    }
    offsets.push_back(off);
  }
};

// Token spans as [begin, end) code point indices.
std::vector<std::pair<std::size_t, std::size_t>> token_spans(const std::u32string& t) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  const std::size_t n = t.size();
  std::size_t i = 0;
  while (i < n) {
    if (!is_alnum(t[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    for (;;) {
      while (j < n && is_alnum(t[j])) ++j;
      if (j + 1 < n && (unicode::is_apostrophe(t[j]) || unicode::is_hyphen(t[j])) && is_alnum(t[j + 1])) {
        ++j;
        continue;
      }
      break;
    }
    spans.emplace_back(i, j);
    i = j;
  }
  return spans;
}

bool is_ascii_vowel(char32_t c) { return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u'; }

enum class LetterClass { Vowel, Consonant, OwnGroup };

int vowel_group_syllables(const std::u32string& letters) {
  const std::size_t n = letters.size();
  std::vector<char32_t> base(n);
  std::vector<LetterClass> cls(n, LetterClass::Consonant);
  for (std::size_t k = 0; k < n; ++k) base[k] = unicode::base_letter(letters[k]);
  for (std::size_t k = 0; k < n; ++k) {
    const char32_t c = base[k];
    if (c >= U'a' && c <= U'z') {
      if (is_ascii_vowel(c)) {
        cls[k] = LetterClass::Vowel;
      } else if (c == U'y' && k > 0 && !(k + 1 < n && is_ascii_vowel(base[k + 1]))) {
        cls[k] = LetterClass::Vowel;
      }
    } else if (c == U'æ' || c == U'ø' || c == U'œ') {
      cls[k] = LetterClass::Vowel;
    } else if (!unicode::is_latin(letters[k])) {
      cls[k] = LetterClass::OwnGroup;
    }
  }

  int groups = 0;
  bool in_vowel_run = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (cls[k] == LetterClass::OwnGroup) {
      ++groups;
      in_vowel_run = false;
    } else if (cls[k] == LetterClass::Vowel) {
      if (!in_vowel_run) ++groups;
      in_vowel_run = true;
    } else {
      in_vowel_run = false;
    }
  }
  if (groups <= 1) return std::max(groups, 1);

  auto consonant = [&](std::size_t k) { return cls[k] == LetterClass::Consonant; };
  auto at = [&](std::size_t from_end) { return base[n - 1 - from_end]; };

  // Silent terminal e, keeping consonant + "le" (table, little).
  if (n >= 3 && at(0) == U'e' && consonant(n - 2)) {
    const bool syllabic_le = at(1) == U'l' && consonant(n - 3);
    if (!syllabic_le) --groups;
  } else if (n >= 4 && at(1) == U'e' && consonant(n - 3) && (at(0) == U'd' || at(0) == U's')) {
    // Past tense -ed and plural -es whose e is not voiced.
    const char32_t before = at(2);
    const bool syllabic_le = before == U'l' && consonant(n - 4);
    bool voiced = syllabic_le;
    if (at(0) == U'd') {
      voiced = voiced || before == U't' || before == U'd';
    } else {
      voiced = voiced || before == U's' || before == U'x' || before == U'z' || before == U'c' ||
               before == U'g' || (before == U'h' && (at(3) == U'c' || at(3) == U's'));
    }
    if (!voiced) --groups;
  }
  return std::max(groups, 1);
}

int part_syllables(const std::u32string& part, const Lexicon& lexicon) {
  std::u32string letters;
  bool has_digit = false;
  for (char32_t c : part) {
    if (unicode::is_letter(c)) {
      letters.push_back(unicode::to_lower(c));
    } else if (unicode::is_digit(c)) {
      has_digit = true;
    }
  }
  if (letters.empty()) return has_digit ? 1 : 0;
  const auto it = lexicon.syllable_exceptions.find(unicode::encode(letters));
  if (it != lexicon.syllable_exceptions.end()) return it->second;
  return vowel_group_syllables(letters);
}

}  // namespace

std::string normalize(std::string_view text) { return unicode::nfc(text); }

std::vector<Token> tokenize(std::string_view text, const TokenizeOptions& options) {
  const std::u32string t = unicode::decode(normalize(text));
  std::vector<Token> out;
  for (auto [b, e] : token_spans(t)) {
    Token tok;
    const std::u32string_view cps(t.data() + b, e - b);
    tok.surface = unicode::encode(cps);
    tok.char_count = static_cast<int>(cps.size());
    bool any_letter = false;
    for (char32_t c : cps) {
      if (unicode::is_letter(c)) {
        ++tok.letter_count;
        any_letter = true;
      }
    }
    tok.is_word = any_letter || options.numbers_are_words;
    out.push_back(std::move(tok));
  }
  return out;
}

std::vector<Sentence> split_sentences(std::string_view text, const Lexicon& lexicon) {
  const std::string norm = normalize(text);
  const DecodedText dt(norm);
  const std::u32string& u = dt.cps;
  const std::size_t n = u.size();
  std::vector<Sentence> out;

  auto emit = [&](std::size_t b, std::size_t e) {
    while (b < e && unicode::is_space(u[b])) ++b;
    while (e > b && unicode::is_space(u[e - 1])) --e;
    if (std::none_of(u.begin() + static_cast<std::ptrdiff_t>(b), u.begin() + static_cast<std::ptrdiff_t>(e),
                     [](char32_t c) { return is_alnum(c); })) {
      return;
    }
    Sentence s;
    s.begin = dt.offsets[b];
    s.end = dt.offsets[e];
    s.text = norm.substr(s.begin, s.end - s.begin);
    out.push_back(std::move(s));
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_terminator(u[i])) continue;
    std::size_t j = i;
    while (j < n && is_terminator(u[j])) ++j;
    const bool single_period = (j - i == 1) && u[i] == U'.';
    while (j < n && is_closer(u[j])) ++j;

    bool boundary = false;
    if (j == n) {
      boundary = true;
    } else if (unicode::is_space(u[j])) {
      std::size_t k = j;
      while (k < n && unicode::is_space(u[k])) ++k;
      while (k < n && is_opener(u[k])) ++k;
      boundary = k < n && unicode::is_upper(u[k]);
    }

    if (boundary && single_period) {
      std::size_t b = i;
      while (b > 0 && (is_alnum(u[b - 1]) || u[b - 1] == U'.')) --b;
      while (b < i && u[b] == U'.') ++b;
      if (b < i) {
        const std::string prev = unicode::to_lower(unicode::encode(std::u32string_view(u.data() + b, i - b)));
        if (lexicon.is_abbreviation(prev)) boundary = false;
      }
    }

    if (boundary) {
      emit(start, j);
      start = j;
    }
    i = j - 1;
  }
  emit(start, n);
  return out;
}

int count_syllables(std::string_view word, const Lexicon& lexicon) {
  const std::u32string w = unicode::decode(normalize(word));
  if (std::none_of(w.begin(), w.end(), [](char32_t c) { return is_alnum(c); })) {
    throw InvalidTokenError("not a word token: '" + std::string(word) + "'");
  }
  const std::string lower = unicode::to_lower(unicode::encode(w));
  if (auto it = lexicon.syllable_exceptions.find(lower); it != lexicon.syllable_exceptions.end()) {
    return it->second;
  }
  int total = 0;
  std::u32string part;
  for (char32_t c : w) {
    if (unicode::is_hyphen(c)) {
      total += part_syllables(part, lexicon);
      part.clear();
    } else {
      part.push_back(c);
    }
  }
  total += part_syllables(part, lexicon);
  return std::max(total, 1);
}

TextStats compute_stats(std::string_view text, const Lexicon& lexicon) {
  TextStats st;
  std::size_t window_words = 0;
  for (const Sentence& sentence : split_sentences(text, lexicon)) {
    const auto tokens = tokenize(sentence.text);
    long sentence_words = 0;
    bool touches_window = false;
    for (const Token& tok : tokens) {
      if (!tok.is_word) continue;
      const bool sentence_initial = sentence_words == 0;
      ++sentence_words;

      const std::u32string cps = unicode::decode(tok.surface);
      long digits = 0;
      bool hyphenated = false;
      for (char32_t c : cps) {
        if (unicode::is_digit(c)) ++digits;
        if (unicode::is_hyphen(c)) hyphenated = true;
      }
      const std::string lower = unicode::to_lower(tok.surface);
      const int syl = count_syllables(tok.surface, lexicon);
      const bool easy = lexicon.is_easy(lower);
      const bool capitalized = unicode::is_upper(cps.front());

      ++st.n_words;
      st.n_letters += tok.letter_count;
      st.n_chars += tok.letter_count + digits;
      st.n_syllables += syl;
      if (syl == 1) ++st.n_monosyllables;
      if (syl >= 3) ++st.n_polysyllables;
      if (syl >= 2 && !easy) ++st.n_difficult_words;
      if (syl >= 3 && !easy && !hyphenated && !(capitalized && !sentence_initial)) ++st.n_complex_words;
      if (syl >= 3) {
        ++st.n_hard_words_linsear;
      } else {
        ++st.n_easy_words_linsear;
      }
      if (lexicon.is_function_word(lower)) ++st.n_function_words;

      if (window_words < kLinsearWindow) {
        ++window_words;
        touches_window = true;
        if (syl >= 3) {
          ++st.linsear_sample.hard_words;
        } else {
          ++st.linsear_sample.easy_words;
        }
      }
    }
    if (sentence_words > 0) ++st.n_sentences;
    if (touches_window) ++st.linsear_sample.sentences;
  }
  return st;
}

}  // namespace readbench
