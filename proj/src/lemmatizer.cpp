#include <algorithm>

#include "readbench/assets.hpp"
#include "readbench/rationales.hpp"
#include "readbench/textcore.hpp"
#include "unicode.hpp"

namespace readbench {

namespace {

bool ends_with(std::string_view w, std::string_view suffix) { return w.ends_with(suffix); }

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_vowel(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return is_vowel(c) || c == 'y'; });
}

bool ascii_lower(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

// Repairs a stem left by removing -ing or -ed: undoubles a final consonant
// (runn -> run) and restores a silent e (creat -> create, mak -> make).
std::string repair_stem(std::string stem) {
  const std::size_t n = stem.size();
  const char last = stem[n - 1];
  if (n >= 3 && last == stem[n - 2] && !is_vowel(last) && last != 'l' && last != 's' && last != 'z') {
    stem.pop_back();
    return stem;
  }
  if (ends_with(stem, "at") || ends_with(stem, "bl") || ends_with(stem, "iz") || (last == 'v' && n >= 2)) {
    return stem + "e";
  }
  if (n == 3 && !is_vowel(stem[0]) && is_vowel(stem[1]) && !is_vowel(last) && last != 'w' && last != 'x' &&
      last != 'y') {
    return stem + "e";
  }
  return stem;
}

}  // namespace

Lemmatizer::Lemmatizer(std::unordered_map<std::string, std::string> exceptions) : exceptions_(std::move(exceptions)) {}

const Lemmatizer& Lemmatizer::builtin() {
  static const Lemmatizer instance(parse_word_pairs(assets::get("lexicon/lemma_exceptions.txt")));
  return instance;
}

std::string Lemmatizer::lemmatize(std::string_view word) const {
  std::string w(word);
  if (ends_with(w, "'s")) w.resize(w.size() - 2);
  if (auto it = exceptions_.find(w); it != exceptions_.end()) return it->second;
  if (!ascii_lower(w) || w.size() <= 3) return w;

  const std::size_t n = w.size();
  auto cut = [&](std::size_t k) { return w.substr(0, n - k); };

  if (n > 4 && (ends_with(w, "ies") || ends_with(w, "ied"))) return cut(3) + "y";
  if (n > 4 && ends_with(w, "iest")) return cut(4) + "y";
  if (n > 4 && ends_with(w, "ier")) return cut(3) + "y";
  if (ends_with(w, "sses")) return cut(2);
  if (ends_with(w, "es") && n > 4 &&
      (ends_with(w, "xes") || ends_with(w, "ches") || ends_with(w, "shes") || ends_with(w, "zzes"))) {
    return cut(2);
  }
  if (ends_with(w, "s")) {
    if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return w;
    return cut(1);
  }
  if (n >= 5 && ends_with(w, "ing")) {
    const std::string stem = cut(3);
    if (stem.size() >= 2 && has_vowel(stem)) return repair_stem(stem);
    return w;
  }
  if (ends_with(w, "eed")) {
    return has_vowel(cut(3)) ? cut(1) : w;
  }
  if (ends_with(w, "ed")) {
    const std::string stem = cut(2);
    if (stem.size() >= 2 && has_vowel(stem)) return repair_stem(stem);
  }
  return w;
}

const WordSet& builtin_stopwords() {
  static const WordSet words = parse_word_list(assets::get("lexicon/stopwords_en.txt"));
  return words;
}

std::vector<std::string> preprocess(std::string_view text, const WordSet& stopwords, const Lemmatizer& lemmatizer) {
  std::vector<std::string> out;
  for (const auto& token : tokenize(text)) {
    std::u32string lower;
    for (char32_t cp : unicode::decode(token.surface)) {
      lower.push_back(cp == U'’' ? U'\'' : unicode::to_lower(cp));
    }
    const std::string word = unicode::encode(lower);
    if (stopwords.contains(word)) continue;
    std::string lemma = lemmatizer.lemmatize(word);
    if (stopwords.contains(lemma)) continue;
    out.push_back(std::move(lemma));
  }
  return out;
}

}  // namespace readbench
