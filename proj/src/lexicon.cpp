#include "readbench/lexicon.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "readbench/assets.hpp"
#include "readbench/error.hpp"
#include "unicode.hpp"

namespace readbench {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename Fn>
void for_each_entry(std::string_view content, Fn&& fn) {
  std::size_t line_no = 0;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    fn(line, line_no);
  }
}

std::pair<std::string_view, std::string_view> split_pair(std::string_view line, std::size_t line_no) {
  const auto sep = line.find_first_of(" \t");
  if (sep == std::string_view::npos) throw DataError("expected two whitespace-separated fields", line_no);
  return {trim(line.substr(0, sep)), trim(line.substr(sep + 1))};
}

}  // namespace

bool Lexicon::is_easy(std::string_view w) const { return easy_words.contains(std::string(w)); }
bool Lexicon::is_function_word(std::string_view w) const { return function_words.contains(std::string(w)); }
bool Lexicon::is_abbreviation(std::string_view w) const { return abbreviations.contains(std::string(w)); }

WordSet parse_word_list(std::string_view content) {
  WordSet out;
  for_each_entry(content, [&](std::string_view line, std::size_t) { out.insert(unicode::to_lower(unicode::nfc(line))); });
  return out;
}

std::unordered_map<std::string, int> parse_syllable_exceptions(std::string_view content) {
  std::unordered_map<std::string, int> out;
  for_each_entry(content, [&](std::string_view line, std::size_t line_no) {
    auto [word, count] = split_pair(line, line_no);
    int n = 0;
    auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
    if (ec != std::errc{} || ptr != count.data() + count.size() || n < 1) {
      throw DataError("invalid syllable count '" + std::string(count) + "'", line_no);
    }
    out[unicode::to_lower(word)] = n;
  });
  return out;
}

std::unordered_map<std::string, std::string> parse_word_pairs(std::string_view content) {
  std::unordered_map<std::string, std::string> out;
  for_each_entry(content, [&](std::string_view line, std::size_t line_no) {
    auto [form, lemma] = split_pair(line, line_no);
    out[unicode::to_lower(form)] = unicode::to_lower(lemma);
  });
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WordSet read_word_list(const std::filesystem::path& path) { return parse_word_list(read_text_file(path)); }

const Lexicon& Lexicon::builtin() {
  static const Lexicon lex = [] {
    Lexicon l;
    l.easy_words = parse_word_list(assets::get("lexicon/easy_words.txt"));
    l.function_words = parse_word_list(assets::get("lexicon/function_words.txt"));
    l.abbreviations = parse_word_list(assets::get("lexicon/abbreviations.txt"));
    l.syllable_exceptions = parse_syllable_exceptions(assets::get("lexicon/syllable_exceptions.txt"));
    return l;
  }();
  return lex;
}

Lexicon load_lexicon(const LexiconPaths& paths) {
  Lexicon l = Lexicon::builtin();
  if (paths.easy_words) l.easy_words = read_word_list(*paths.easy_words);
  if (paths.function_words) l.function_words = read_word_list(*paths.function_words);
  if (paths.abbreviations) l.abbreviations = read_word_list(*paths.abbreviations);
  if (paths.syllable_exceptions) {
    l.syllable_exceptions = parse_syllable_exceptions(read_text_file(*paths.syllable_exceptions));
  }
  return l;
}

}  // namespace readbench
