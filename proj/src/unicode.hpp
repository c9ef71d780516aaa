#pragma once

// Thin wrappers over ICU used by the lexical code. Private to the library.

#include <string>
#include <string_view>

namespace readbench::unicode {

std::string nfc(std::string_view utf8);
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
std::string encode(char32_t cp);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_space(char32_t cp);
bool is_upper(char32_t cp);
bool is_latin(char32_t cp);
char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view utf8);

// First code point of the canonical decomposition, lowercased (é -> e, Ö -> o).
char32_t base_letter(char32_t cp);

inline bool is_alnum(char32_t cp) { return is_letter(cp) || is_digit(cp); }
inline bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == U'’'; }
inline bool is_hyphen(char32_t cp) { return cp == U'-' || cp == U'‐' || cp == U'‑'; }

}  // namespace readbench::unicode
