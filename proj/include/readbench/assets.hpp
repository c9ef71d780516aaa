#pragma once

#include <string_view>
#include <vector>

namespace readbench::assets {

// Data files compiled into the library (lexicons, prompt templates, presets).
// `name` is the path relative to the repository's data/ directory,
// e.g. "lexicon/easy_words.txt". Throws ConfigError when unknown.
std::string_view get(std::string_view name);

std::vector<std::string_view> names();

}  // namespace readbench::assets
