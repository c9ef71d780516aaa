#include "readbench/assets.hpp"

#include <string>
#include <utility>

#include "readbench/error.hpp"

namespace readbench::assets {
namespace detail {
extern const std::pair<std::string_view, std::string_view> kTable[];
extern const std::size_t kTableSize;
}  // namespace detail

std::string_view get(std::string_view name) {
  for (std::size_t i = 0; i < detail::kTableSize; ++i) {
    if (detail::kTable[i].first == name) return detail::kTable[i].second;
  }
  throw ConfigError("unknown built-in asset: " + std::string(name));
}

std::vector<std::string_view> names() {
  std::vector<std::string_view> out;
  out.reserve(detail::kTableSize);
  for (std::size_t i = 0; i < detail::kTableSize; ++i) out.push_back(detail::kTable[i].first);
  return out;
}

}  // namespace readbench::assets
