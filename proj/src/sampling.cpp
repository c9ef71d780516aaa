#include <algorithm>
#include <map>
#include <numeric>

#include "readbench/corpus.hpp"
#include "readbench/error.hpp"

namespace readbench {
namespace {

// First k positions of a partial Fisher-Yates shuffle of [0, n), sorted.
std::vector<std::size_t> draw(std::size_t n, std::size_t k, std::mt19937_64& engine) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded_draw(engine, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

SampleResult sample(const Corpus& corpus, const SampleStrategy& strategy, std::uint64_t seed) {
  if (corpus.documents.empty()) throw DataError("sample: empty corpus");
  std::mt19937_64 engine(seed);
  SampleResult result;
  result.corpus.name = corpus.name;
  result.corpus.label_type = corpus.label_type;
  result.corpus.scale = corpus.scale;

  std::vector<std::size_t> chosen;
  if (strategy.kind == SampleStrategy::Kind::Uniform) {
    if (strategy.n > corpus.size()) {
      result.warnings.push_back("requested " + std::to_string(strategy.n) + " documents but only " +
                                std::to_string(corpus.size()) + " are available");
    }
    chosen = draw(corpus.size(), strategy.n, engine);
  } else {
    if (corpus.label_type != LabelType::Ordinal || !corpus.scale) {
      throw ConfigError("per-class sampling needs an ordinal corpus");
    }
    std::map<int, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      strata[corpus.scale->index_of(std::get<std::string>(corpus.documents[i].gold))].push_back(i);
    }
    for (const auto& [cls, members] : strata) {
      if (members.size() < strategy.n) {
        result.warnings.push_back("class '" + corpus.scale->labels()[static_cast<std::size_t>(cls)] +
                                  "': requested " + std::to_string(strategy.n) + " but only " +
                                  std::to_string(members.size()) + " are available");
      }
      for (std::size_t k : draw(members.size(), strategy.n, engine)) chosen.push_back(members[k]);
    }
    std::sort(chosen.begin(), chosen.end());
  }
  for (std::size_t i : chosen) result.corpus.documents.push_back(corpus.documents[i]);
  return result;
}

}  // namespace readbench
