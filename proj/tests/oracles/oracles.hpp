#pragma once

// Reference implementations used only by the tests. They are written for
// clarity, not speed, and share no code with the library.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "readbench/lexicon.hpp"
#include "readbench/textcore.hpp"

namespace oracle {

struct PairCounts {
  long long concordant = 0;
  long long discordant = 0;
  long long tied_x_only = 0;
  long long tied_y_only = 0;
  long long tied_both = 0;
  double tau_b = 0;
};

/// Enumerates all n(n-1)/2 pairs.
PairCounts brute_force_tau(const std::vector<double>& x, const std::vector<double>& y);

/// Exact two-sided p-value of an untied tau from the distribution of the
/// number of discordant pairs over all n! orderings.
double exact_tau_p_value(int n, long long discordant);

/// Same by literally enumerating every permutation of y (n <= 9).
double enumerated_tau_p_value(const std::vector<double>& x, const std::vector<double>& y);

// Expression-level formulas over the raw counts.
double ari(const readbench::TextStats& s);
double coleman_liau(const readbench::TextStats& s);
double dale_chall(const readbench::TextStats& s, bool percent = true);
double fkre(const readbench::TextStats& s);
double fkgl(const readbench::TextStats& s);
double gunning_fog(const readbench::TextStats& s);
double linsear_write(const readbench::TextStats& s, bool sentence_denominator = true);
double smog(const readbench::TextStats& s);

/// A document assembled from words whose properties are known, together with
/// the statistics implied by the construction.
struct SyntheticDoc {
  std::string text;
  readbench::TextStats expected;
};

SyntheticDoc synthetic_doc(std::mt19937_64& rng, const readbench::Lexicon& lexicon, int min_sentences = 1,
                           int max_sentences = 12);
std::vector<SyntheticDoc> synthetic_corpus(std::size_t n, std::uint64_t seed,
                                           const readbench::Lexicon& lexicon = readbench::Lexicon::builtin());

/// Random TextStats with nonzero denominators.
readbench::TextStats random_stats(std::mt19937_64& rng);

/// Central finite difference of f along coordinate j.
template <class F>
double central_difference(F&& f, std::vector<double> p, std::size_t j, double h = 1e-5) {
  const double x = p[j];
  p[j] = x + h;
  const double up = f(p);
  p[j] = x - h;
  const double down = f(p);
  return (up - down) / (2 * h);
}

}  // namespace oracle
