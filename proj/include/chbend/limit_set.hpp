#pragma once

// Orbit samples of a boundary seed under reduced words: a point-cloud
// approximation of the limit set, with CSV export.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chbend/bending.hpp"

namespace chbend {

struct LimitSample {
  Word word;
  HeisenbergPoint point;
};

struct LimitSetResult {
  HeisenbergPoint seed;
  int depth = 0;  ///< deepest fully enumerated word length
  std::size_t words_visited = 0;
  std::vector<LimitSample> samples;  ///< shortlex order of the words
};

/// Raised when the requested depth exceeds the word budget; carries the
/// samples of the deepest depth that fit.
class LimitSetResourceError : public ResourceError {
 public:
  LimitSetResourceError(const std::string& what, LimitSetResult partial)
      : ResourceError(what), partial_(std::move(partial)) {}
  const LimitSetResult& partial() const { return partial_; }

 private:
  LimitSetResult partial_;
};

inline constexpr std::size_t kDefaultWordBudget = 16'000'000;
inline constexpr double kLimitDedupTol = 1e-9;

/// Number of freely reduced words of length 1..depth over n generators.
double reduced_word_count(int generators, int depth);

/// Attracting fixed point of the first G1 generator (falling back to the
/// first loxodromic generator that does not commute with g_alpha).
HeisenbergPoint default_seed(const MarkedGroup& g);

/// Orbit of the seed under all reduced words of length <= depth (the empty
/// word included), deduplicated at Cygan distance kLimitDedupTol keeping the
/// first word in shortlex order. Generators must be in the SIEGEL form.
LimitSetResult limit_set(const std::vector<Isometry>& generators, int depth, const HeisenbergPoint& seed,
                         std::size_t word_budget = kDefaultWordBudget);

LimitSetResult limit_set(const MarkedGroup& g, int depth, std::optional<HeisenbergPoint> seed = std::nullopt,
                         std::size_t word_budget = kDefaultWordBudget);

/// Limit set of G_eta; the default seed is the base group's.
LimitSetResult limit_set(const BentGroup& b, int depth, std::optional<HeisenbergPoint> seed = std::nullopt,
                         std::size_t word_budget = kDefaultWordBudget);

/// Columns word, re_xi, im_xi, v, cygan_norm; infinity is written as inf.
std::string limit_set_csv(const LimitSetResult& r, const std::vector<std::string>& names);

struct CsvPoint {
  std::string word;
  HeisenbergPoint point;
};
std::vector<CsvPoint> parse_limit_set_csv(const std::string& text);

}  // namespace chbend
