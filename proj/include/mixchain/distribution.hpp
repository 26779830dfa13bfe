#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mixchain/tolerances.hpp"

namespace mixchain {

/// Truncated pmf p_0 .. p_N of a nonnegative integer random variable.
///
/// `support_offset` is 0 for hitting-style variables (n >= 0) and 1 for
/// passage-style ones (n >= 1, so p_0 = 0). `tail_mass` is the probability
/// not accounted for by the table, 1 - sum(p_n), unless the producer has an
/// exact analytic remainder (golden case tables).
struct DistributionTable {
  std::vector<double> probs;
  double tail_mass = 0.0;
  std::size_t support_offset = 0;

  std::size_t n_max() const noexcept { return probs.empty() ? 0 : probs.size() - 1; }
  double at(std::size_t n) const noexcept { return n < probs.size() ? probs[n] : 0.0; }
  double total() const noexcept;
};

/// Checks every entry lies in [-kProbTol, 1 + kProbTol] (InvariantViolation
/// otherwise), clamps to [0, 1] and sets tail_mass = 1 - sum.
DistributionTable make_table(std::vector<double> probs, std::size_t support_offset);

/// Horizon selection for distribution tables. With `n_max` set the table has
/// exactly that horizon; otherwise the smallest N <= n_cap whose tail mass is
/// at most tail_tol is used.
struct Truncation {
  std::optional<std::size_t> n_max;
  std::size_t n_cap = kDefaultNCap;
  double tail_tol = kTailTol;

  static Truncation fixed(std::size_t n) { return Truncation{n, kDefaultNCap, kTailTol}; }
  static Truncation adaptive(std::size_t cap = kDefaultNCap) {
    return Truncation{std::nullopt, cap, kTailTol};
  }
};

/// sum n p_n over the table, a lower bound for the mean.
struct TruncatedMean {
  double mean_lower = 0.0;
  bool resolved = false;
  /// tail_mass * (n_max + 1): the least the unseen tail adds to the mean.
  double tail_weight = 0.0;
};

TruncatedMean truncated_mean(const DistributionTable& dist, double tail_tol = kTailTol);

}  // namespace mixchain
