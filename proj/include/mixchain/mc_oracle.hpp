#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mixchain/chain.hpp"
#include "mixchain/distribution.hpp"
#include "mixchain/mixing.hpp"

namespace mixchain {

struct SimConfig {
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  MixingVariant variant = MixingVariant::hit;
  std::size_t start = 0;
  /// Largest step recorded individually; longer runs land in `overflow`.
  std::size_t n_cap = kDefaultNCap;
  /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned workers = 0;
};

/// Trials are processed in blocks of this size; block b draws from the base
/// stream advanced by b jumps.
inline constexpr std::uint64_t kSimBlock = 65'536;

struct EmpiricalTable {
  std::vector<std::uint64_t> counts;  // n = 0 .. n_cap
  std::uint64_t overflow = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string rng_id;
  MixingVariant variant = MixingVariant::hit;
  std::size_t start = 0;
  /// Sums of n and n^2 over trials that did not overflow.
  std::uint64_t sum_n = 0;
  std::uint64_t sum_n2 = 0;

  std::size_t n_cap() const noexcept { return counts.empty() ? 0 : counts.size() - 1; }
  double freq(std::size_t n) const;
  /// sqrt(p (1 - p) / trials) with p the observed frequency.
  double se(std::size_t n) const;
  /// Sample mean; a lower bound when overflow > 0.
  double mean() const;
  /// Standard error of the sample mean.
  double mean_se() const;
};

/// Draws M ~ pi, runs the chain from `start` and records the hitting (n >= 0)
/// or first-passage (n >= 1) step. Throws NotIrreducible, StateOutOfRange,
/// InvalidArgument (trials or n_cap of zero).
EmpiricalTable simulate(const TransitionMatrix& chain, const StationaryDistribution& pi,
                        const SimConfig& cfg);

struct BinComparison {
  std::size_t n = 0;
  std::uint64_t count = 0;
  double freq = 0.0;
  double analytic = 0.0;
  /// (freq - analytic) / sqrt(analytic (1 - analytic) / trials); infinite when
  /// an analytic zero is observed.
  double z = 0.0;
  /// Expected count below kMinExpected: folded into the pooled bucket.
  bool pooled = false;
};

struct ComparisonReport {
  std::vector<BinComparison> bins;
  /// Sparse bins together with everything past the table or the cap.
  std::uint64_t pooled_count = 0;
  double pooled_analytic = 0.0;
  double pooled_z = 0.0;
  double max_abs_diff = 0.0;
  double max_abs_z = 0.0;
  std::size_t tests = 0;
  bool passed = true;
  std::string note;
};

inline constexpr double kZThreshold = 4.0;
inline constexpr double kMinExpected = 10.0;
/// Two-sided normal tail beyond 4 sigma.
inline constexpr double kPerTestLevel = 6.334e-5;

/// Per-bin test at 4 sigma under the analytic null. Throws SupportMismatch
/// when the analytic table is empty or its tail mass is not a probability.
ComparisonReport compare(const EmpiricalTable& empirical, const DistributionTable& analytic);

}  // namespace mixchain
