#pragma once

#include <cstddef>
#include <vector>

#include "mixchain/chain.hpp"
#include "mixchain/distribution.hpp"

namespace mixchain {

// First-passage distributions f_ij^(n) = P(T_ij = n), n >= 1. States are
// 0-based. Reducible chains are accepted: the distribution may then be
// defective, in which case tail_mass converges to the escape probability.

/// Taboo recurrence: f^(1) = P(:, j), f^(n)_i = sum_{k != j} p_ik f^(n-1)_k.
DistributionTable fp_dist_recurrence(const TransitionMatrix& chain, std::size_t from,
                                     std::size_t to, const Truncation& trunc = {});

/// Coefficients of F_ij(s) from the adjugate of I - sP. With an adaptive
/// truncation the horizon is the one the recurrence route settles on.
DistributionTable fp_dist_series(const TransitionMatrix& chain, std::size_t from, std::size_t to,
                                 const Truncation& trunc = {});

/// Tables f_{from, j} for every target j, sharing one horizon (adaptive:
/// the first N at which every target's tail is within tolerance).
std::vector<DistributionTable> fp_dist_row(const TransitionMatrix& chain, std::size_t from,
                                           const Truncation& trunc = {});

/// max_n |a_n - b_n| over the union of both supports.
double max_table_gap(const DistributionTable& a, const DistributionTable& b);

}  // namespace mixchain
