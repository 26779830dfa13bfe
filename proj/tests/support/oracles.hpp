#pragma once

// Independent reference computations for the test suites. None of these
// call into the library's numerical code paths: they enumerate paths, solve
// linear systems directly or interpolate sampled determinants.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mixchain/chain.hpp"

namespace oracle {

using Rows = std::vector<std::vector<double>>;

/// Random irreducible m-state chain. `zero_prob` is the chance that an
/// off-cycle entry is forced to zero; a random Hamiltonian cycle keeps the
/// chain irreducible. With `regular` the diagonal stays positive, which
/// makes the chain aperiodic.
Rows random_chain(std::size_t m, std::mt19937_64& rng, double zero_prob = 0.3, bool regular = false);

mixchain::TransitionMatrix random_transition(std::size_t m, std::mt19937_64& rng,
                                             double zero_prob = 0.3, bool regular = false);

Rows to_rows(const mixchain::TransitionMatrix& chain);

/// f_ij^(n), n = 0..n_max, by depth-first enumeration of every path that
/// avoids j before the final step. Cost m^n; keep n small.
std::vector<double> path_enumeration(const Rows& p, std::size_t i, std::size_t j, std::size_t n_max);

/// Mixing-time pmf from path enumeration and pi.
std::vector<double> path_mixing(const Rows& p, const std::vector<double>& pi, std::size_t start,
                                bool pass, std::size_t n_max);

/// Stationary vector from the eigenvector of P^T for the eigenvalue closest to 1.
std::vector<double> eigen_stationary(const Rows& p);

/// 1 + sum over the non-unit eigenvalues of 1 / (1 - lambda).
double spectral_kemeny(const Rows& p);

/// Mean first passage times, column by column, from the taboo systems
/// (I - P_{(j)}) m_j = e with m_jj read off the return equation.
Eigen::MatrixXd direct_mfp(const Rows& p);

/// det(I - sP) coefficients by sampling at m + 1 nodes and solving the
/// Vandermonde system.
std::vector<double> interpolated_det(const Rows& p);

/// adj(I - sP)(i, j) coefficients (degree m - 1) by sampling det * inverse.
std::vector<double> interpolated_adj(const Rows& p, std::size_t i, std::size_t j);

/// Power-series coefficients of num/den by solving the lower-triangular
/// Toeplitz system den * c = num.
std::vector<double> toeplitz_division(const std::vector<double>& num, const std::vector<double>& den,
                                      std::size_t n_max);

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace oracle
