#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "mixchain/chain.hpp"
#include "mixchain/distribution.hpp"

namespace mixchain {

/// hit: T_i^(0), the first n >= 0 with X_n = M (the mixing state drawn from
/// pi). pass: T_i^(1), the first n >= 1 with X_n = M.
enum class MixingVariant { hit, pass };

std::string_view variant_name(MixingVariant v);

/// f_{i,0} = pi_i, f_{i,n} = sum_{j != i} pi_j f_ij^(n). Support offset 0.
DistributionTable mixing_hit_dist(const TransitionMatrix& chain, const StationaryDistribution& pi,
                                  std::size_t start, const Truncation& trunc = {});

/// g_{i,0} = 0, g_{i,n} = sum_j pi_j f_ij^(n). Support offset 1.
DistributionTable mixing_pass_dist(const TransitionMatrix& chain,
                                   const StationaryDistribution& pi, std::size_t start,
                                   const Truncation& trunc = {});

DistributionTable mixing_dist(const TransitionMatrix& chain, const StationaryDistribution& pi,
                              std::size_t start, MixingVariant variant,
                              const Truncation& trunc = {});

/// Probability generating function of the mixing time at |s| < 1, from the
/// adjugate ratios a_ij(s) / a_jj(s):
///   f_i(s) = sum_j pi_j a_ij(s) / a_jj(s),  g_i(s) = f_i(s) - pi_i det(I - sP) / a_ii(s).
double gf_eval(const TransitionMatrix& chain, std::size_t start, MixingVariant variant, double s);

/// Expected mixing times. eta = E[T_i^(1)] = sum_j pi_j m_ij and
/// tau = E[T_i^(0)] = sum_{j != i} pi_j m_ij do not depend on i; the per-state
/// sums are kept so that any dependence shows up in `spread`.
struct MixingMeans {
  double tau = 0.0;
  double eta = 0.0;
  std::vector<double> per_state_tau;
  std::vector<double> per_state_eta;
  double spread = 0.0;   // max_i |eta_i - eta| and |tau_i - tau|
  double kemeny = 0.0;   // trace(Z)
};

/// Throws InvariantViolation if the per-state sums spread by more than
/// kMatTol or disagree with trace(Z).
MixingMeans expected_mixing(const TransitionMatrix& chain, const StationaryDistribution& pi,
                            const MeanPassageMatrix& mfp);

/// max_{n>=1} |g_{i,n} - f_{i,n} - pi_i f_ii^(n)|.
double linkage_gap(const DistributionTable& hit, const DistributionTable& pass,
                   const DistributionTable& recurrence, double pi_i);

/// max_n |f_{i,n} - g_{i,n+1}|: zero when T^(1) is distributed as T^(0) + 1.
double shift_gap(const DistributionTable& hit, const DistributionTable& pass);

struct MixingDiagnostics {
  double linkage = 0.0;        // worst linkage_gap over start states
  double tau_moment_gap = 0.0; // |sum n f_{i,n} - tau| (worst state)
  double eta_moment_gap = 0.0; // |sum n g_{i,n} - eta|
  bool moments_resolved = false;
  double gf_gap = 0.0;         // |sum p_n s^n - gf_eval| at s = 1/2
  double mean_spread = 0.0;
  double mfp_cross_check = 0.0;
};

struct MixingReport {
  StationaryDistribution pi;
  std::vector<DistributionTable> hit_dist;
  std::vector<DistributionTable> pass_dist;
  double tau = 0.0;
  double eta = 0.0;
  MixingDiagnostics diagnostics;
};

MixingReport mixing_report(const TransitionMatrix& chain, const Truncation& trunc = {});

}  // namespace mixchain
