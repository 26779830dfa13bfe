#pragma once

// Analytic two- and three-state results used as independent oracles for the
// general pipeline. States in this header are 0-based like everywhere else;
// "state 1" in the comments is index 0.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixchain/chain.hpp"
#include "mixchain/distribution.hpp"
#include "mixchain/mixing.hpp"

namespace mixchain::closed_forms {

struct MeanPair {
  double tau = 0.0;
  double eta = 0.0;
};

// ---------------------------------------------------------------------------
// Two states: P = [[1 - a, a], [b, 1 - b]], d = 1 - a - b.

class TwoStateChain {
 public:
  /// Throws InvalidArgument unless 0 <= a, b <= 1.
  TwoStateChain(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double d() const noexcept { return 1.0 - a_ - b_; }
  bool irreducible() const noexcept { return d() < 1.0; }
  double p(std::size_t i, std::size_t j) const;
  /// pi_1 = b / (a + b), pi_2 = a / (a + b).
  std::array<double, 2> pi() const;
  TransitionMatrix matrix() const;

 private:
  double a_;
  double b_;
};

DistributionTable two_state_fp(const TwoStateChain& chain, std::size_t from, std::size_t to,
                               std::size_t n_max);
DistributionTable two_state_mixing(const TwoStateChain& chain, std::size_t start,
                                   MixingVariant variant, std::size_t n_max);
MeanPair two_state_means(const TwoStateChain& chain);

// ---------------------------------------------------------------------------
// Three states.

/// Roots of the quadratic a_ii(s) = (1 - hi s)(1 - lo s) built from the 2x2
/// block of the other two states: hi/lo = (p_aa + p_bb +- delta) / 2 with
/// delta = sqrt((p_aa - p_bb)^2 + 4 p_ab p_ba).
struct RootPair {
  double hi = 0.0;
  double lo = 0.0;
  double delta = 0.0;
  double sum() const noexcept { return hi + lo; }
  bool confluent() const noexcept;
};

class ThreeStateChain {
 public:
  using Entries = std::array<std::array<double, 3>, 3>;

  explicit ThreeStateChain(const Entries& p);
  explicit ThreeStateChain(const TransitionMatrix& chain);

  /// p(i, j) with 1-based indices, matching the formulas in the comments.
  double p(int i, int j) const { return p_[std::size_t(i - 1)][std::size_t(j - 1)]; }
  const Entries& entries() const noexcept { return p_; }

  /// Cofactor weights; pi = (D1, D2, D3) / D. Irreducible iff all positive.
  double cofactor_weight(int i) const;
  double cofactor_total() const;
  bool irreducible() const;
  std::array<double, 3> pi() const;

  /// Root data for state i (1-based): the block of the two other states.
  RootPair roots(int i) const;

  /// 1 - A = trace P and B = det P in det(I - sP) = (1 - s)(1 + As + Bs^2).
  double big_a() const;
  double big_b() const;

  /// c(lambda) as simplified at the roots lambda_12, lambda_13; equals the
  /// characteristic polynomial det(P - lambda I) there.
  double c_at_root(double lambda) const;
  /// a(lambda) = p12 lambda + p13 p32 - p12 p33.
  double a_linear(double lambda) const;
  /// b(lambda) = p13 lambda + p12 p23 - p13 p22.
  double b_linear(double lambda) const;

  /// New state k is old state perm[k] (0-based).
  ThreeStateChain relabeled(const std::array<std::size_t, 3>& perm) const;
  TransitionMatrix matrix() const;

 private:
  Entries p_;
};

/// det(P - lambda I) evaluated directly from the matrix.
double characteristic_polynomial(const ThreeStateChain& chain, double lambda);

/// T_11 by the three-term recurrence (production route). The closed form is
/// evaluated alongside and must agree (InvariantViolation otherwise).
DistributionTable three_state_recurrence_dist(const ThreeStateChain& chain, std::size_t n_max);
/// T_11 by the closed form: distinct roots when delta_1 > kDeltaTol, the
/// repeated-root form (alpha + beta n) lambda^n otherwise.
DistributionTable three_state_recurrence_closed(const ThreeStateChain& chain, std::size_t n_max);

/// T_12 (target = 1) or T_13 (target = 2) by recurrence, asserted against the
/// closed form.
DistributionTable three_state_passage_dist(const ThreeStateChain& chain, std::size_t target,
                                           std::size_t n_max);
DistributionTable three_state_passage_closed(const ThreeStateChain& chain, std::size_t target,
                                             std::size_t n_max);

enum class Route { recurrence, closed };

/// Any T_ij by relabelling states onto T_11 / T_12.
DistributionTable three_state_fp(const ThreeStateChain& chain, std::size_t from, std::size_t to,
                                 std::size_t n_max, Route route = Route::recurrence);

/// f_{i,n} / g_{i,n} from the three passage tables and pi = (D1, D2, D3) / D.
DistributionTable three_state_mixing_dist(const ThreeStateChain& chain, MixingVariant variant,
                                          std::size_t n_max, std::size_t start = 0,
                                          Route route = Route::recurrence);

/// tau = kappa / D, eta = 1 + kappa / D, kappa = sum of off-diagonal entries.
MeanPair three_state_means(const ThreeStateChain& chain);

/// Assertion tolerance for closed form vs recurrence given the root gap.
double closed_form_tolerance(double delta);

// ---------------------------------------------------------------------------
// Named three-state fixtures.

/// sum_{k >= k0} (c0 + c1 k + c2 k^2) r^k for 0 <= r < 1.
double poly_geometric_tail(double r, std::size_t k0, double c0, double c1 = 0.0, double c2 = 0.0);

struct CaseFixture {
  std::string name;
  std::vector<double> params;
  ThreeStateChain chain;
  /// Closed-form expressions for f_{1,n} / g_{1,n}, with the exact
  /// analytic remainder as tail_mass.
  DistributionTable golden_hit;
  DistributionTable golden_pass;
};

/// case1: no parameters. case2: p. case3: eps, or b c d f g h.
/// case4: a1 a2 a3. case5: eps, or a b c d f g.
/// Throws InvalidCaseParams for unknown names or invalid parameters.
CaseFixture paper_case(std::string_view name, std::span<const double> params, std::size_t n_max);

}  // namespace mixchain::closed_forms
