#include "mixchain/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "mixchain/error.hpp"
#include "mixchain/tolerances.hpp"

namespace mixchain::closed_forms {
namespace {

void require_two_state_irreducible(const TwoStateChain& c) {
  if (!c.irreducible()) {
    throw Error(ErrorCode::NotIrreducible, "d = 1: both states are absorbing");
  }
}

void require_three_state_irreducible(const ThreeStateChain& c) {
  if (!c.irreducible()) {
    throw Error(ErrorCode::NotIrreducible, "a cofactor weight D_i vanishes");
  }
}

void check_gap(double gap, double tol, const char* what) {
  if (gap > tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: closed form and recurrence differ by %.3g (tolerance %.3g)",
                  what, gap, tol);
    throw Error(ErrorCode::InvariantViolation, buf);
  }
}

double max_gap(const DistributionTable& a, const DistributionTable& b) {
  double g = 0.0;
  for (std::size_t n = 0; n < std::min(a.probs.size(), b.probs.size()); ++n)
    g = std::max(g, std::abs(a.probs[n] - b.probs[n]));
  return g;
}

// Two-term linear recurrence x_n = s x_{n-1} + q x_{n-2}, x_0 = 1, x_1 = s,
// i.e. the coefficients of 1 / (1 - s z - q z^2).
std::vector<double> quadratic_inverse_coeffs(double s, double q, std::size_t count) {
  std::vector<double> x(std::max<std::size_t>(count, 2));
  x[0] = 1.0;
  x[1] = s;
  for (std::size_t n = 2; n < x.size(); ++n) x[n] = s * x[n - 1] + q * x[n - 2];
  return x;
}

std::array<std::size_t, 3> front_permutation(std::size_t first, std::size_t second) {
  std::array<std::size_t, 3> perm{first, second, 0};
  for (std::size_t k = 0; k < 3; ++k) {
    if (k != first && k != second) perm[2] = k;
  }
  return perm;
}

}  // namespace

// ---------------------------------------------------------------------------

TwoStateChain::TwoStateChain(double a, double b) : a_(a), b_(b) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "two-state parameters must lie in [0, 1]");
  }
}

double TwoStateChain::p(std::size_t i, std::size_t j) const {
  if (i == 0) return j == 0 ? 1.0 - a_ : a_;
  return j == 0 ? b_ : 1.0 - b_;
}

std::array<double, 2> TwoStateChain::pi() const {
  return {b_ / (a_ + b_), a_ / (a_ + b_)};
}

TransitionMatrix TwoStateChain::matrix() const {
  return validate_chain(std::vector<std::vector<double>>{{1.0 - a_, a_}, {b_, 1.0 - b_}});
}

DistributionTable two_state_fp(const TwoStateChain& chain, std::size_t from, std::size_t to,
                               std::size_t n_max) {
  require_two_state_irreducible(chain);
  if (from > 1 || to > 1) throw Error(ErrorCode::StateOutOfRange, "two-state chain");
  const std::size_t other = 1 - from;
  const double stay = chain.p(from, from);
  const double leave = chain.p(from, other);
  const double back = chain.p(other, from);
  const double linger = chain.p(other, other);
  std::vector<double> probs(n_max + 1, 0.0);
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (from == to) {
      probs[n] = n == 1 ? stay : leave * std::pow(linger, double(n - 2)) * back;
    } else {
      probs[n] = std::pow(stay, double(n - 1)) * leave;
    }
  }
  return make_table(std::move(probs), 1);
}

DistributionTable two_state_mixing(const TwoStateChain& chain, std::size_t start,
                                   MixingVariant variant, std::size_t n_max) {
  require_two_state_irreducible(chain);
  if (start > 1) throw Error(ErrorCode::StateOutOfRange, "two-state chain");
  const std::size_t other = 1 - start;
  const auto pi = chain.pi();
  const double p11 = chain.p(start, start);
  const double p12 = chain.p(start, other);
  const double p22 = chain.p(other, other);
  const double d = chain.d();
  const double pi1 = pi[start];
  const double pi2 = pi[other];

  std::vector<double> probs(n_max + 1, 0.0);
  if (variant == MixingVariant::hit) {
    probs[0] = pi1;
    for (std::size_t n = 1; n <= n_max; ++n) probs[n] = pi2 * p12 * std::pow(p11, double(n - 1));
    return make_table(std::move(probs), 0);
  }
  for (std::size_t n = 1; n <= n_max; ++n) {
    probs[n] = n == 1 ? pi1 * p11 + pi2 * p12
                      : pi1 * (p11 * p22 - d) * std::pow(p22, double(n - 2)) +
                            pi2 * p12 * std::pow(p11, double(n - 1));
  }
  return make_table(std::move(probs), 1);
}

MeanPair two_state_means(const TwoStateChain& chain) {
  require_two_state_irreducible(chain);
  const double tau = 1.0 / (1.0 - chain.d());
  return {tau, 1.0 + tau};
}

// ---------------------------------------------------------------------------

bool RootPair::confluent() const noexcept { return delta <= kDeltaTol; }

ThreeStateChain::ThreeStateChain(const Entries& p) {
  std::vector<std::vector<double>> raw(3, std::vector<double>(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) raw[i][j] = p[i][j];
  const auto valid = validate_chain(raw);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) p_[i][j] = valid(i, j);
}

ThreeStateChain::ThreeStateChain(const TransitionMatrix& chain) {
  if (chain.size() != 3) {
    throw Error(ErrorCode::InvalidDimension, "three-state formulas need a 3 x 3 chain");
  }
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) p_[i][j] = chain(i, j);
}

double ThreeStateChain::cofactor_weight(int i) const {
  const auto& q = *this;
  switch (i) {
    case 1: return q.p(2, 3) * q.p(3, 1) + q.p(2, 1) * q.p(3, 2) + q.p(2, 1) * q.p(3, 1);
    case 2: return q.p(3, 1) * q.p(1, 2) + q.p(3, 2) * q.p(1, 3) + q.p(3, 2) * q.p(1, 2);
    case 3: return q.p(1, 2) * q.p(2, 3) + q.p(1, 3) * q.p(2, 1) + q.p(1, 3) * q.p(2, 3);
    default: throw Error(ErrorCode::StateOutOfRange, "three-state index");
  }
}

double ThreeStateChain::cofactor_total() const {
  return cofactor_weight(1) + cofactor_weight(2) + cofactor_weight(3);
}

bool ThreeStateChain::irreducible() const {
  return cofactor_weight(1) > 0.0 && cofactor_weight(2) > 0.0 && cofactor_weight(3) > 0.0;
}

std::array<double, 3> ThreeStateChain::pi() const {
  require_three_state_irreducible(*this);
  const double total = cofactor_total();
  return {cofactor_weight(1) / total, cofactor_weight(2) / total, cofactor_weight(3) / total};
}

RootPair ThreeStateChain::roots(int i) const {
  int a = 0, b = 0;
  switch (i) {
    case 1: a = 2, b = 3; break;
    case 2: a = 1, b = 3; break;
    case 3: a = 1, b = 2; break;
    default: throw Error(ErrorCode::StateOutOfRange, "three-state index");
  }
  RootPair r;
  const double diff = p(a, a) - p(b, b);
  r.delta = std::sqrt(diff * diff + 4.0 * p(a, b) * p(b, a));
  r.hi = (p(a, a) + p(b, b) + r.delta) / 2.0;
  r.lo = (p(a, a) + p(b, b) - r.delta) / 2.0;
  return r;
}

double ThreeStateChain::big_a() const { return 1.0 - (p(1, 1) + p(2, 2) + p(3, 3)); }

double ThreeStateChain::big_b() const {
  return p(1, 2) * p(2, 3) * p(3, 1) + p(1, 3) * p(3, 2) * p(2, 1) + p(1, 1) * p(2, 2) * p(3, 3) -
         p(1, 2) * p(2, 1) * p(3, 3) - p(1, 3) * p(3, 1) * p(2, 2) - p(1, 1) * p(2, 3) * p(3, 2);
}

double ThreeStateChain::c_at_root(double lambda) const {
  return (1.0 - p(1, 1)) * (1.0 - p(2, 2)) * (1.0 - p(3, 3)) - p(2, 3) * p(3, 2) * (1.0 - p(1, 1)) -
         (p(1, 2) * p(2, 1) + p(1, 3) * p(3, 1)) * (1.0 - lambda);
}

double ThreeStateChain::a_linear(double lambda) const {
  return p(1, 2) * lambda + p(1, 3) * p(3, 2) - p(1, 2) * p(3, 3);
}

double ThreeStateChain::b_linear(double lambda) const {
  return p(1, 3) * lambda + p(1, 2) * p(2, 3) - p(1, 3) * p(2, 2);
}

ThreeStateChain ThreeStateChain::relabeled(const std::array<std::size_t, 3>& perm) const {
  Entries q{};
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) q[a][b] = p_[perm[a]][perm[b]];
  return ThreeStateChain(q);
}

TransitionMatrix ThreeStateChain::matrix() const {
  std::vector<std::vector<double>> raw(3, std::vector<double>(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) raw[i][j] = p_[i][j];
  return validate_chain(raw);
}

double characteristic_polynomial(const ThreeStateChain& chain, double lambda) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = chain.p(i + 1, j + 1) - (i == j ? lambda : 0.0);
  return m.determinant();
}

double closed_form_tolerance(double delta) {
  if (delta <= kDeltaTol) return 1e-9;
  return 1e-10 + 1e-13 / delta;
}

// ---------------------------------------------------------------------------
// T_11

namespace {

std::vector<double> recurrence_headline(const ThreeStateChain& c, std::size_t n_max) {
  std::vector<double> f(n_max + 1, 0.0);
  const double heads[] = {
      0.0,
      c.p(1, 1),
      c.p(1, 2) * c.p(2, 1) + c.p(1, 3) * c.p(3, 1),
      c.p(1, 2) * c.p(2, 2) * c.p(2, 1) + c.p(1, 2) * c.p(2, 3) * c.p(3, 1) +
          c.p(1, 3) * c.p(3, 2) * c.p(2, 1) + c.p(1, 3) * c.p(3, 3) * c.p(3, 1)};
  for (std::size_t n = 1; n <= std::min<std::size_t>(3, n_max); ++n) f[n] = heads[n];
  return f;
}

}  // namespace

DistributionTable three_state_recurrence_closed(const ThreeStateChain& c, std::size_t n_max) {
  require_three_state_irreducible(c);
  auto f = recurrence_headline(c, n_max);
  const RootPair r = c.roots(1);
  if (!r.confluent()) {
    const double ch = c.c_at_root(r.hi);
    const double cl = c.c_at_root(r.lo);
    for (std::size_t n = 4; n <= n_max; ++n) {
      f[n] = (ch * std::pow(r.hi, double(n - 2)) - cl * std::pow(r.lo, double(n - 2))) /
             (r.hi - r.lo);
    }
  } else {
    // a_n = (n + 1) lambda^n turns the coefficient of s^n into
    // (c(lambda) n - lambda^3 - (A - B) lambda - 2B) lambda^{n-3}.
    const double lam = r.sum() / 2.0;
    const double a = c.big_a();
    const double b = c.big_b();
    const double beta = -lam * lam * lam + (1.0 - a) * lam * lam + (a - b) * lam + b;
    const double alpha = -lam * lam * lam - (a - b) * lam - 2.0 * b;
    for (std::size_t n = 4; n <= n_max; ++n) {
      f[n] = (alpha + beta * double(n)) * std::pow(lam, double(n - 3));
    }
  }
  return make_table(std::move(f), 1);
}

DistributionTable three_state_recurrence_dist(const ThreeStateChain& c, std::size_t n_max) {
  require_three_state_irreducible(c);
  auto f = recurrence_headline(c, n_max);
  const double s = c.p(2, 2) + c.p(3, 3);
  const double q = c.p(2, 3) * c.p(3, 2) - c.p(2, 2) * c.p(3, 3);
  const double k1 = c.p(1, 2) * c.p(2, 3) * c.p(3, 1) + c.p(1, 3) * c.p(3, 2) * c.p(2, 1) +
                    c.p(1, 2) * c.p(2, 1) * c.p(2, 2) + c.p(1, 3) * c.p(3, 1) * c.p(3, 3);
  const double k2 = (c.p(1, 2) * c.p(2, 1) + c.p(1, 3) * c.p(3, 1)) * q;
  if (n_max >= 4) {
    const auto a = quadratic_inverse_coeffs(s, q, n_max - 2);
    for (std::size_t n = 4; n <= n_max; ++n) f[n] = k1 * a[n - 3] + k2 * a[n - 4];
  }
  auto table = make_table(std::move(f), 1);
  check_gap(max_gap(table, three_state_recurrence_closed(c, n_max)),
            closed_form_tolerance(c.roots(1).delta), "T11");
  return table;
}

// ---------------------------------------------------------------------------
// T_12 and T_13

namespace {

struct PassageTerms {
  double lead;        // p12 (or p13)
  double correction;  // p13 p32 - p12 p33 (or p12 p23 - p13 p22)
  RootPair roots;
  double heads[4];
};

PassageTerms passage_terms(const ThreeStateChain& c, std::size_t target) {
  if (target == 1) {
    return {c.p(1, 2),
            c.p(1, 3) * c.p(3, 2) - c.p(1, 2) * c.p(3, 3),
            c.roots(2),
            {0.0, c.p(1, 2), c.p(1, 1) * c.p(1, 2) + c.p(1, 3) * c.p(3, 2),
             c.p(1, 1) * c.p(1, 1) * c.p(1, 2) + c.p(1, 1) * c.p(1, 3) * c.p(3, 2) +
                 c.p(1, 3) * c.p(3, 3) * c.p(3, 2) + c.p(1, 3) * c.p(3, 1) * c.p(1, 2)}};
  }
  if (target == 2) {
    return {c.p(1, 3),
            c.p(1, 2) * c.p(2, 3) - c.p(1, 3) * c.p(2, 2),
            c.roots(3),
            {0.0, c.p(1, 3), c.p(1, 1) * c.p(1, 3) + c.p(1, 2) * c.p(2, 3),
             c.p(1, 1) * c.p(1, 1) * c.p(1, 3) + c.p(1, 1) * c.p(1, 2) * c.p(2, 3) +
                 c.p(1, 2) * c.p(2, 2) * c.p(2, 3) + c.p(1, 2) * c.p(2, 1) * c.p(1, 3)}};
  }
  throw Error(ErrorCode::StateOutOfRange, "passage target must be state 2 or 3");
}

}  // namespace

DistributionTable three_state_passage_closed(const ThreeStateChain& c, std::size_t target,
                                             std::size_t n_max) {
  require_three_state_irreducible(c);
  const auto t = passage_terms(c, target);
  auto linear = [&](double lambda) { return t.lead * lambda + t.correction; };
  std::vector<double> f(n_max + 1, 0.0);
  for (std::size_t n = 1; n < f.size() && n <= 3; ++n) f[n] = t.heads[n];
  const RootPair& r = t.roots;
  for (std::size_t n = 4; n <= n_max; ++n) {
    if (!r.confluent()) {
      f[n] = (linear(r.hi) * std::pow(r.hi, double(n - 1)) -
              linear(r.lo) * std::pow(r.lo, double(n - 1))) /
             (r.hi - r.lo);
    } else {
      const double lam = r.sum() / 2.0;
      f[n] = (linear(lam) * double(n) - t.correction) * std::pow(lam, double(n - 2));
    }
  }
  return make_table(std::move(f), 1);
}

DistributionTable three_state_passage_dist(const ThreeStateChain& c, std::size_t target,
                                           std::size_t n_max) {
  require_three_state_irreducible(c);
  const auto t = passage_terms(c, target);
  std::vector<double> f(n_max + 1, 0.0);
  if (n_max >= 1) f[1] = t.lead;
  if (n_max >= 2) {
    // 1 / a_jj(s) expands with x_n = (trace) x_{n-1} - (det) x_{n-2} of the retained block.
    const double prod = target == 1 ? c.p(1, 1) * c.p(3, 3) - c.p(1, 3) * c.p(3, 1)
                                    : c.p(1, 1) * c.p(2, 2) - c.p(1, 2) * c.p(2, 1);
    const double sum = target == 1 ? c.p(1, 1) + c.p(3, 3) : c.p(1, 1) + c.p(2, 2);
    const auto bn = quadratic_inverse_coeffs(sum, -prod, n_max);
    for (std::size_t n = 2; n <= n_max; ++n) f[n] = t.lead * bn[n - 1] + t.correction * bn[n - 2];
  }
  auto table = make_table(std::move(f), 1);
  check_gap(max_gap(table, three_state_passage_closed(c, target, n_max)),
            closed_form_tolerance(t.roots.delta), target == 1 ? "T12" : "T13");
  return table;
}

DistributionTable three_state_fp(const ThreeStateChain& chain, std::size_t from, std::size_t to,
                                 std::size_t n_max, Route route) {
  if (from > 2 || to > 2) throw Error(ErrorCode::StateOutOfRange, "three-state chain");
  if (from == to) {
    const auto c = chain.relabeled(front_permutation(from, (from + 1) % 3));
    return route == Route::recurrence ? three_state_recurrence_dist(c, n_max)
                                      : three_state_recurrence_closed(c, n_max);
  }
  const auto c = chain.relabeled(front_permutation(from, to));
  return route == Route::recurrence ? three_state_passage_dist(c, 1, n_max)
                                    : three_state_passage_closed(c, 1, n_max);
}

DistributionTable three_state_mixing_dist(const ThreeStateChain& chain, MixingVariant variant,
                                          std::size_t n_max, std::size_t start, Route route) {
  if (start > 2) throw Error(ErrorCode::StateOutOfRange, "three-state chain");
  require_three_state_irreducible(chain);
  const auto c = chain.relabeled(front_permutation(start, (start + 1) % 3));
  const auto pi = c.pi();
  const bool rec = route == Route::recurrence;
  const auto f12 = rec ? three_state_passage_dist(c, 1, n_max) : three_state_passage_closed(c, 1, n_max);
  const auto f13 = rec ? three_state_passage_dist(c, 2, n_max) : three_state_passage_closed(c, 2, n_max);

  std::vector<double> probs(n_max + 1, 0.0);
  if (variant == MixingVariant::hit) {
    probs[0] = pi[0];
    for (std::size_t n = 1; n <= n_max; ++n) probs[n] = pi[1] * f12.probs[n] + pi[2] * f13.probs[n];
    return make_table(std::move(probs), 0);
  }
  const auto f11 = rec ? three_state_recurrence_dist(c, n_max) : three_state_recurrence_closed(c, n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    probs[n] = pi[0] * f11.probs[n] + pi[1] * f12.probs[n] + pi[2] * f13.probs[n];
  }
  return make_table(std::move(probs), 1);
}

MeanPair three_state_means(const ThreeStateChain& c) {
  require_three_state_irreducible(c);
  const double kappa = c.p(1, 2) + c.p(1, 3) + c.p(2, 1) + c.p(2, 3) + c.p(3, 1) + c.p(3, 2);
  const double tau = kappa / c.cofactor_total();
  return {tau, 1.0 + tau};
}

}  // namespace mixchain::closed_forms
