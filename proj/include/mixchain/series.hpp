#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "mixchain/chain.hpp"

namespace mixchain {

/// Dense univariate polynomial; coeffs()[k] multiplies s^k. Trailing zeros
/// are trimmed on construction, so the zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  const std::vector<double>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  /// Coefficient of s^k (0 beyond the degree).
  double operator[](std::size_t k) const noexcept { return k < c_.size() ? c_[k] : 0.0; }

  double operator()(double s) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double k, const Polynomial& a);

 private:
  void trim();
  std::vector<double> c_;
};

/// Largest coefficient-wise difference of two polynomials.
double max_coeff_gap(const Polynomial& a, const Polynomial& b);

/// m x m matrix of polynomials stored as coefficient planes: plane k is the
/// m x m (column-major) matrix multiplying s^k. Used for adj(I - sP), whose
/// entry (i, j) is the (j, i) cofactor a_ij(s).
class PolyMatrix {
 public:
  PolyMatrix(std::size_t m, std::vector<Eigen::MatrixXd> planes);

  std::size_t size() const noexcept { return m_; }
  std::size_t plane_count() const noexcept { return planes_.size(); }
  const Eigen::MatrixXd& plane(std::size_t k) const { return planes_.at(k); }

  Polynomial entry(std::size_t i, std::size_t j) const;
  /// Evaluates every entry at s (Horner, via the SIMD kernels).
  Eigen::MatrixXd evaluate(double s) const;

 private:
  std::size_t m_;
  std::vector<Eigen::MatrixXd> planes_;
  std::vector<double> packed_;  // planes laid end to end for the kernel
};

/// num/den with den(0) = 1; its power-series coefficients obey
/// c_n = num_n - sum_{k>=1} den_k c_{n-k}.
class RationalSeries {
 public:
  /// Divides through by den(0); throws InvariantViolation if den(0) == 0.
  RationalSeries(Polynomial num, Polynomial den);

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }
  double evaluate(double s) const { return num_(s) / den_(s); }

 private:
  Polynomial num_;
  Polynomial den_;
};

/// det(I - sP), degree <= m, constant term 1.
Polynomial det_poly(const TransitionMatrix& chain);

/// adj(I - sP) by Faddeev-LeVerrier. For m <= 3 the cofactors are also
/// expanded directly and must agree to kSeriesTol (InvariantViolation otherwise).
PolyMatrix adjugate_poly(const TransitionMatrix& chain);

/// Faddeev-LeVerrier in one pass: det(I - sP) and adj(I - sP).
struct CharacteristicData {
  Polynomial det;
  PolyMatrix adj;
};
CharacteristicData characteristic_data(const TransitionMatrix& chain);

/// Cofactor expansion of adj(I - sP) by Laplace minors; exponential in m,
/// intended for small m and cross-checks.
PolyMatrix cofactor_adjugate(const TransitionMatrix& chain);

/// c_0 .. c_{n_max} of the expansion of rs by its linear recurrence.
std::vector<double> series_coeffs(const RationalSeries& rs, std::size_t n_max);

/// F_ij(s): a_ij / a_jj for i != j and (a_ii - det) / a_ii = 1 - det / a_ii
/// for i == j. States are 0-based.
RationalSeries first_passage_series(const PolyMatrix& adj, const Polynomial& det, std::size_t i,
                                    std::size_t j);

}  // namespace mixchain
