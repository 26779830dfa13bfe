#include "mixchain/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "mixchain/error.hpp"
#include "mixchain/kernels.hpp"
#include "mixchain/tolerances.hpp"

namespace mixchain {
namespace {

using Index = Eigen::Index;
using PolyGrid = std::vector<std::vector<Polynomial>>;

Polynomial laplace_det(const PolyGrid& a) {
  const std::size_t n = a.size();
  if (n == 0) return Polynomial{1.0};
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  Polynomial total;
  for (std::size_t col = 0; col < n; ++col) {
    if (a[0][col].is_zero()) continue;
    PolyGrid minor(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) minor[r - 1].push_back(a[r][c]);
      }
    }
    const Polynomial term = a[0][col] * laplace_det(minor);
    total = col % 2 == 0 ? total + term : total - term;
  }
  return total;
}

PolyGrid i_minus_sp(const TransitionMatrix& chain) {
  const auto m = chain.size();
  PolyGrid a(m, std::vector<Polynomial>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a[i][j] = Polynomial{i == j ? 1.0 : 0.0, -chain(i, j)};
  return a;
}

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> out(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] + b[k];
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<double> out(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] - b[k];
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(out));
}

Polynomial operator*(double k, const Polynomial& a) {
  std::vector<double> out(a.c_);
  for (auto& v : out) v *= k;
  return Polynomial(std::move(out));
}

double max_coeff_gap(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  double gap = 0.0;
  for (std::size_t k = 0; k < n; ++k) gap = std::max(gap, std::abs(a[k] - b[k]));
  return gap;
}

PolyMatrix::PolyMatrix(std::size_t m, std::vector<Eigen::MatrixXd> planes)
    : m_(m), planes_(std::move(planes)) {
  packed_.reserve(planes_.size() * m_ * m_);
  for (const auto& pl : planes_) {
    if (std::size_t(pl.rows()) != m_ || std::size_t(pl.cols()) != m_) {
      throw Error(ErrorCode::InvalidDimension, "polynomial matrix plane has the wrong shape");
    }
    packed_.insert(packed_.end(), pl.data(), pl.data() + pl.size());
  }
}

Polynomial PolyMatrix::entry(std::size_t i, std::size_t j) const {
  std::vector<double> c(planes_.size());
  for (std::size_t k = 0; k < planes_.size(); ++k) c[k] = planes_[k](Index(i), Index(j));
  return Polynomial(std::move(c));
}

Eigen::MatrixXd PolyMatrix::evaluate(double s) const {
  Eigen::MatrixXd out(static_cast<Index>(m_), static_cast<Index>(m_));
  kernels::horner_planes(packed_, m_ * m_, s, std::span<double>(out.data(), m_ * m_));
  return out;
}

RationalSeries::RationalSeries(Polynomial num, Polynomial den) {
  const double d0 = den[0];
  if (d0 == 0.0) {
    throw Error(ErrorCode::InvariantViolation, "rational series denominator vanishes at s = 0");
  }
  num_ = (1.0 / d0) * num;
  den_ = (1.0 / d0) * den;
}

PolyMatrix cofactor_adjugate(const TransitionMatrix& chain) {
  const auto m = chain.size();
  const auto a = i_minus_sp(chain);
  std::vector<Eigen::MatrixXd> planes(m, Eigen::MatrixXd::Zero(Index(m), Index(m)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      // adj(i, j) = (-1)^{i+j} det(A without row j and column i).
      PolyGrid minor;
      for (std::size_t r = 0; r < m; ++r) {
        if (r == j) continue;
        std::vector<Polynomial> row;
        for (std::size_t c = 0; c < m; ++c)
          if (c != i) row.push_back(a[r][c]);
        minor.push_back(std::move(row));
      }
      Polynomial cof = laplace_det(minor);
      if ((i + j) % 2 == 1) cof = -1.0 * cof;
      for (std::size_t k = 0; k < cof.coeffs().size() && k < m; ++k)
        planes[k](Index(i), Index(j)) = cof[k];
    }
  }
  return PolyMatrix(m, std::move(planes));
}

CharacteristicData characteristic_data(const TransitionMatrix& chain) {
  const auto m = Index(chain.size());
  const Eigen::MatrixXd& p = chain.matrix();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);

  // M_1 = I, c_k = -tr(P M_k) / k, M_{k+1} = P M_k + c_k I.
  // Then det(I - sP) = 1 + sum c_k s^k and adj(I - sP) = sum M_k s^{k-1}.
  std::vector<double> det_c(std::size_t(m) + 1, 0.0);
  det_c[0] = 1.0;
  std::vector<Eigen::MatrixXd> planes;
  planes.reserve(std::size_t(m));
  Eigen::MatrixXd mk = id;
  for (Index k = 1; k <= m; ++k) {
    planes.push_back(mk);
    const Eigen::MatrixXd pm = p * mk;
    det_c[std::size_t(k)] = -pm.trace() / double(k);
    mk = pm + det_c[std::size_t(k)] * id;
  }

  CharacteristicData out{Polynomial(std::move(det_c)), PolyMatrix(std::size_t(m), std::move(planes))};

  if (m <= 3) {
    const auto direct = cofactor_adjugate(chain);
    double gap = 0.0;
    for (std::size_t k = 0; k < direct.plane_count(); ++k)
      gap = std::max(gap, (direct.plane(k) - out.adj.plane(k)).cwiseAbs().maxCoeff());
    gap = std::max(gap, max_coeff_gap(laplace_det(i_minus_sp(chain)), out.det));
    if (gap > kSeriesTol) {
      throw Error(ErrorCode::InvariantViolation,
                  "Faddeev-LeVerrier and cofactor expansion disagree by " + fmt_real(gap));
    }
  }
  return out;
}

Polynomial det_poly(const TransitionMatrix& chain) { return characteristic_data(chain).det; }

PolyMatrix adjugate_poly(const TransitionMatrix& chain) { return characteristic_data(chain).adj; }

std::vector<double> series_coeffs(const RationalSeries& rs, std::size_t n_max) {
  const auto& den = rs.den().coeffs();
  std::vector<double> c(n_max + 1, 0.0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    double v = rs.num()[n];
    const std::size_t kmax = std::min(n, den.size() == 0 ? 0 : den.size() - 1);
    for (std::size_t k = 1; k <= kmax; ++k) v -= den[k] * c[n - k];
    c[n] = v;
  }
  return c;
}

RationalSeries first_passage_series(const PolyMatrix& adj, const Polynomial& det, std::size_t i,
                                    std::size_t j) {
  const auto m = adj.size();
  if (i >= m || j >= m) {
    throw Error(ErrorCode::StateOutOfRange, "state index outside the chain");
  }
  if (i != j) return RationalSeries(adj.entry(i, j), adj.entry(j, j));
  const Polynomial a_ii = adj.entry(i, i);
  return RationalSeries(a_ii - det, a_ii);
}

}  // namespace mixchain
