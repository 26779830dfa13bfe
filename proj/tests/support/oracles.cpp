#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace oracle {

Rows random_chain(std::size_t m, std::mt19937_64& rng, double zero_prob, bool regular) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> next(m);
  for (std::size_t k = 0; k < m; ++k) next[order[k]] = order[(k + 1) % m];

  Rows p(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const bool keep = j == next[i] || (regular && j == i) || unit(rng) >= zero_prob;
      p[i][j] = keep ? gamma(rng) + 1e-3 : 0.0;
      sum += p[i][j];
    }
    for (double& v : p[i]) v /= sum;
  }
  return p;
}

mixchain::TransitionMatrix random_transition(std::size_t m, std::mt19937_64& rng, double zero_prob,
                                             bool regular) {
  return mixchain::validate_chain(random_chain(m, rng, zero_prob, regular));
}

Rows to_rows(const mixchain::TransitionMatrix& chain) {
  Rows p(chain.size(), std::vector<double>(chain.size()));
  for (std::size_t i = 0; i < chain.size(); ++i)
    for (std::size_t j = 0; j < chain.size(); ++j) p[i][j] = chain(i, j);
  return p;
}

std::vector<double> path_enumeration(const Rows& p, std::size_t i, std::size_t j, std::size_t n_max) {
  std::vector<double> f(n_max + 1, 0.0);
  const std::size_t m = p.size();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t at, std::size_t len,
                                                                   double mass) {
    for (std::size_t k = 0; k < m; ++k) {
      const double w = mass * p[at][k];
      if (w == 0.0) continue;
      if (k == j) {
        f[len + 1] += w;
      } else if (len + 1 < n_max) {
        walk(k, len + 1, w);
      }
    }
  };
  if (n_max >= 1) walk(i, 0, 1.0);
  return f;
}

std::vector<double> path_mixing(const Rows& p, const std::vector<double>& pi, std::size_t start,
                                bool pass, std::size_t n_max) {
  std::vector<double> out(n_max + 1, 0.0);
  if (!pass) out[0] = pi[start];
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!pass && j == start) continue;
    const auto f = path_enumeration(p, start, j, n_max);
    for (std::size_t n = 1; n <= n_max; ++n) out[n] += pi[j] * f[n];
  }
  return out;
}

namespace {

Eigen::MatrixXd to_eigen(const Rows& p) {
  const auto m = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd e(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) e(i, j) = p[std::size_t(i)][std::size_t(j)];
  return e;
}

}  // namespace

std::vector<double> eigen_stationary(const Rows& p) {
  const Eigen::MatrixXd pt = to_eigen(p).transpose();
  Eigen::EigenSolver<Eigen::MatrixXd> es(pt);
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < es.eigenvalues().size(); ++k) {
    if (std::abs(es.eigenvalues()(k) - 1.0) < std::abs(es.eigenvalues()(best) - 1.0)) best = k;
  }
  Eigen::VectorXd v = es.eigenvectors().col(best).real();
  v /= v.sum();
  return {v.data(), v.data() + v.size()};
}

double spectral_kemeny(const Rows& p) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(p), false);
  const auto& ev = es.eigenvalues();
  Eigen::Index unit = 0;
  for (Eigen::Index k = 1; k < ev.size(); ++k) {
    if (std::abs(ev(k) - 1.0) < std::abs(ev(unit) - 1.0)) unit = k;
  }
  std::complex<double> sum = 1.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (k != unit) sum += 1.0 / (1.0 - ev(k));
  }
  return sum.real();
}

Eigen::MatrixXd direct_mfp(const Rows& p) {
  const Eigen::MatrixXd P = to_eigen(p);
  const Eigen::Index m = P.rows();
  Eigen::MatrixXd out(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    // Taboo system over k != j, then m_jj = 1 + sum_{k != j} p_jk m_kj.
    Eigen::MatrixXd T(m - 1, m - 1);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m - 1);
    for (Eigen::Index a = 0, r = 0; a < m; ++a) {
      if (a == j) continue;
      for (Eigen::Index b = 0, c = 0; b < m; ++b) {
        if (b == j) continue;
        T(r, c++) = (a == b ? 1.0 : 0.0) - P(a, b);
      }
      ++r;
    }
    const Eigen::VectorXd x = T.fullPivLu().solve(ones);
    double mjj = 1.0;
    for (Eigen::Index a = 0, r = 0; a < m; ++a) {
      if (a == j) continue;
      out(a, j) = x(r);
      mjj += P(j, a) * x(r);
      ++r;
    }
    out(j, j) = mjj;
  }
  return out;
}

namespace {

std::vector<double> interpolate(const std::function<double(double)>& g, std::size_t degree) {
  const auto n = static_cast<Eigen::Index>(degree + 1);
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = -0.9 + 1.8 * double(k) / double(n - 1);
    double pw = 1.0;
    for (Eigen::Index c = 0; c < n; ++c, pw *= s) V(k, c) = pw;
    y(k) = g(s);
  }
  const Eigen::VectorXd c = V.fullPivLu().solve(y);
  return {c.data(), c.data() + c.size()};
}

}  // namespace

std::vector<double> interpolated_det(const Rows& p) {
  const Eigen::MatrixXd P = to_eigen(p);
  const auto m = P.rows();
  return interpolate([&](double s) { return (Eigen::MatrixXd::Identity(m, m) - s * P).determinant(); },
                     std::size_t(m));
}

std::vector<double> interpolated_adj(const Rows& p, std::size_t i, std::size_t j) {
  const Eigen::MatrixXd P = to_eigen(p);
  const auto m = P.rows();
  return interpolate(
      [&](double s) {
        const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m) - s * P;
        const Eigen::MatrixXd inv = A.inverse();
        return A.determinant() * inv(Eigen::Index(i), Eigen::Index(j));
      },
      std::size_t(m - 1));
}

std::vector<double> toeplitz_division(const std::vector<double>& num, const std::vector<double>& den,
                                      std::size_t n_max) {
  const auto n = static_cast<Eigen::Index>(n_max + 1);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c <= r; ++c) {
      const auto k = std::size_t(r - c);
      L(r, c) = k < den.size() ? den[k] : 0.0;
    }
    b(r) = std::size_t(r) < num.size() ? num[std::size_t(r)] : 0.0;
  }
  const Eigen::VectorXd c = L.triangularView<Eigen::Lower>().solve(b);
  return {c.data(), c.data() + c.size()};
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double g = 0.0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double x = k < a.size() ? a[k] : 0.0;
    const double y = k < b.size() ? b[k] : 0.0;
    g = std::max(g, std::abs(x - y));
  }
  return g;
}

}  // namespace oracle
