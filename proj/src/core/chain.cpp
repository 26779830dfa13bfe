#include "mixchain/chain.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <string>

#include "mixchain/error.hpp"
#include "mixchain/tolerances.hpp"

namespace mixchain {
namespace {

using Index = Eigen::Index;

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<bool> reachable(const Eigen::MatrixXd& p, std::size_t start, bool reverse) {
  const auto m = static_cast<std::size_t>(p.rows());
  std::vector<bool> seen(m, false);
  std::queue<std::size_t> frontier;
  seen[start] = true;
  frontier.push(start);
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (std::size_t v = 0; v < m; ++v) {
      const double w = reverse ? p(Index(v), Index(u)) : p(Index(u), Index(v));
      if (w > 0.0 && !seen[v]) {
        seen[v] = true;
        frontier.push(v);
      }
    }
  }
  return seen;
}

double max_abs(const Eigen::MatrixXd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

// Determinant-based stationary vector of a 3-state chain, (D1, D2, D3)/D.
Eigen::Vector3d three_state_pi(const Eigen::MatrixXd& p) {
  auto q = [&](int i, int j) { return p(i - 1, j - 1); };
  const double d1 = q(2, 3) * q(3, 1) + q(2, 1) * q(3, 2) + q(2, 1) * q(3, 1);
  const double d2 = q(3, 1) * q(1, 2) + q(3, 2) * q(1, 3) + q(3, 2) * q(1, 2);
  const double d3 = q(1, 2) * q(2, 3) + q(1, 3) * q(2, 1) + q(1, 3) * q(2, 3);
  return Eigen::Vector3d(d1, d2, d3) / (d1 + d2 + d3);
}

}  // namespace

TransitionMatrix validate_chain(const std::vector<std::vector<double>>& raw) {
  const std::size_t m = raw.size();
  for (std::size_t r = 0; r < m; ++r) {
    if (raw[r].size() != m) {
      throw Error(ErrorCode::NonSquare, "row " + std::to_string(r + 1) + " has " +
                                            std::to_string(raw[r].size()) + " entries, expected " +
                                            std::to_string(m));
    }
  }
  if (m < 2) {
    throw Error(ErrorCode::InvalidDimension,
                "a chain needs at least 2 states, got " + std::to_string(m));
  }

  Eigen::MatrixXd p(static_cast<Index>(m), static_cast<Index>(m));
  std::vector<std::string> notes;
  for (std::size_t r = 0; r < m; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      const double v = raw[r][c];
      if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorCode::NegativeEntry, "entry (" + std::to_string(r + 1) + "," +
                                                  std::to_string(c + 1) + ") = " + fmt_real(v) +
                                                  " is not a nonnegative probability");
      }
      p(Index(r), Index(c)) = v;
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowTol) {
      throw Error(ErrorCode::RowSumOutOfTolerance,
                  "row " + std::to_string(r + 1) + " sums to " + fmt_real(sum));
    }
    if (sum != 1.0) {
      p.row(Index(r)) /= sum;
      notes.push_back("row " + std::to_string(r + 1) + " renormalised from sum " + fmt_real(sum));
    }
  }
  return TransitionMatrix(std::move(p), std::move(notes));
}

TransitionMatrix validate_matrix(const Eigen::MatrixXd& raw) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(raw.rows()));
  for (Index r = 0; r < raw.rows(); ++r) {
    rows[std::size_t(r)].resize(std::size_t(raw.cols()));
    for (Index c = 0; c < raw.cols(); ++c) rows[std::size_t(r)][std::size_t(c)] = raw(r, c);
  }
  return validate_chain(rows);
}

TransitionMatrix TransitionMatrix::relabeled(const std::vector<std::size_t>& perm) const {
  const auto m = size();
  if (perm.size() != m) {
    throw Error(ErrorCode::InvalidDimension, "permutation length does not match state count");
  }
  std::vector<bool> used(m, false);
  for (auto k : perm) {
    if (k >= m || used[k]) throw Error(ErrorCode::InvalidDimension, "not a permutation");
    used[k] = true;
  }
  Eigen::MatrixXd q(p_.rows(), p_.cols());
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) q(Index(a), Index(b)) = p_(Index(perm[a]), Index(perm[b]));
  return TransitionMatrix(std::move(q), notes_);
}

ChainStructure classify(const TransitionMatrix& chain) {
  const auto& p = chain.matrix();
  const auto m = chain.size();
  const auto fwd = reachable(p, 0, false);
  const auto bwd = reachable(p, 0, true);

  ChainStructure out;
  out.irreducible = true;
  for (std::size_t k = 0; k < m; ++k) out.irreducible = out.irreducible && fwd[k] && bwd[k];

  // BFS levels from state 1; every edge u -> v inside the reached set closes
  // a walk whose length differs from a cycle length by level[u] + 1 - level[v].
  std::vector<long> level(m, -1);
  std::queue<std::size_t> frontier;
  level[0] = 0;
  frontier.push(0);
  long g = 0;
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (std::size_t v = 0; v < m; ++v) {
      if (!(p(Index(u), Index(v)) > 0.0)) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      } else {
        g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  out.period = g == 0 ? 1 : static_cast<std::size_t>(g);
  out.regular = out.irreducible && out.period == 1;
  return out;
}

void require_irreducible(const TransitionMatrix& chain) {
  if (!classify(chain).irreducible) {
    throw Error(ErrorCode::NotIrreducible,
                "the transition digraph is not strongly connected; no unique stationary "
                "distribution exists");
  }
}

StationaryDistribution stationary(const TransitionMatrix& chain) {
  require_irreducible(chain);
  const auto m = Index(chain.size());
  const auto& p = chain.matrix();

  // Balance equations (I - P)^T pi = 0 with the last one replaced by sum(pi) = 1.
  Eigen::MatrixXd a = (Eigen::MatrixXd::Identity(m, m) - p).transpose();
  a.row(m - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(m - 1) = 1.0;
  StationaryDistribution out;
  out.pi = a.partialPivLu().solve(rhs);

  if (!out.pi.allFinite()) throw Error(ErrorCode::SingularSystem, "stationary system is singular");
  out.residual = (out.pi.transpose() * p - out.pi.transpose()).cwiseAbs().maxCoeff();
  if (out.residual > kProbTol || std::abs(out.pi.sum() - 1.0) > kProbTol ||
      out.pi.minCoeff() < -kProbTol) {
    throw Error(ErrorCode::SingularSystem,
                "stationary solve residual " + fmt_real(out.residual) + " exceeds tolerance");
  }
  if (m == 3) {
    const double gap = (out.pi - three_state_pi(p)).cwiseAbs().maxCoeff();
    if (gap > kMatTol) {
      throw Error(ErrorCode::InvariantViolation,
                  "stationary vector disagrees with the cofactor form by " + fmt_real(gap));
    }
  }
  return out;
}

FundamentalMatrix fundamental_matrix(const TransitionMatrix& chain,
                                     const StationaryDistribution& pi) {
  require_irreducible(chain);
  const auto m = Index(chain.size());
  const Eigen::MatrixXd big_pi = Eigen::VectorXd::Ones(m) * pi.pi.transpose();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m) - chain.matrix() + big_pi;

  FundamentalMatrix out;
  out.z = a.partialPivLu().inverse();
  if (!out.z.allFinite()) {
    throw Error(ErrorCode::SingularSystem, "I - P + Pi is numerically singular");
  }
  out.residual = max_abs(out.z * a - Eigen::MatrixXd::Identity(m, m));
  if (out.residual > kMatTol) {
    throw Error(ErrorCode::SingularSystem,
                "fundamental matrix residual " + fmt_real(out.residual) + " exceeds tolerance");
  }
  return out;
}

double kemeny_constant(const FundamentalMatrix& z) { return z.z.trace(); }

MeanPassageMatrix mean_first_passage(const TransitionMatrix& chain,
                                     const StationaryDistribution& pi,
                                     const FundamentalMatrix& z) {
  require_irreducible(chain);
  const auto m = Index(chain.size());
  MeanPassageMatrix out;
  out.mfp.resize(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      out.mfp(i, j) = i == j ? 1.0 / pi.pi(j) : (z.z(j, j) - z.z(i, j)) / pi.pi(j);
    }
  }

  // Independent route: m_.j solves (I - P with column j removed) x = e.
  double worst = 0.0;
  for (Index j = 0; j < m; ++j) {
    Eigen::MatrixXd taboo = chain.matrix();
    taboo.col(j).setZero();
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m) - taboo;
    const Eigen::VectorXd x = a.partialPivLu().solve(Eigen::VectorXd::Ones(m));
    if (!x.allFinite()) throw Error(ErrorCode::SingularSystem, "taboo system is singular");
    for (Index i = 0; i < m; ++i) {
      const double scale = std::max(1.0, std::abs(out.mfp(i, j)));
      worst = std::max(worst, std::abs(x(i) - out.mfp(i, j)) / scale);
    }
  }
  out.cross_check = worst;
  if (worst > kMatTol) {
    throw Error(ErrorCode::InvariantViolation,
                "mean first passage routes disagree by " + fmt_real(worst));
  }
  return out;
}

}  // namespace mixchain
