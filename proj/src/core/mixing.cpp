#include "mixchain/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "mixchain/error.hpp"
#include "mixchain/passage.hpp"
#include "mixchain/series.hpp"

namespace mixchain {
namespace {

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check_start(const TransitionMatrix& chain, std::size_t start) {
  if (start >= chain.size()) {
    throw Error(ErrorCode::StateOutOfRange, "start state " + std::to_string(start + 1) +
                                                " is outside 1.." + std::to_string(chain.size()));
  }
}

std::pair<DistributionTable, DistributionTable> tables_from_row(
    const std::vector<DistributionTable>& row, const StationaryDistribution& pi,
    std::size_t start) {
  const std::size_t m = row.size();
  const std::size_t n_max = row.front().n_max();
  std::vector<double> hit(n_max + 1, 0.0);
  std::vector<double> pass(n_max + 1, 0.0);
  hit[0] = pi[start];
  for (std::size_t n = 1; n <= n_max; ++n) {
    double h = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != start) h += pi[j] * row[j].probs[n];
    }
    hit[n] = h;
    pass[n] = h + pi[start] * row[start].probs[n];
  }
  return {make_table(std::move(hit), 0), make_table(std::move(pass), 1)};
}

std::pair<DistributionTable, DistributionTable> both_tables(const TransitionMatrix& chain,
                                                            const StationaryDistribution& pi,
                                                            std::size_t start,
                                                            const Truncation& trunc) {
  require_irreducible(chain);
  check_start(chain, start);
  return tables_from_row(fp_dist_row(chain, start, trunc), pi, start);
}

double weighted_moment(const DistributionTable& t) {
  double s = 0.0;
  for (std::size_t n = 0; n < t.probs.size(); ++n) s += double(n) * t.probs[n];
  return s;
}

double table_pgf(const DistributionTable& t, double s) {
  double acc = 0.0;
  for (auto it = t.probs.rbegin(); it != t.probs.rend(); ++it) acc = acc * s + *it;
  return acc;
}

}  // namespace

std::string_view variant_name(MixingVariant v) {
  return v == MixingVariant::hit ? "hit" : "pass";
}

DistributionTable mixing_hit_dist(const TransitionMatrix& chain, const StationaryDistribution& pi,
                                  std::size_t start, const Truncation& trunc) {
  return both_tables(chain, pi, start, trunc).first;
}

DistributionTable mixing_pass_dist(const TransitionMatrix& chain,
                                   const StationaryDistribution& pi, std::size_t start,
                                   const Truncation& trunc) {
  return both_tables(chain, pi, start, trunc).second;
}

DistributionTable mixing_dist(const TransitionMatrix& chain, const StationaryDistribution& pi,
                              std::size_t start, MixingVariant variant, const Truncation& trunc) {
  auto tables = both_tables(chain, pi, start, trunc);
  return variant == MixingVariant::hit ? std::move(tables.first) : std::move(tables.second);
}

double gf_eval(const TransitionMatrix& chain, std::size_t start, MixingVariant variant,
               double s) {
  check_start(chain, start);
  if (!(std::abs(s) < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "generating functions are evaluated for |s| < 1");
  }
  const auto pi = stationary(chain);
  const auto cd = characteristic_data(chain);
  const Eigen::MatrixXd adj = cd.adj.evaluate(s);
  const auto i = Eigen::Index(start);

  double f = 0.0;
  for (Eigen::Index j = 0; j < adj.rows(); ++j) f += pi.pi(j) * adj(i, j) / adj(j, j);
  if (variant == MixingVariant::hit) return f;
  return f - pi.pi(i) * cd.det(s) / adj(i, i);
}

MixingMeans expected_mixing(const TransitionMatrix& chain, const StationaryDistribution& pi,
                            const MeanPassageMatrix& mfp) {
  require_irreducible(chain);
  const auto m = chain.size();
  MixingMeans out;
  out.kemeny = kemeny_constant(fundamental_matrix(chain, pi));
  out.eta = out.kemeny;
  out.tau = out.eta - 1.0;
  out.per_state_tau.resize(m);
  out.per_state_eta.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double tau = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) tau += pi[j] * mfp(i, j);
    }
    out.per_state_tau[i] = tau;
    out.per_state_eta[i] = tau + pi[i] * mfp(i, i);
    out.spread = std::max({out.spread, std::abs(out.per_state_eta[i] - out.eta),
                           std::abs(out.per_state_tau[i] - out.tau)});
  }
  if (out.spread > kMatTol) {
    throw Error(ErrorCode::InvariantViolation,
                "expected mixing times depend on the start state (spread " +
                    fmt_real(out.spread) + ")");
  }
  return out;
}

double linkage_gap(const DistributionTable& hit, const DistributionTable& pass,
                   const DistributionTable& recurrence, double pi_i) {
  const std::size_t n = std::max({hit.probs.size(), pass.probs.size(), recurrence.probs.size()});
  double gap = 0.0;
  for (std::size_t k = 1; k < n; ++k)
    gap = std::max(gap, std::abs(pass.at(k) - hit.at(k) - pi_i * recurrence.at(k)));
  return gap;
}

double shift_gap(const DistributionTable& hit, const DistributionTable& pass) {
  if (pass.probs.empty()) return hit.probs.empty() ? 0.0 : 1.0;
  const std::size_t n = std::min(hit.probs.size(), pass.probs.size() - 1);
  double gap = 0.0;
  for (std::size_t k = 0; k < n; ++k) gap = std::max(gap, std::abs(hit.probs[k] - pass.probs[k + 1]));
  return gap;
}

MixingReport mixing_report(const TransitionMatrix& chain, const Truncation& trunc) {
  require_irreducible(chain);
  MixingReport rep;
  rep.pi = stationary(chain);
  const auto z = fundamental_matrix(chain, rep.pi);
  const auto mfp = mean_first_passage(chain, rep.pi, z);
  const auto means = expected_mixing(chain, rep.pi, mfp);
  rep.tau = means.tau;
  rep.eta = means.eta;
  rep.diagnostics.mean_spread = means.spread;
  rep.diagnostics.mfp_cross_check = mfp.cross_check;

  const auto m = chain.size();
  rep.diagnostics.moments_resolved = true;
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = fp_dist_row(chain, i, trunc);
    auto [hit, pass] = tables_from_row(row, rep.pi, i);
    auto& d = rep.diagnostics;
    d.linkage = std::max(d.linkage, linkage_gap(hit, pass, row[i], rep.pi[i]));
    d.tau_moment_gap = std::max(d.tau_moment_gap, std::abs(weighted_moment(hit) - rep.tau));
    d.eta_moment_gap = std::max(d.eta_moment_gap, std::abs(weighted_moment(pass) - rep.eta));
    d.moments_resolved = d.moments_resolved && hit.tail_mass <= trunc.tail_tol &&
                         pass.tail_mass <= trunc.tail_tol;
    d.gf_gap = std::max({d.gf_gap,
                         std::abs(table_pgf(hit, 0.5) - gf_eval(chain, i, MixingVariant::hit, 0.5)),
                         std::abs(table_pgf(pass, 0.5) - gf_eval(chain, i, MixingVariant::pass, 0.5))});
    rep.hit_dist.push_back(std::move(hit));
    rep.pass_dist.push_back(std::move(pass));
  }
  return rep;
}

}  // namespace mixchain
