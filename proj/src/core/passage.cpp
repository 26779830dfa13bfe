#include "mixchain/passage.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "mixchain/error.hpp"
#include "mixchain/kernels.hpp"
#include "mixchain/series.hpp"

namespace mixchain {
namespace {

void check_states(const TransitionMatrix& chain, std::size_t from, std::size_t to) {
  const auto m = chain.size();
  if (from >= m || to >= m) {
    throw Error(ErrorCode::StateOutOfRange, "state " + std::to_string(std::max(from, to) + 1) +
                                                " is outside 1.." + std::to_string(m));
  }
}

void check_truncation(const Truncation& trunc) {
  if (trunc.n_max && *trunc.n_max < 1) {
    throw Error(ErrorCode::InvalidArgument, "n_max must be at least 1");
  }
  if (trunc.n_cap < 1) throw Error(ErrorCode::InvalidArgument, "n_cap must be at least 1");
}

std::span<const double> col_major(const TransitionMatrix& chain) {
  const auto& p = chain.matrix();
  return {p.data(), static_cast<std::size_t>(p.size())};
}

}  // namespace

DistributionTable fp_dist_recurrence(const TransitionMatrix& chain, std::size_t from,
                                     std::size_t to, const Truncation& trunc) {
  check_states(chain, from, to);
  check_truncation(trunc);
  const auto m = chain.size();
  const auto p = col_major(chain);
  const std::size_t limit = trunc.n_max.value_or(trunc.n_cap);

  std::vector<double> x(p.begin() + std::ptrdiff_t(to * m), p.begin() + std::ptrdiff_t((to + 1) * m));
  std::vector<double> next(m);
  std::vector<double> probs{0.0, x[from]};
  double mass = x[from];
  for (std::size_t n = 2; n <= limit; ++n) {
    if (!trunc.n_max && 1.0 - mass <= trunc.tail_tol) break;
    kernels::taboo_step(p, x, to, next);
    x.swap(next);
    probs.push_back(x[from]);
    mass += x[from];
  }
  return make_table(std::move(probs), 1);
}

DistributionTable fp_dist_series(const TransitionMatrix& chain, std::size_t from, std::size_t to,
                                 const Truncation& trunc) {
  check_states(chain, from, to);
  check_truncation(trunc);
  const std::size_t n_max =
      trunc.n_max ? *trunc.n_max : fp_dist_recurrence(chain, from, to, trunc).n_max();
  const auto cd = characteristic_data(chain);
  const auto rs = first_passage_series(cd.adj, cd.det, from, to);
  auto coeffs = series_coeffs(rs, n_max);
  coeffs[0] = 0.0;  // exactly zero in exact arithmetic; drop rounding residue
  return make_table(std::move(coeffs), 1);
}

std::vector<DistributionTable> fp_dist_row(const TransitionMatrix& chain, std::size_t from,
                                           const Truncation& trunc) {
  check_states(chain, from, from);
  check_truncation(trunc);
  const auto m = chain.size();
  const auto p = col_major(chain);
  const std::size_t limit = trunc.n_max.value_or(trunc.n_cap);

  // f^(n) held as an m x m column-major matrix, column j = target j.
  std::vector<double> f(p.begin(), p.end());
  std::vector<double> next(m * m);
  std::vector<std::vector<double>> rows(m, std::vector<double>{0.0});
  std::vector<double> mass(m, 0.0);
  auto record = [&] {
    for (std::size_t j = 0; j < m; ++j) {
      const double v = f[j * m + from];
      rows[j].push_back(v);
      mass[j] += v;
    }
  };
  record();
  for (std::size_t n = 2; n <= limit; ++n) {
    if (!trunc.n_max) {
      const double worst = 1.0 - *std::min_element(mass.begin(), mass.end());
      if (worst <= trunc.tail_tol) break;
    }
    kernels::taboo_step_all(p, f, next, m);
    f.swap(next);
    record();
  }

  std::vector<DistributionTable> out;
  out.reserve(m);
  for (auto& r : rows) out.push_back(make_table(std::move(r), 1));
  return out;
}

double max_table_gap(const DistributionTable& a, const DistributionTable& b) {
  const std::size_t n = std::max(a.probs.size(), b.probs.size());
  double gap = 0.0;
  for (std::size_t k = 0; k < n; ++k) gap = std::max(gap, std::abs(a.at(k) - b.at(k)));
  return gap;
}

}  // namespace mixchain
