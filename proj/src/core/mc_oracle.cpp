#include "mixchain/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "mixchain/error.hpp"
#include "mixchain/rng.hpp"

namespace mixchain {
namespace {

// Inverse-CDF table for one probability vector. The last positive entry is
// pinned to 1 so rounding never leaves a gap at the top.
class Sampler {
 public:
  template <typename Get>
  Sampler(std::size_t m, Get get) : cdf_(m) {
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const double p = get(k);
      acc += p;
      cdf_[k] = acc;
      if (p > 0.0) last = k;
    }
    for (std::size_t k = last; k < m; ++k) cdf_[k] = 1.0;
  }

  std::size_t draw(Xoshiro256& rng) const {
    const double u = rng.uniform();
    return std::size_t(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

struct Partial {
  std::vector<std::uint64_t> counts;
  std::uint64_t overflow = 0;
  std::uint64_t sum_n = 0;
  std::uint64_t sum_n2 = 0;
};

// Upper and lower Poisson tail probabilities P(X >= k), P(X <= k).
std::pair<double, double> poisson_tails(double lambda, std::uint64_t k) {
  double term = std::exp(-lambda);
  double cdf_below = 0.0;  // P(X <= k - 1)
  for (std::uint64_t x = 0; x < k; ++x) {
    cdf_below += term;
    term *= lambda / double(x + 1);
  }
  const double at_k = term;
  return {std::max(0.0, 1.0 - cdf_below), std::min(1.0, cdf_below + at_k)};
}

double null_z(double freq, double p, std::uint64_t trials) {
  if (p <= 0.0) return freq > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  if (p >= 1.0) return freq < 1.0 ? -std::numeric_limits<double>::infinity() : 0.0;
  return (freq - p) / std::sqrt(p * (1.0 - p) / double(trials));
}

// Analytic values this small are structural zeros: any observation rejects.
constexpr double kStructuralZero = 1e-12;

}  // namespace

double EmpiricalTable::freq(std::size_t n) const {
  if (trials == 0 || n >= counts.size()) return 0.0;
  return double(counts[n]) / double(trials);
}

double EmpiricalTable::se(std::size_t n) const {
  if (trials == 0) return 0.0;
  const double p = freq(n);
  return std::sqrt(p * (1.0 - p) / double(trials));
}

double EmpiricalTable::mean() const {
  const std::uint64_t seen = trials - overflow;
  return seen == 0 ? 0.0 : double(sum_n) / double(seen);
}

double EmpiricalTable::mean_se() const {
  const std::uint64_t seen = trials - overflow;
  if (seen < 2) return 0.0;
  const double mu = mean();
  const double var = (double(sum_n2) - double(seen) * mu * mu) / double(seen - 1);
  return std::sqrt(std::max(0.0, var) / double(seen));
}

EmpiricalTable simulate(const TransitionMatrix& chain, const StationaryDistribution& pi,
                        const SimConfig& cfg) {
  require_irreducible(chain);
  const std::size_t m = chain.size();
  if (cfg.start >= m) throw Error(ErrorCode::StateOutOfRange, "start state");
  if (cfg.trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (cfg.n_cap == 0) throw Error(ErrorCode::InvalidArgument, "n_cap must be at least 1");
  if (pi.size() != m) throw Error(ErrorCode::InvalidArgument, "pi does not match the chain");

  const Sampler target(m, [&](std::size_t k) { return pi[k]; });
  std::vector<Sampler> rows;
  rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) rows.emplace_back(m, [&](std::size_t k) { return chain(i, k); });

  const std::uint64_t blocks = (cfg.trials + kSimBlock - 1) / kSimBlock;
  std::vector<Xoshiro256> streams;
  streams.reserve(blocks);
  Xoshiro256 base(cfg.seed);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    streams.push_back(base);
    base.jump();
  }

  const bool pass = cfg.variant == MixingVariant::pass;
  auto run_block = [&](std::uint64_t b, Partial& out) {
    Xoshiro256 rng = streams[b];
    const std::uint64_t begin = b * kSimBlock;
    const std::uint64_t end = std::min(cfg.trials, begin + kSimBlock);
    for (std::uint64_t t = begin; t < end; ++t) {
      const std::size_t mix = target.draw(rng);
      std::size_t steps = 0;
      bool hit = !pass && mix == cfg.start;
      std::size_t x = cfg.start;
      while (!hit && steps < cfg.n_cap) {
        x = rows[x].draw(rng);
        ++steps;
        hit = x == mix;
      }
      if (!hit) {
        ++out.overflow;
        continue;
      }
      ++out.counts[steps];
      out.sum_n += steps;
      out.sum_n2 += std::uint64_t(steps) * steps;
    }
  };

  unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = unsigned(std::min<std::uint64_t>(workers, blocks));
  std::vector<Partial> partials(workers);
  for (auto& p : partials) p.counts.assign(cfg.n_cap + 1, 0);
  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&](unsigned w) {
    for (std::uint64_t b = next_block++; b < blocks; b = next_block++) run_block(b, partials[w]);
  };
  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  EmpiricalTable out;
  out.counts.assign(cfg.n_cap + 1, 0);
  out.trials = cfg.trials;
  out.seed = cfg.seed;
  out.rng_id = std::string(Xoshiro256::kId);
  out.variant = cfg.variant;
  out.start = cfg.start;
  for (const auto& p : partials) {
    for (std::size_t n = 0; n <= cfg.n_cap; ++n) out.counts[n] += p.counts[n];
    out.overflow += p.overflow;
    out.sum_n += p.sum_n;
    out.sum_n2 += p.sum_n2;
  }
  return out;
}

ComparisonReport compare(const EmpiricalTable& empirical, const DistributionTable& analytic) {
  if (analytic.probs.empty()) throw Error(ErrorCode::SupportMismatch, "analytic table is empty");
  if (!(analytic.tail_mass >= -kProbTol && analytic.tail_mass <= 1.0 + kProbTol)) {
    throw Error(ErrorCode::SupportMismatch, "analytic tail mass is not a probability");
  }
  if (empirical.trials == 0 || empirical.counts.empty()) {
    throw Error(ErrorCode::SupportMismatch, "empirical table is empty");
  }

  ComparisonReport r;
  const std::uint64_t T = empirical.trials;
  const std::size_t shared = std::min(empirical.n_cap(), analytic.n_max());

  // Mass beyond the shared range: analytic entries past the cap plus the
  // analytic tail against observations past the table plus the overflow.
  double rest_analytic = std::max(0.0, analytic.tail_mass);
  for (std::size_t n = shared + 1; n <= analytic.n_max(); ++n) rest_analytic += analytic.probs[n];
  std::uint64_t rest_count = empirical.overflow;
  for (std::size_t n = shared + 1; n <= empirical.n_cap(); ++n) rest_count += empirical.counts[n];

  r.pooled_count = rest_count;
  r.pooled_analytic = rest_analytic;
  for (std::size_t n = 0; n <= shared; ++n) {
    BinComparison b;
    b.n = n;
    b.count = empirical.counts[n];
    b.freq = empirical.freq(n);
    b.analytic = analytic.probs[n];
    r.max_abs_diff = std::max(r.max_abs_diff, std::abs(b.freq - b.analytic));
    if (b.analytic <= kStructuralZero) {
      b.z = null_z(b.freq, 0.0, T);
      if (b.count > 0) r.passed = false;
      ++r.tests;
    } else if (b.analytic * double(T) < kMinExpected) {
      b.pooled = true;
      b.z = null_z(b.freq, b.analytic, T);
      r.pooled_count += b.count;
      r.pooled_analytic += b.analytic;
    } else {
      b.z = null_z(b.freq, b.analytic, T);
      if (std::abs(b.z) > kZThreshold) r.passed = false;
      ++r.tests;
    }
    if (!b.pooled) r.max_abs_z = std::max(r.max_abs_z, std::abs(b.z));
    r.bins.push_back(b);
  }
  r.max_abs_diff = std::max(r.max_abs_diff, std::abs(double(rest_count) / double(T) - rest_analytic));

  const double pooled_freq = double(r.pooled_count) / double(T);
  const double expected = r.pooled_analytic * double(T);
  r.pooled_z = null_z(pooled_freq, r.pooled_analytic <= kStructuralZero ? 0.0 : r.pooled_analytic, T);
  ++r.tests;
  if (r.pooled_analytic <= kStructuralZero) {
    if (r.pooled_count > 0) r.passed = false;
  } else if (expected < kMinExpected) {
    // Too few expected events for the normal approximation.
    const auto [upper, lower] = poisson_tails(expected, r.pooled_count);
    if (std::min(upper, lower) < kPerTestLevel / 2.0) r.passed = false;
  } else if (std::abs(r.pooled_z) > kZThreshold) {
    r.passed = false;
  }
  r.max_abs_z = std::max(r.max_abs_z, std::abs(r.pooled_z));

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu tests at %.3g each (4 sigma two-sided); family-wise false alarm <= %.3g",
                r.tests, kPerTestLevel, double(r.tests) * kPerTestLevel);
  r.note = buf;
  return r;
}

}  // namespace mixchain
