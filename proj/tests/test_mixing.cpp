#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mixchain/closed_forms.hpp"
#include "mixchain/error.hpp"
#include "mixchain/mixing.hpp"
#include "mixchain/passage.hpp"
#include "support/oracles.hpp"

using namespace mixchain;

namespace {

struct Solved {
  TransitionMatrix chain;
  StationaryDistribution pi;
  MeanPassageMatrix mfp;
};

Solved solve(const std::vector<std::vector<double>>& rows) {
  auto chain = validate_chain(rows);
  auto pi = stationary(chain);
  auto mfp = mean_first_passage(chain, pi, fundamental_matrix(chain, pi));
  return {std::move(chain), std::move(pi), std::move(mfp)};
}

}  // namespace

TEST(HitDist, PeriodThree) {
  const auto s = solve({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  const auto f = mixing_hit_dist(s.chain, s.pi, 0, Truncation::fixed(10));
  const auto g = mixing_pass_dist(s.chain, s.pi, 0, Truncation::fixed(10));
  for (std::size_t n = 0; n <= 10; ++n) {
    EXPECT_NEAR(f.probs[n], n <= 2 ? 1.0 / 3 : 0.0, 1e-12);
    EXPECT_NEAR(g.probs[n], n >= 1 && n <= 3 ? 1.0 / 3 : 0.0, 1e-12);
  }
  EXPECT_EQ(f.support_offset, 0u);
  EXPECT_EQ(g.support_offset, 1u);
}

TEST(HitDist, TwoStateFormulas) {
  const auto flip = solve({{0, 1}, {1, 0}});
  const auto f = mixing_hit_dist(flip.chain, flip.pi, 0, Truncation::fixed(6));
  EXPECT_NEAR(f.probs[0], 0.5, 1e-15);
  EXPECT_NEAR(f.probs[1], 0.5, 1e-15);
  for (std::size_t n = 2; n <= 6; ++n) EXPECT_EQ(f.probs[n], 0.0);

  const double a = 0.2, b = 0.3, d = 1 - a - b;
  const double pi1 = b / (a + b), pi2 = a / (a + b);
  const double p11 = 1 - a, p12 = a, p22 = 1 - b;
  const auto s = solve({{p11, p12}, {b, p22}});
  const auto hit = mixing_hit_dist(s.chain, s.pi, 0, Truncation::fixed(40));
  const auto pass = mixing_pass_dist(s.chain, s.pi, 0, Truncation::fixed(40));
  EXPECT_NEAR(hit.probs[0], pi1, 1e-15);
  EXPECT_NEAR(hit.probs[1], 0.08, 1e-15);
  EXPECT_NEAR(pass.probs[1], pi1 * p11 + pi2 * p12, 1e-15);
  for (std::size_t n = 2; n <= 40; ++n) {
    EXPECT_NEAR(hit.probs[n], pi2 * p12 * std::pow(p11, double(n - 1)), 1e-15);
    EXPECT_NEAR(pass.probs[n],
                pi1 * (p11 * p22 - d) * std::pow(p22, double(n - 2)) +
                    pi2 * p12 * std::pow(p11, double(n - 1)),
                1e-15);
  }
}

TEST(PassDist, IndependentTrials) {
  const double a[3] = {0.2, 0.3, 0.5};
  const auto s = solve({{a[0], a[1], a[2]}, {a[0], a[1], a[2]}, {a[0], a[1], a[2]}});
  const auto g = mixing_pass_dist(s.chain, s.pi, 0, Truncation::fixed(40));
  for (std::size_t n = 1; n <= 40; ++n) {
    double ref = 0.0;
    for (double x : a) ref += x * x * std::pow(1 - x, double(n - 1));
    EXPECT_NEAR(g.probs[n], ref, 1e-14);
  }
}

TEST(Mixing, RandomChainsAgainstPathEnumeration) {
  std::mt19937_64 rng(71);
  for (std::size_t m = 2; m <= 4; ++m) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto r = oracle::random_chain(m, rng);
      const auto s = solve(r);
      const auto pi = oracle::eigen_stationary(r);
      for (std::size_t i = 0; i < m; ++i) {
        const auto f = mixing_hit_dist(s.chain, s.pi, i, Truncation::fixed(7));
        const auto g = mixing_pass_dist(s.chain, s.pi, i, Truncation::fixed(7));
        EXPECT_LE(oracle::max_abs_diff(f.probs, oracle::path_mixing(r, pi, i, false, 7)), 1e-10);
        EXPECT_LE(oracle::max_abs_diff(g.probs, oracle::path_mixing(r, pi, i, true, 7)), 1e-10);
      }
    }
  }
}

TEST(Mixing, LinkageIdentity) {
  std::mt19937_64 rng(73);
  for (std::size_t m = 2; m <= 6; ++m) {
    const auto s = solve(oracle::random_chain(m, rng));
    for (std::size_t i = 0; i < m; ++i) {
      const auto f = mixing_hit_dist(s.chain, s.pi, i, Truncation::fixed(80));
      const auto g = mixing_pass_dist(s.chain, s.pi, i, Truncation::fixed(80));
      const auto fii = fp_dist_recurrence(s.chain, i, i, Truncation::fixed(80));
      EXPECT_LE(linkage_gap(f, g, fii, s.pi[i]), kProbTol);
    }
  }
}

TEST(GfEval, EndpointsAndTableAgreement) {
  std::mt19937_64 rng(79);
  for (std::size_t m = 2; m <= 5; ++m) {
    const auto s = solve(oracle::random_chain(m, rng, 0.3, true));
    for (std::size_t i = 0; i < m; ++i) {
      EXPECT_NEAR(gf_eval(s.chain, i, MixingVariant::hit, 0.0), s.pi[i], 1e-14);
      EXPECT_NEAR(gf_eval(s.chain, i, MixingVariant::pass, 0.0), 0.0, 1e-14);
      EXPECT_NEAR(gf_eval(s.chain, i, MixingVariant::hit, 1.0 - 1e-9), 1.0, 1e-6);
      EXPECT_NEAR(gf_eval(s.chain, i, MixingVariant::pass, 1.0 - 1e-9), 1.0, 1e-6);
      for (double z : {-0.6, 0.3, 0.5, 0.9}) {
        for (auto v : {MixingVariant::hit, MixingVariant::pass}) {
          const auto t = mixing_dist(s.chain, s.pi, i, v);
          double acc = 0.0;
          for (auto it = t.probs.rbegin(); it != t.probs.rend(); ++it) acc = acc * z + *it;
          EXPECT_NEAR(gf_eval(s.chain, i, v, z), acc, kSeriesTol + t.tail_mass);
        }
      }
    }
  }
  const auto two = solve({{0.8, 0.2}, {0.3, 0.7}});
  const auto t = mixing_hit_dist(two.chain, two.pi, 0, Truncation::fixed(200));
  double acc = 0.0;
  for (std::size_t n = 0; n <= 200; ++n) acc += t.probs[n] * std::pow(0.5, double(n));
  EXPECT_NEAR(gf_eval(two.chain, 0, MixingVariant::hit, 0.5), acc, 1e-14);
  EXPECT_THROW(gf_eval(two.chain, 0, MixingVariant::hit, 1.0), Error);
}

TEST(ExpectedMixing, PrintedValues) {
  const double a = 0.2, b = 0.3;
  const auto two = solve({{1 - a, a}, {b, 1 - b}});
  const auto m2 = expected_mixing(two.chain, two.pi, two.mfp);
  EXPECT_NEAR(m2.tau, 2.0, 1e-12);
  EXPECT_NEAR(m2.eta, 3.0, 1e-12);

  std::mt19937_64 rng(83);
  for (int rep = 0; rep < 30; ++rep) {
    const auto r = oracle::random_chain(3, rng);
    const auto s = solve(r);
    const auto mm = expected_mixing(s.chain, s.pi, s.mfp);
    const auto cf = closed_forms::three_state_means(closed_forms::ThreeStateChain(s.chain));
    EXPECT_NEAR(mm.tau, cf.tau, 1e-10);
    EXPECT_NEAR(mm.eta, mm.tau + 1.0, kMatTol);
  }

  const double eps = 0.3;
  const auto drift = solve({{1 - eps, eps, 0}, {0, 1 - eps, eps}, {eps, 0, 1 - eps}});
  EXPECT_NEAR(expected_mixing(drift.chain, drift.pi, drift.mfp).eta, 1.0 + 1.0 / eps, 1e-10);
}

TEST(ExpectedMixing, StartIndependenceAndBounds) {
  std::mt19937_64 rng(89);
  for (std::size_t m = 2; m <= 6; ++m) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto s = solve(oracle::random_chain(m, rng));
      const auto mm = expected_mixing(s.chain, s.pi, s.mfp);
      EXPECT_LE(mm.spread, kMatTol);
      EXPECT_GE(mm.eta, (double(m) + 1.0) / 2.0 - kMatTol);
      if (m == 2) {
        EXPECT_GE(mm.tau, 0.5 - kMatTol);
      }
    }
  }
}

TEST(ExpectedMixing, DetectsInconsistentPassageTimes) {
  auto s = solve({{0.8, 0.2}, {0.3, 0.7}});
  s.mfp.mfp(0, 1) += 1e-3;
  EXPECT_THROW(expected_mixing(s.chain, s.pi, s.mfp), Error);
}

TEST(Moments, MatchTauAndEta) {
  std::mt19937_64 rng(97);
  for (std::size_t m = 2; m <= 5; ++m) {
    const auto s = solve(oracle::random_chain(m, rng, 0.3, true));
    const auto mm = expected_mixing(s.chain, s.pi, s.mfp);
    Truncation t = Truncation::adaptive();
    t.tail_tol = 1e-13;
    for (std::size_t i = 0; i < m; ++i) {
      const auto f = mixing_hit_dist(s.chain, s.pi, i, t);
      const auto g = mixing_pass_dist(s.chain, s.pi, i, t);
      EXPECT_NEAR(truncated_mean(f).mean_lower, mm.tau, 1e-6);
      EXPECT_NEAR(truncated_mean(g).mean_lower, mm.eta, 1e-6);
    }
  }
}

TEST(Shift, HoldsForSymmetricFixturesOnly) {
  for (double eps : {0.2, 0.5, 0.8}) {
    const auto c3 = solve({{0, eps, 1 - eps}, {1 - eps, 0, eps}, {eps, 1 - eps, 0}});
    const auto c5 = solve({{1 - eps, eps, 0}, {0, 1 - eps, eps}, {eps, 0, 1 - eps}});
    for (const auto* s : {&c3, &c5}) {
      const auto f = mixing_hit_dist(s->chain, s->pi, 0, Truncation::fixed(101));
      const auto g = mixing_pass_dist(s->chain, s->pi, 0, Truncation::fixed(101));
      EXPECT_LE(shift_gap(f, g), kProbTol);
    }
  }
  const auto generic = solve({{0.1, 0.6, 0.3}, {0.5, 0.2, 0.3}, {0.3, 0.3, 0.4}});
  const auto f = mixing_hit_dist(generic.chain, generic.pi, 0, Truncation::fixed(30));
  const auto g = mixing_pass_dist(generic.chain, generic.pi, 0, Truncation::fixed(30));
  EXPECT_GT(shift_gap(f, g), 1e-3);
}

TEST(Report, DiagnosticsAreSmall) {
  std::mt19937_64 rng(101);
  const auto chain = oracle::random_transition(4, rng, 0.3, true);
  Truncation t = Truncation::adaptive();
  t.tail_tol = 1e-13;
  const auto rep = mixing_report(chain, t);
  ASSERT_EQ(rep.hit_dist.size(), 4u);
  EXPECT_NEAR(rep.eta, rep.tau + 1.0, kMatTol);
  EXPECT_LE(rep.diagnostics.linkage, kProbTol);
  EXPECT_TRUE(rep.diagnostics.moments_resolved);
  EXPECT_LE(rep.diagnostics.tau_moment_gap, 1e-6);
  EXPECT_LE(rep.diagnostics.eta_moment_gap, 1e-6);
  EXPECT_LE(rep.diagnostics.gf_gap, kSeriesTol);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(rep.hit_dist[i].probs[0], rep.pi[i], kProbTol);
    EXPECT_EQ(rep.pass_dist[i].probs[0], 0.0);
  }
}

TEST(Errors, ReducibleChainsRejected) {
  const auto chain = validate_chain({{1, 0}, {0.5, 0.5}});
  StationaryDistribution pi;
  pi.pi = Eigen::Vector2d(1.0, 0.0);
  EXPECT_THROW(mixing_hit_dist(chain, pi, 0), Error);
  EXPECT_THROW(mixing_report(chain), Error);
}
