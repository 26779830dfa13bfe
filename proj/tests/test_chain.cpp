#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mixchain/chain.hpp"
#include "mixchain/tolerances.hpp"
#include "mixchain/error.hpp"
#include "support/oracles.hpp"

using namespace mixchain;

namespace {

const std::vector<std::vector<double>> kCycle3 = {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Validate, AcceptsCycleAndIdentity) {
  EXPECT_EQ(validate_chain(kCycle3).size(), 3u);
  EXPECT_EQ(validate_chain({{1, 0}, {0, 1}}).size(), 2u);
}

TEST(Validate, RejectsMalformedInput) {
  EXPECT_EQ(code_of([] { validate_chain({{0.5, 0.6}, {0.5, 0.5}}); }), ErrorCode::RowSumOutOfTolerance);
  EXPECT_EQ(code_of([] { validate_chain({{0.5, 0.5}, {1.0}}); }), ErrorCode::NonSquare);
  EXPECT_EQ(code_of([] { validate_chain({{1.0}}); }), ErrorCode::InvalidDimension);
  EXPECT_EQ(code_of([] { validate_chain({{1.2, -0.2}, {0.5, 0.5}}); }), ErrorCode::NegativeEntry);
  EXPECT_EQ(code_of([] { validate_chain({{NAN, 1.0}, {0.5, 0.5}}); }), ErrorCode::NegativeEntry);
}

TEST(Validate, ReportsLocation) {
  try {
    validate_chain({{0.5, 0.5, 0}, {0.2, 0.9, -0.1}, {0, 0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("(2,3)"), std::string::npos) << e.what();
  }
}

TEST(Validate, RenormalisesWithinTolerance) {
  const auto c = validate_chain({{0.5, 0.5 + 4e-10}, {0.3, 0.7}});
  ASSERT_EQ(c.notes().size(), 1u);
  EXPECT_DOUBLE_EQ(c(0, 0) + c(0, 1), 1.0);
}

TEST(Classify, PeriodsAndReducibility) {
  const auto s = classify(validate_chain(kCycle3));
  EXPECT_TRUE(s.irreducible);
  EXPECT_EQ(s.period, 3u);
  EXPECT_FALSE(s.regular);

  const auto flip = classify(validate_chain({{0, 1}, {1, 0}}));
  EXPECT_TRUE(flip.irreducible);
  EXPECT_EQ(flip.period, 2u);

  EXPECT_FALSE(classify(validate_chain({{1, 0}, {0, 1}})).irreducible);
  EXPECT_FALSE(classify(validate_chain({{0.5, 0.5}, {0, 1}})).irreducible);

  const auto reg = classify(validate_chain({{0.8, 0.2}, {0.3, 0.7}}));
  EXPECT_TRUE(reg.regular);
  EXPECT_EQ(reg.period, 1u);
}

TEST(Classify, PeriodOfMixedCycles) {
  // 1 -> 2 -> 1 and 1 -> 3 -> 4 -> 5 -> 1: cycle lengths 2 and 4.
  const auto s = classify(validate_chain({{0, 0.5, 0.5, 0, 0},
                                          {1, 0, 0, 0, 0},
                                          {0, 0, 0, 1, 0},
                                          {0, 0, 0, 0, 1},
                                          {1, 0, 0, 0, 0}}));
  EXPECT_TRUE(s.irreducible);
  EXPECT_EQ(s.period, 2u);
  // Lengths 2 and 3.
  const auto t = classify(validate_chain({{0, 0.5, 0.5}, {1, 0, 0}, {0, 1, 0}}));
  EXPECT_TRUE(t.irreducible);
  EXPECT_EQ(t.period, 1u);
  // 3 and 4 never lead back to 1.
  EXPECT_FALSE(classify(validate_chain({{0, 0.5, 0, 0.5}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}})).irreducible);
}

TEST(Classify, InvariantUnderRelabelling) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const auto c = oracle::random_transition(5, rng, 0.6);
    std::vector<std::size_t> perm{3, 0, 4, 1, 2};
    const auto a = classify(c);
    const auto b = classify(c.relabeled(perm));
    EXPECT_EQ(a.irreducible, b.irreducible);
    EXPECT_EQ(a.period, b.period);
  }
}

TEST(Stationary, PrintedExamples) {
  const auto two = stationary(validate_chain({{0.8, 0.2}, {0.3, 0.7}}));
  EXPECT_NEAR(two[0], 0.6, 1e-12);
  EXPECT_NEAR(two[1], 0.4, 1e-12);

  const auto period2 = stationary(validate_chain({{0, 1, 0}, {0.7, 0, 0.3}, {0, 1, 0}}));
  EXPECT_NEAR(period2[0], 0.35, 1e-12);
  EXPECT_NEAR(period2[1], 0.5, 1e-12);
  EXPECT_NEAR(period2[2], 0.15, 1e-12);

  const auto indep = stationary(validate_chain({{0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}}));
  EXPECT_NEAR(indep[0], 0.2, 1e-12);
  EXPECT_NEAR(indep[1], 0.3, 1e-12);
  EXPECT_NEAR(indep[2], 0.5, 1e-12);
}

TEST(Stationary, RejectsReducible) {
  EXPECT_EQ(code_of([] { stationary(validate_chain({{1, 0}, {0, 1}})); }), ErrorCode::NotIrreducible);
}

TEST(Stationary, MatchesEigenvectorOracle) {
  std::mt19937_64 rng(11);
  for (std::size_t m = 2; m <= 6; ++m) {
    for (int rep = 0; rep < 40; ++rep) {
      const auto rows = oracle::random_chain(m, rng);
      const auto pi = stationary(validate_chain(rows));
      const auto ref = oracle::eigen_stationary(rows);
      EXPECT_LE(pi.residual, kProbTol);
      for (std::size_t j = 0; j < m; ++j) EXPECT_NEAR(pi[j], ref[j], 1e-10);
    }
  }
}

TEST(Fundamental, IdentityWhenRowsEqualPi) {
  const auto c = validate_chain({{0.5, 0.5}, {0.5, 0.5}});
  const auto z = fundamental_matrix(c, stationary(c));
  EXPECT_LE((z.z - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Fundamental, KemenyExamples) {
  const auto cyc = validate_chain(kCycle3);
  EXPECT_NEAR(kemeny_constant(fundamental_matrix(cyc, stationary(cyc))), 2.0, 1e-12);
  const auto two = validate_chain({{0.8, 0.2}, {0.3, 0.7}});
  EXPECT_NEAR(kemeny_constant(fundamental_matrix(two, stationary(two))), 3.0, 1e-12);
  for (std::size_t m = 2; m <= 6; ++m) {
    std::vector<std::vector<double>> rows(m, std::vector<double>(m));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i) rows[i][j] = double(j + 1) / double(m * (m + 1) / 2);
    const auto c = validate_chain(rows);
    EXPECT_NEAR(kemeny_constant(fundamental_matrix(c, stationary(c))), double(m), 1e-10);
  }
}

TEST(Fundamental, RandomChainsAgainstSpectrum) {
  std::mt19937_64 rng(13);
  for (std::size_t m = 2; m <= 6; ++m) {
    for (int rep = 0; rep < 40; ++rep) {
      const auto rows = oracle::random_chain(m, rng);
      const auto c = validate_chain(rows);
      const auto z = fundamental_matrix(c, stationary(c));
      EXPECT_LE(z.residual, 1e-12);
      const double eta = kemeny_constant(z);
      EXPECT_NEAR(eta, oracle::spectral_kemeny(rows), 1e-8 * std::max(1.0, eta));
      EXPECT_GE(eta, (double(m) + 1.0) / 2.0 - kMatTol);
    }
  }
}

TEST(MeanPassage, CyclicDriftSymmetric) {
  const double eps = 0.25;
  const auto c = validate_chain({{1 - eps, eps, 0}, {0, 1 - eps, eps}, {eps, 0, 1 - eps}});
  const auto pi = stationary(c);
  const auto m = mean_first_passage(c, pi, fundamental_matrix(c, pi));
  EXPECT_NEAR(m(0, 0), 3.0, 1e-10);
  EXPECT_NEAR(m(0, 1), 1.0 / eps, 1e-10);
  EXPECT_NEAR(m(0, 2), 2.0 / eps, 1e-10);
}

TEST(MeanPassage, TwoStateAndDirectSystem) {
  const auto two = validate_chain({{0.8, 0.2}, {0.3, 0.7}});
  const auto pi2 = stationary(two);
  EXPECT_NEAR(mean_first_passage(two, pi2, fundamental_matrix(two, pi2))(0, 1), 5.0, 1e-12);

  std::mt19937_64 rng(17);
  for (std::size_t m = 2; m <= 6; ++m) {
    for (int rep = 0; rep < 30; ++rep) {
      const auto rows = oracle::random_chain(m, rng);
      const auto c = validate_chain(rows);
      const auto pi = stationary(c);
      const auto mfp = mean_first_passage(c, pi, fundamental_matrix(c, pi));
      const auto ref = oracle::direct_mfp(rows);
      for (std::size_t i = 0; i < m; ++i) {
        EXPECT_NEAR(mfp(i, i) * pi[i], 1.0, kMatTol);
        for (std::size_t j = 0; j < m; ++j) {
          EXPECT_GE(mfp(i, j), 1.0 - kMatTol);
          EXPECT_NEAR(mfp(i, j), ref(Eigen::Index(i), Eigen::Index(j)),
                      1e-9 * std::max(1.0, std::abs(ref(Eigen::Index(i), Eigen::Index(j)))));
        }
      }
    }
  }
}
