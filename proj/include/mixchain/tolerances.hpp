#pragma once

#include <cstddef>

namespace mixchain {

// Row sums of an input matrix must lie within this distance of 1.
inline constexpr double kRowTol = 1e-9;
// Probability vectors and table normalisation.
inline constexpr double kProbTol = 1e-10;
// Dense linear-algebra identities (Z, m_ij, tau/eta).
inline constexpr double kMatTol = 1e-9;
// Polynomial identities and generating-function evaluation.
inline constexpr double kSeriesTol = 1e-10;
// Agreement between the taboo recurrence and the adjugate series.
inline constexpr double kCrossCheckTol = 1e-9;
// Adaptive truncation stops once the tail mass falls below this.
inline constexpr double kTailTol = 1e-9;
inline constexpr std::size_t kDefaultNCap = 10'000;
// Below this root separation the three-state closed forms switch to the
// repeated-root (confluent) expressions.
inline constexpr double kDeltaTol = 1e-8;

}  // namespace mixchain
