#include "mixchain/distribution.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "mixchain/error.hpp"

namespace mixchain {

double DistributionTable::total() const noexcept {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

DistributionTable make_table(std::vector<double> probs, std::size_t support_offset) {
  for (std::size_t n = 0; n < probs.size(); ++n) {
    const double p = probs[n];
    if (!(p >= -kProbTol && p <= 1.0 + kProbTol)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "probability %.17g at n = %zu is outside [0, 1]", p, n);
      throw Error(ErrorCode::InvariantViolation, buf);
    }
    probs[n] = std::clamp(p, 0.0, 1.0);
  }
  DistributionTable t{std::move(probs), 0.0, support_offset};
  t.tail_mass = 1.0 - t.total();
  return t;
}

TruncatedMean truncated_mean(const DistributionTable& dist, double tail_tol) {
  TruncatedMean out;
  for (std::size_t n = 0; n < dist.probs.size(); ++n) out.mean_lower += double(n) * dist.probs[n];
  out.resolved = dist.tail_mass <= tail_tol;
  out.tail_weight = std::max(0.0, dist.tail_mass) * double(dist.n_max() + 1);
  return out;
}

}  // namespace mixchain
