#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mixchain {

/// A validated m x m row-stochastic matrix (m >= 2). Instances are only
/// produced by validate_chain(), so every row is nonnegative and sums to 1.
class TransitionMatrix {
 public:
  std::size_t size() const noexcept { return static_cast<std::size_t>(p_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return p_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const noexcept { return p_; }

  /// Diagnostics emitted during validation (e.g. rows that were renormalised).
  const std::vector<std::string>& notes() const noexcept { return notes_; }

  /// Same chain with states relabelled: new state k is old state perm[k].
  TransitionMatrix relabeled(const std::vector<std::size_t>& perm) const;

 private:
  friend TransitionMatrix validate_chain(const std::vector<std::vector<double>>& raw);
  TransitionMatrix(Eigen::MatrixXd p, std::vector<std::string> notes)
      : p_(std::move(p)), notes_(std::move(notes)) {}

  Eigen::MatrixXd p_;
  std::vector<std::string> notes_;
};

struct ChainStructure {
  bool irreducible = false;
  // gcd of cycle lengths through state 1; for reducible chains it is taken
  // over the part of the graph reachable from state 1.
  std::size_t period = 1;
  bool regular = false;
};

struct StationaryDistribution {
  Eigen::VectorXd pi;
  double residual = 0.0;  // ||pi^T P - pi^T||_inf

  double operator[](std::size_t j) const { return pi(static_cast<Eigen::Index>(j)); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(pi.size()); }
};

/// Z = (I - P + e pi^T)^{-1}.
struct FundamentalMatrix {
  Eigen::MatrixXd z;
  double residual = 0.0;  // ||Z (I - P + Pi) - I||_inf
};

/// Mean first passage times m_ij. `cross_check` is the largest entrywise gap
/// between the Z-based formula and the direct linear-system solution.
struct MeanPassageMatrix {
  Eigen::MatrixXd mfp;
  double cross_check = 0.0;

  double operator()(std::size_t i, std::size_t j) const {
    return mfp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

TransitionMatrix validate_chain(const std::vector<std::vector<double>>& raw);
TransitionMatrix validate_matrix(const Eigen::MatrixXd& raw);

ChainStructure classify(const TransitionMatrix& chain);

/// Throws NotIrreducible unless classify(chain).irreducible.
void require_irreducible(const TransitionMatrix& chain);

StationaryDistribution stationary(const TransitionMatrix& chain);

FundamentalMatrix fundamental_matrix(const TransitionMatrix& chain,
                                     const StationaryDistribution& pi);

double kemeny_constant(const FundamentalMatrix& z);

MeanPassageMatrix mean_first_passage(const TransitionMatrix& chain,
                                     const StationaryDistribution& pi,
                                     const FundamentalMatrix& z);

}  // namespace mixchain
