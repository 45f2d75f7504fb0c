#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mflqr/rng.hpp"

namespace mflqr {

/// Moments of a centered disturbance d = w − μ against a weighting matrix Q:
/// the skew vector gamma = E(d dᵀQ d) and the scalar
/// delta = E((dᵀQ d − tr(ΣQ))²), which is a variance and hence nonnegative.
struct MomentSet {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::VectorXd gamma;
  double delta = 0.0;
};

/// Finite discrete distribution on R^n with exact moment queries. Finite
/// support makes every moment finite and exactly computable, which is all the
/// risk-aware machinery needs; continuous families are out of scope.
///
/// Immutable after construction. Sampling uses an explicit caller-owned
/// RngState; there is no hidden global state.
class DiscreteDisturbance {
 public:
  /// Probabilities must be nonnegative and sum to 1 within 1e-12 (they are
  /// then renormalized exactly); support vectors must share one dimension.
  /// Violations throw ShapeError (dimensions) or std::invalid_argument
  /// (probabilities).
  DiscreteDisturbance(std::vector<Eigen::VectorXd> support,
                      std::vector<double> probs);

  int dim() const { return static_cast<int>(support_[0].size()); }
  int atoms() const { return static_cast<int>(support_.size()); }
  const std::vector<Eigen::VectorXd>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }

  /// μ = Σ_j p_j w_j (computed once at construction).
  const Eigen::VectorXd& mean() const { return mean_; }

  /// Σ = Σ_j p_j (w_j−μ)(w_j−μ)ᵀ, symmetric PSD (computed once).
  const Eigen::MatrixXd& covariance() const { return covariance_; }

  /// Skew vector Σ_j p_j d_j (d_jᵀ Q d_j), d_j = w_j − μ.
  /// Q must be n×n; mismatches throw ShapeError.
  Eigen::VectorXd gamma(const Eigen::MatrixXd& q) const;

  /// Σ_j p_j (d_jᵀQ d_j − tr(ΣQ))² ≥ 0.
  double delta(const Eigen::MatrixXd& q) const;

  /// All four moment quantities for one weighting matrix.
  MomentSet moments(const Eigen::MatrixXd& q) const;

  /// Draws one atom by inverse CDF over the (renormalized) probabilities.
  /// The same initial RngState reproduces the same sequence bitwise.
  const Eigen::VectorXd& sample(RngState& rng) const;

 private:
  void check_q(const Eigen::MatrixXd& q, const char* op) const;

  std::vector<Eigen::VectorXd> support_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
};

}  // namespace mflqr
