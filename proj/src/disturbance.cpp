#include "mflqr/disturbance.hpp"

#include <cmath>
#include <string>

#include "mflqr/errors.hpp"

namespace mflqr {

DiscreteDisturbance::DiscreteDisturbance(std::vector<Eigen::VectorXd> support,
                                         std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.empty()) {
    throw ShapeError("disturbance: support must contain at least one atom");
  }
  if (support_.size() != probs_.size()) {
    throw ShapeError("disturbance: " + std::to_string(support_.size()) +
                     " support atoms but " + std::to_string(probs_.size()) +
                     " probabilities");
  }
  const Eigen::Index n = support_[0].size();
  if (n == 0) {
    throw ShapeError("disturbance: support atoms must be non-empty vectors");
  }
  for (const auto& w : support_) {
    if (w.size() != n) {
      throw ShapeError("disturbance: support atoms have mixed dimensions (" +
                       std::to_string(n) + " vs " + std::to_string(w.size()) +
                       ")");
    }
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument(
          "disturbance: probabilities must be nonnegative, got " +
          std::to_string(p));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "disturbance: probabilities sum to " + std::to_string(total) +
        ", outside the normalization tolerance 1e-12 around 1");
  }
  for (double& p : probs_) p /= total;

  cumulative_.resize(probs_.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < probs_.size(); ++j) {
    acc += probs_[j];
    cumulative_[j] = acc;
  }
  cumulative_.back() = 1.0;

  mean_ = Eigen::VectorXd::Zero(n);
  for (std::size_t j = 0; j < support_.size(); ++j) {
    mean_ += probs_[j] * support_[j];
  }
  covariance_ = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < support_.size(); ++j) {
    const Eigen::VectorXd d = support_[j] - mean_;
    covariance_ += probs_[j] * (d * d.transpose());
  }
  covariance_ = 0.5 * (covariance_ + covariance_.transpose().eval());
}

void DiscreteDisturbance::check_q(const Eigen::MatrixXd& q, const char* op) const {
  if (q.rows() != q.cols() || q.rows() != dim()) {
    throw ShapeError(std::string(op) + ": weighting matrix must be " +
                     std::to_string(dim()) + "x" + std::to_string(dim()) +
                     ", got " + std::to_string(q.rows()) + "x" +
                     std::to_string(q.cols()));
  }
}

Eigen::VectorXd DiscreteDisturbance::gamma(const Eigen::MatrixXd& q) const {
  check_q(q, "gamma");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
  for (std::size_t j = 0; j < support_.size(); ++j) {
    const Eigen::VectorXd d = support_[j] - mean_;
    g += probs_[j] * (d.dot(q * d)) * d;
  }
  return g;
}

double DiscreteDisturbance::delta(const Eigen::MatrixXd& q) const {
  check_q(q, "delta");
  const double trace_sq = (covariance_ * q).trace();
  double result = 0.0;
  for (std::size_t j = 0; j < support_.size(); ++j) {
    const Eigen::VectorXd d = support_[j] - mean_;
    const double dev = d.dot(q * d) - trace_sq;
    result += probs_[j] * dev * dev;
  }
  return result;
}

MomentSet DiscreteDisturbance::moments(const Eigen::MatrixXd& q) const {
  return MomentSet{mean_, covariance_, gamma(q), delta(q)};
}

const Eigen::VectorXd& DiscreteDisturbance::sample(RngState& rng) const {
  const double u = rng.next_double();
  // Inverse CDF; cumulative_ ends at exactly 1.0 and u < 1, so the walk
  // always terminates inside the table.
  std::size_t j = 0;
  while (j + 1 < cumulative_.size() && u >= cumulative_[j]) ++j;
  return support_[j];
}

}  // namespace mflqr
