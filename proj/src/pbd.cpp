#include "mflqr/pbd.hpp"

#include <Eigen/SVD>
#include <string>

#include "mflqr/errors.hpp"

namespace mflqr {

namespace {

std::string shape_str(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_k(const PseudoBlockMatrix& a, const PseudoBlockMatrix& b,
                    const char* op) {
  if (a.replication() != b.replication()) {
    throw ShapeError(std::string(op) + ": replication counts differ (" +
                     std::to_string(a.replication()) + " vs " +
                     std::to_string(b.replication()) + ")");
  }
}

// Inverts one factor after a conditioning check. Condition numbers above
// 1e12 are treated as singular; the paper-level statement "holds if the
// factors are invertible" gives no numerical criterion.
Eigen::MatrixXd invert_factor(const Eigen::MatrixXd& f, const char* which) {
  if (f.rows() != f.cols()) {
    throw ShapeError(std::string("inverse: ") + which + " block is not square (" +
                     shape_str(f) + ")");
  }
  if (!f.allFinite()) {
    throw SingularityError(which, std::string("inverse: ") + which +
                                      " block has non-finite entries");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin <= 0.0 || smax / smin > 1e12) {
    throw SingularityError(which, std::string("inverse: ") + which +
                                      " block is singular or too ill "
                                      "conditioned (condition estimate " +
                                      (smin <= 0.0 ? std::string("inf")
                                                   : std::to_string(smax / smin)) +
                                      ")");
  }
  return f.partialPivLu().inverse();
}

}  // namespace

PseudoBlockMatrix::PseudoBlockMatrix(int k, Eigen::MatrixXd inner,
                                     Eigen::MatrixXd mean)
    : k_(k), inner_(std::move(inner)), mean_(std::move(mean)) {
  if (k_ < 1) {
    throw ShapeError("phi: replication count must be >= 1, got " +
                     std::to_string(k_));
  }
  if (inner_.rows() != mean_.rows() || inner_.cols() != mean_.cols()) {
    throw ShapeError("phi: inner and mean blocks must have equal dimensions (" +
                     shape_str(inner_) + " vs " + shape_str(mean_) + ")");
  }
  if (inner_.size() == 0) {
    throw ShapeError("phi: blocks must be non-empty");
  }
}

PseudoBlockMatrix phi(int k, const Eigen::MatrixXd& inner,
                      const Eigen::MatrixXd& mean) {
  return PseudoBlockMatrix(k, inner, mean);
}

Eigen::MatrixXd PseudoBlockMatrix::to_dense() const {
  const Eigen::Index r = rows();
  const Eigen::Index c = cols();
  // E_k ⊗ (M̄ − M) contributes (M̄ − M)/k to every block; I_k ⊗ M adds M on
  // the diagonal. When M == M̄ the off-diagonal blocks are exactly zero.
  const Eigen::MatrixXd off = (mean_ - inner_) / static_cast<double>(k_);
  Eigen::MatrixXd dense(r * k_, c * k_);
  for (int bi = 0; bi < k_; ++bi) {
    for (int bj = 0; bj < k_; ++bj) {
      dense.block(bi * r, bj * c, r, c) = (bi == bj) ? (inner_ + off) : off;
    }
  }
  return dense;
}

PseudoBlockMatrix PseudoBlockMatrix::transpose() const {
  return PseudoBlockMatrix(k_, inner_.transpose(), mean_.transpose());
}

PseudoBlockMatrix PseudoBlockMatrix::scaled(double c) const {
  return PseudoBlockMatrix(k_, c * inner_, c * mean_);
}

PseudoBlockMatrix PseudoBlockMatrix::add(const PseudoBlockMatrix& other) const {
  require_same_k(*this, other, "add");
  if (rows() != other.rows() || cols() != other.cols()) {
    throw ShapeError("add: block dimensions differ (" + shape_str(inner_) +
                     " vs " + shape_str(other.inner_) + ")");
  }
  return PseudoBlockMatrix(k_, inner_ + other.inner_, mean_ + other.mean_);
}

PseudoBlockMatrix PseudoBlockMatrix::matmul(const PseudoBlockMatrix& other) const {
  require_same_k(*this, other, "matmul");
  if (cols() != other.rows()) {
    throw ShapeError("matmul: inner dimensions do not match (" +
                     shape_str(inner_) + " * " + shape_str(other.inner_) + ")");
  }
  return PseudoBlockMatrix(k_, inner_ * other.inner_, mean_ * other.mean_);
}

PseudoBlockMatrix PseudoBlockMatrix::inverse() const {
  return PseudoBlockMatrix(k_, invert_factor(inner_, "inner"),
                           invert_factor(mean_, "mean"));
}

Eigen::VectorXd PseudoBlockMatrix::apply_replicated(const Eigen::VectorXd& v) const {
  if (v.size() != cols()) {
    throw ShapeError("apply_replicated: vector length " +
                     std::to_string(v.size()) + " does not match block width " +
                     std::to_string(cols()));
  }
  return mean_ * v;
}

Eigen::VectorXd PseudoBlockMatrix::apply_stacked(const Eigen::VectorXd& xs) const {
  const Eigen::Index c = cols();
  if (xs.size() != c * k_) {
    throw ShapeError("apply_stacked: expected " + std::to_string(k_) +
                     " blocks of size " + std::to_string(c) + " (total " +
                     std::to_string(c * k_) + "), got length " +
                     std::to_string(xs.size()));
  }
  const Eigen::VectorXd xbar = mean_field(xs, k_);
  const Eigen::VectorXd common = (mean_ - inner_) * xbar;
  Eigen::VectorXd out(rows() * k_);
  for (int i = 0; i < k_; ++i) {
    out.segment(i * rows(), rows()) = inner_ * xs.segment(i * c, c) + common;
  }
  return out;
}

Eigen::VectorXd mean_field(const Eigen::VectorXd& stacked, int k) {
  if (k < 1) {
    throw ShapeError("mean_field: need at least one block, got k = " +
                     std::to_string(k));
  }
  if (stacked.size() == 0 || stacked.size() % k != 0) {
    throw ShapeError("mean_field: length " + std::to_string(stacked.size()) +
                     " is not divisible into " + std::to_string(k) +
                     " non-empty blocks");
  }
  const Eigen::Index n = stacked.size() / k;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < k; ++i) {
    sum += stacked.segment(i * n, n);
  }
  return sum / static_cast<double>(k);
}

}  // namespace mflqr
