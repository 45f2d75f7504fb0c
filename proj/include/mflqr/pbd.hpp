#pragma once

#include <Eigen/Dense>

namespace mflqr {

/// A matrix of the form I_k ⊗ M + E_k ⊗ (M̄ − M), where E_k = (1/k)·1 1ᵀ is
/// the k×k averaging matrix. Such "pseudo-block diagonal" matrices are closed
/// under transpose, addition, multiplication and inversion, with every
/// operation acting componentwise on the (M, M̄) pair. The factored form is
/// what production code uses; the dense (rk)×(ck) expansion exists for
/// verification and small-instance checks only.
///
/// Values are immutable after construction and safe to share across threads.
class PseudoBlockMatrix {
 public:
  /// Stores (k, M, M̄) without densification.
  /// Throws ShapeError unless M and M̄ have identical dimensions and k ≥ 1.
  PseudoBlockMatrix(int k, Eigen::MatrixXd inner, Eigen::MatrixXd mean);

  int replication() const { return k_; }
  /// Block dimensions (the dense form is (rows*k) x (cols*k)).
  Eigen::Index rows() const { return inner_.rows(); }
  Eigen::Index cols() const { return inner_.cols(); }

  /// Diagonal-perturbation block M.
  const Eigen::MatrixXd& inner() const { return inner_; }
  /// Mean block M̄ (the action on replicated vectors).
  const Eigen::MatrixXd& mean() const { return mean_; }

  /// Dense expansion I_k ⊗ M + E_k ⊗ (M̄ − M). Quadratic in k; test oracle
  /// and small-instance use only.
  Eigen::MatrixXd to_dense() const;

  /// φ_k(Mᵀ, M̄ᵀ).
  PseudoBlockMatrix transpose() const;

  /// φ_k(cM, cM̄).
  PseudoBlockMatrix scaled(double c) const;

  /// φ_k(M + N, M̄ + N̄). Throws ShapeError on k or dimension mismatch.
  PseudoBlockMatrix add(const PseudoBlockMatrix& other) const;

  /// φ_k(M N, M̄ N̄); the dense form of the result equals the product of the
  /// dense forms. Throws ShapeError on k or inner-dimension mismatch.
  PseudoBlockMatrix matmul(const PseudoBlockMatrix& other) const;

  /// φ_k(M⁻¹, M̄⁻¹). Each factor is checked by a singular-value condition
  /// estimate; a factor with condition number above 1e12 (or non-finite
  /// entries) raises SingularityError naming the factor ("inner" or "mean").
  PseudoBlockMatrix inverse() const;

  /// Action on a replicated vector: φ_k(M, M̄)(1_k ⊗ v) = 1_k ⊗ M̄ v.
  /// Returns the common block M̄ v.
  Eigen::VectorXd apply_replicated(const Eigen::VectorXd& v) const;

  /// Action on a stacked vector of k blocks: block i of the result is
  /// M x^i + (M̄ − M) x̄ with x̄ the block mean. Equals to_dense() * xs but
  /// costs O(k) block multiplies.
  Eigen::VectorXd apply_stacked(const Eigen::VectorXd& xs) const;

 private:
  int k_;
  Eigen::MatrixXd inner_;
  Eigen::MatrixXd mean_;
};

/// φ_k(M, M̄) ident to the two-argument constructor; reads closer to the
/// algebra at call sites.
PseudoBlockMatrix phi(int k, const Eigen::MatrixXd& inner,
                      const Eigen::MatrixXd& mean);

inline PseudoBlockMatrix operator+(const PseudoBlockMatrix& a,
                                   const PseudoBlockMatrix& b) {
  return a.add(b);
}
inline PseudoBlockMatrix operator*(const PseudoBlockMatrix& a,
                                   const PseudoBlockMatrix& b) {
  return a.matmul(b);
}
inline PseudoBlockMatrix operator*(double c, const PseudoBlockMatrix& a) {
  return a.scaled(c);
}

/// Arithmetic mean of the k equally sized blocks of a stacked vector.
/// Throws ShapeError if k < 1 or the length is not divisible by k.
Eigen::VectorXd mean_field(const Eigen::VectorXd& stacked, int k);

}  // namespace mflqr
