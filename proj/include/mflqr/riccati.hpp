#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mflqr/disturbance.hpp"
#include "mflqr/pbd.hpp"

namespace mflqr {

/// Time-varying problem data for k identical subsystems of state dimension n
/// and input dimension m over horizon T:
///
///   x_{t+1}^i = A_t x_t^i + B_t u_t^i + C_t x̄_t + w_{t+1}^i
///
/// with per-step state costs weighted by Q_t (own state) and P_t (mean-field),
/// control cost R_t, risk parameter lambda, and i.i.d. disturbances.
/// A, B, C, R have T entries (t = 0..T−1); P, Q have T+1 (t = 0..T).
struct SystemSpec {
  int k = 1;
  int T = 1;
  std::vector<Eigen::MatrixXd> A;
  std::vector<Eigen::MatrixXd> B;
  std::vector<Eigen::MatrixXd> C;
  std::vector<Eigen::MatrixXd> P;
  std::vector<Eigen::MatrixXd> Q;
  std::vector<Eigen::MatrixXd> R;
  double lambda = 0.0;
  DiscreteDisturbance disturbance;

  /// Constant-coefficient convenience constructor; replicates each matrix
  /// across the horizon.
  static SystemSpec constant(int k, int T, const Eigen::MatrixXd& A,
                             const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
                             const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                             const Eigen::MatrixXd& R, double lambda,
                             DiscreteDisturbance disturbance);

  int n() const { return static_cast<int>(A.at(0).rows()); }
  int m() const { return static_cast<int>(B.at(0).cols()); }

  /// Checks list lengths, dimensional consistency across t, symmetry and
  /// positive (semi)definiteness of the cost matrices, lambda ≥ 0 and the
  /// disturbance dimension. Throws ShapeError or std::invalid_argument.
  void validate() const;
};

/// Per-step risk augmentation induced by the predictive-variance cost:
/// Qlam_t = 4λ Q_t Σ Q_t and blam_t = 4λ Q_t γ_t for t = 0..T.
/// Both vanish identically at λ = 0.
struct RiskAugmentation {
  std::vector<Eigen::MatrixXd> Qlam;
  std::vector<Eigen::VectorXd> blam;
};

RiskAugmentation risk_augmentation(const SystemSpec& spec);

/// The factored centralized model: Ã_t = φ_k(A_t, A_t+C_t), B̃_t = φ_k(B_t, B_t),
/// Q̃_t^λ = φ_k(Q_t+Qlam_t, P_t+Q_t+Qlam_t), R̃_t = φ_k(R_t, R_t), plus the
/// per-block affine terms blam_t (stacked form 1_k ⊗ blam_t) and the
/// disturbance mean.
struct CentralizedModel {
  std::vector<PseudoBlockMatrix> A;
  std::vector<PseudoBlockMatrix> B;
  std::vector<PseudoBlockMatrix> Qlam;
  std::vector<PseudoBlockMatrix> R;
  std::vector<Eigen::VectorXd> blam;
  Eigen::VectorXd mu;
  int k = 1;
};

CentralizedModel build_centralized(const SystemSpec& spec);

/// Backward-recursion output in per-subsystem (mean-field coupled) form.
/// S, Sbar, g have T+1 entries; K, Kbar, f have T. The optimal control is
///   u_t^i = K_t x_t^i + (K̄_t − K_t) x̄_t + f_t,
/// which depends only on the subsystem's own state and the mean-field.
struct MeanFieldGainSchedule {
  std::vector<Eigen::MatrixXd> S;
  std::vector<Eigen::MatrixXd> Sbar;
  std::vector<Eigen::VectorXd> g;
  std::vector<Eigen::MatrixXd> K;
  std::vector<Eigen::MatrixXd> Kbar;
  std::vector<Eigen::VectorXd> f;

  int horizon() const { return static_cast<int>(K.size()); }

  /// u = K_t x_i + (K̄_t − K_t) x̄ + f_t. Throws std::out_of_range unless
  /// 0 ≤ t < T.
  Eigen::VectorXd control(int t, const Eigen::VectorXd& x_i,
                          const Eigen::VectorXd& xbar) const;
};

/// Dense centralized schedule over the stacked (nk)-dimensional system.
/// Stilde, gtilde have T+1 entries; Ktilde, ftilde have T.
struct CentralizedGainSchedule {
  std::vector<Eigen::MatrixXd> Stilde;
  std::vector<Eigen::VectorXd> gtilde;
  std::vector<Eigen::MatrixXd> Ktilde;
  std::vector<Eigen::VectorXd> ftilde;
};

/// Dense backward recursion over the stacked system. The stacked matrices are
/// assembled here by direct Kronecker expansion, deliberately bypassing the
/// pseudo-block algebra, so this solver is an independent oracle for
/// solve_mean_field + reconstruct_centralized. Cost grows like (nk)³ per step;
/// intended for small nk.
CentralizedGainSchedule solve_centralized(const SystemSpec& spec);

/// Two n-dimensional backward recursions (S with A_t and Q_t + Qlam_t; S̄ with
/// Ā_t = A_t + C_t and P_t + Q_t + Qlam_t) plus the affine recursion for g.
/// Cost is independent of k.
MeanFieldGainSchedule solve_mean_field(const SystemSpec& spec);

/// Lifts a mean-field schedule to the centralized one it factors:
/// S̃_t = φ_k(S_t, S̄_t) densified, K̃_t = φ_k(K_t, K̄_t) densified,
/// g̃_t = 1_k ⊗ g_t, f̃_t = 1_k ⊗ f_t.
CentralizedGainSchedule reconstruct_centralized(const MeanFieldGainSchedule& mf,
                                                int k);

}  // namespace mflqr
