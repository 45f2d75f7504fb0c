#include "mflqr/riccati.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <stdexcept>
#include <string>

#include "mflqr/errors.hpp"

namespace mflqr {

namespace {

void require_square(const Eigen::MatrixXd& m, int n, const char* name, int t) {
  if (m.rows() != n || m.cols() != n) {
    throw ShapeError(std::string(name) + "[" + std::to_string(t) + "] must be " +
                     std::to_string(n) + "x" + std::to_string(n) + ", got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_symmetric_psd(const Eigen::MatrixXd& m, const char* name, int t,
                           double min_eig_floor) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument(std::string(name) + "[" + std::to_string(t) +
                                "] is not symmetric within 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < min_eig_floor) {
    throw std::invalid_argument(std::string(name) + "[" + std::to_string(t) +
                                "] violates the definiteness requirement "
                                "(min eigenvalue " +
                                std::to_string(min_eig) + ")");
  }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose().eval());
}

// Kronecker product, used only to assemble the dense oracle problem.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::VectorXd replicate(const Eigen::VectorXd& v, int k) {
  Eigen::VectorXd out(v.size() * k);
  for (int i = 0; i < k; ++i) out.segment(i * v.size(), v.size()) = v;
  return out;
}

// One backward step of the affine-LQR recursion shared by both solvers:
// given S_{t+1}, g_{t+1} and the step matrices, produces K_t, f_t, S_t, g_t.
struct RiccatiStep {
  Eigen::MatrixXd K;
  Eigen::VectorXd f;
  Eigen::MatrixXd S;
  Eigen::VectorXd g;
};

RiccatiStep riccati_step(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Qhat, const Eigen::MatrixXd& R,
                         const Eigen::VectorXd& b, const Eigen::VectorXd& mu,
                         const Eigen::MatrixXd& S_next,
                         const Eigen::VectorXd& g_next, int t) {
  // G = R + BᵀS_{t+1}B is symmetric PD (R PD, S PSD); inversions are applied
  // as Cholesky solves rather than explicit inverses.
  const Eigen::MatrixXd G = symmetrized(R + B.transpose() * S_next * B);
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "riccati: R + B'SB failed its Cholesky factorization at t = " +
        std::to_string(t) +
        "; this should be impossible for a valid spec (R positive definite, "
        "S positive semidefinite)");
  }
  RiccatiStep step;
  step.K = -llt.solve(B.transpose() * S_next * A);
  step.f = -llt.solve(B.transpose() * (S_next * mu + 0.5 * g_next));
  // A'S(A + BK) = A'SA − A'SB G⁻¹ B'SA.
  step.S = symmetrized(A.transpose() * S_next * (A + B * step.K) + Qhat);
  step.g = (A + B * step.K).transpose() * (2.0 * S_next * mu + g_next) + b;
  return step;
}

}  // namespace

SystemSpec SystemSpec::constant(int k, int T, const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& B,
                                const Eigen::MatrixXd& C,
                                const Eigen::MatrixXd& P,
                                const Eigen::MatrixXd& Q,
                                const Eigen::MatrixXd& R, double lambda,
                                DiscreteDisturbance disturbance) {
  SystemSpec spec{k,
                  T,
                  std::vector<Eigen::MatrixXd>(T, A),
                  std::vector<Eigen::MatrixXd>(T, B),
                  std::vector<Eigen::MatrixXd>(T, C),
                  std::vector<Eigen::MatrixXd>(T + 1, P),
                  std::vector<Eigen::MatrixXd>(T + 1, Q),
                  std::vector<Eigen::MatrixXd>(T, R),
                  lambda,
                  std::move(disturbance)};
  return spec;
}

void SystemSpec::validate() const {
  if (k < 1) throw std::invalid_argument("spec: k must be >= 1");
  if (T < 1) throw std::invalid_argument("spec: T must be >= 1");
  if (lambda < 0.0) throw std::invalid_argument("spec: lambda must be >= 0");
  const std::size_t horizon = static_cast<std::size_t>(T);
  if (A.size() != horizon || B.size() != horizon || C.size() != horizon ||
      R.size() != horizon) {
    throw ShapeError("spec: A, B, C, R must each have T entries");
  }
  if (P.size() != horizon + 1 || Q.size() != horizon + 1) {
    throw ShapeError("spec: P and Q must each have T+1 entries");
  }
  const int nn = n();
  const int mm = m();
  if (nn < 1 || mm < 1) throw ShapeError("spec: state and input dimensions must be >= 1");
  for (int t = 0; t < T; ++t) {
    require_square(A[t], nn, "A", t);
    require_square(C[t], nn, "C", t);
    if (B[t].rows() != nn || B[t].cols() != mm) {
      throw ShapeError("B[" + std::to_string(t) + "] must be " +
                       std::to_string(nn) + "x" + std::to_string(mm));
    }
    require_square(R[t], mm, "R", t);
    require_symmetric_psd(R[t], "R", t, 1e-12);  // strictly PD
  }
  for (int t = 0; t <= T; ++t) {
    require_square(P[t], nn, "P", t);
    require_square(Q[t], nn, "Q", t);
    require_symmetric_psd(P[t], "P", t, -1e-10);
    require_symmetric_psd(Q[t], "Q", t, -1e-10);
  }
  if (disturbance.dim() != nn) {
    throw ShapeError("spec: disturbance dimension " +
                     std::to_string(disturbance.dim()) +
                     " does not match state dimension " + std::to_string(nn));
  }
}

RiskAugmentation risk_augmentation(const SystemSpec& spec) {
  RiskAugmentation aug;
  aug.Qlam.reserve(spec.T + 1);
  aug.blam.reserve(spec.T + 1);
  const Eigen::MatrixXd& sigma = spec.disturbance.covariance();
  for (int t = 0; t <= spec.T; ++t) {
    const Eigen::MatrixXd& q = spec.Q[t];
    aug.Qlam.push_back(symmetrized(4.0 * spec.lambda * q * sigma * q));
    aug.blam.push_back(4.0 * spec.lambda * q * spec.disturbance.gamma(q));
  }
  return aug;
}

CentralizedModel build_centralized(const SystemSpec& spec) {
  spec.validate();
  const RiskAugmentation aug = risk_augmentation(spec);
  CentralizedModel model;
  model.k = spec.k;
  model.mu = spec.disturbance.mean();
  for (int t = 0; t < spec.T; ++t) {
    model.A.push_back(phi(spec.k, spec.A[t], spec.A[t] + spec.C[t]));
    model.B.push_back(phi(spec.k, spec.B[t], spec.B[t]));
    model.R.push_back(phi(spec.k, spec.R[t], spec.R[t]));
  }
  for (int t = 0; t <= spec.T; ++t) {
    model.Qlam.push_back(phi(spec.k, spec.Q[t] + aug.Qlam[t],
                             spec.P[t] + spec.Q[t] + aug.Qlam[t]));
    model.blam.push_back(aug.blam[t]);
  }
  return model;
}

CentralizedGainSchedule solve_centralized(const SystemSpec& spec) {
  spec.validate();
  const int k = spec.k;
  const int T = spec.T;
  const RiskAugmentation aug = risk_augmentation(spec);

  const Eigen::MatrixXd I_k = Eigen::MatrixXd::Identity(k, k);
  const Eigen::MatrixXd E_k =
      Eigen::MatrixXd::Constant(k, k, 1.0 / static_cast<double>(k));
  const Eigen::VectorXd mu_stacked = replicate(spec.disturbance.mean(), k);

  CentralizedGainSchedule sched;
  sched.Stilde.resize(T + 1);
  sched.gtilde.resize(T + 1);
  sched.Ktilde.resize(T);
  sched.ftilde.resize(T);

  auto Qtilde = [&](int t) {
    return kron(I_k, spec.Q[t] + aug.Qlam[t]) + kron(E_k, spec.P[t]);
  };

  sched.Stilde[T] = symmetrized(Qtilde(T));
  sched.gtilde[T] = replicate(aug.blam[T], k);
  for (int t = T - 1; t >= 0; --t) {
    const Eigen::MatrixXd Atil = kron(I_k, spec.A[t]) + kron(E_k, spec.C[t]);
    const Eigen::MatrixXd Btil = kron(I_k, spec.B[t]);
    const Eigen::MatrixXd Rtil = kron(I_k, spec.R[t]);
    const RiccatiStep step =
        riccati_step(Atil, Btil, Qtilde(t), Rtil, replicate(aug.blam[t], k),
                     mu_stacked, sched.Stilde[t + 1], sched.gtilde[t + 1], t);
    sched.Ktilde[t] = step.K;
    sched.ftilde[t] = step.f;
    sched.Stilde[t] = step.S;
    sched.gtilde[t] = step.g;
  }
  return sched;
}

MeanFieldGainSchedule solve_mean_field(const SystemSpec& spec) {
  spec.validate();
  const int T = spec.T;
  const RiskAugmentation aug = risk_augmentation(spec);
  const Eigen::VectorXd& mu = spec.disturbance.mean();
  const Eigen::VectorXd zero_b = Eigen::VectorXd::Zero(spec.n());

  MeanFieldGainSchedule mf;
  mf.S.resize(T + 1);
  mf.Sbar.resize(T + 1);
  mf.g.resize(T + 1);
  mf.K.resize(T);
  mf.Kbar.resize(T);
  mf.f.resize(T);

  mf.S[T] = symmetrized(spec.Q[T] + aug.Qlam[T]);
  mf.Sbar[T] = symmetrized(spec.P[T] + spec.Q[T] + aug.Qlam[T]);
  mf.g[T] = aug.blam[T];

  for (int t = T - 1; t >= 0; --t) {
    // Deviation-coordinate recursion: S with (A_t, Q_t + Qlam_t). Its affine
    // part is unused (the affine recursion lives on the mean-field side).
    const RiccatiStep dev = riccati_step(
        spec.A[t], spec.B[t], spec.Q[t] + aug.Qlam[t], spec.R[t], zero_b,
        Eigen::VectorXd::Zero(spec.n()), mf.S[t + 1], zero_b, t);
    // Mean-field recursion: S̄ with (Ā_t = A_t + C_t, P_t + Q_t + Qlam_t),
    // carrying the disturbance mean and the affine term g.
    const RiccatiStep bar = riccati_step(
        spec.A[t] + spec.C[t], spec.B[t], spec.P[t] + spec.Q[t] + aug.Qlam[t],
        spec.R[t], aug.blam[t], mu, mf.Sbar[t + 1], mf.g[t + 1], t);
    mf.K[t] = dev.K;
    mf.S[t] = dev.S;
    mf.Kbar[t] = bar.K;
    mf.Sbar[t] = bar.S;
    mf.f[t] = bar.f;
    mf.g[t] = bar.g;
  }
  return mf;
}

Eigen::VectorXd MeanFieldGainSchedule::control(int t, const Eigen::VectorXd& x_i,
                                               const Eigen::VectorXd& xbar) const {
  if (t < 0 || t >= horizon()) {
    throw std::out_of_range("control: t = " + std::to_string(t) +
                            " outside horizon [0, " + std::to_string(horizon()) +
                            ")");
  }
  return K[t] * x_i + (Kbar[t] - K[t]) * xbar + f[t];
}

CentralizedGainSchedule reconstruct_centralized(const MeanFieldGainSchedule& mf,
                                                int k) {
  CentralizedGainSchedule sched;
  const std::size_t steps = mf.K.size();
  sched.Stilde.reserve(steps + 1);
  sched.gtilde.reserve(steps + 1);
  sched.Ktilde.reserve(steps);
  sched.ftilde.reserve(steps);
  for (std::size_t t = 0; t <= steps; ++t) {
    sched.Stilde.push_back(phi(k, mf.S[t], mf.Sbar[t]).to_dense());
    sched.gtilde.push_back(replicate(mf.g[t], k));
  }
  for (std::size_t t = 0; t < steps; ++t) {
    sched.Ktilde.push_back(phi(k, mf.K[t], mf.Kbar[t]).to_dense());
    sched.ftilde.push_back(replicate(mf.f[t], k));
  }
  return sched;
}

}  // namespace mflqr
