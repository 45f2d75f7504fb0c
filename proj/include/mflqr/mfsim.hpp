#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mflqr/riccati.hpp"
#include "mflqr/rng.hpp"

namespace mflqr {

/// Disturbance realizations for one run: T entries of shape n×k, where
/// noise[t].col(i) is the draw entering the transition from t to t+1 for
/// subsystem i. draw_noise fills the tensor in a fixed order (t ascending,
/// subsystems left to right), which is the documented sampling contract.
using NoiseTensor = std::vector<Eigen::MatrixXd>;

NoiseTensor draw_noise(const SystemSpec& spec, RngState& rng);

/// One closed-loop realization of all k subsystems. states[t] is n×k,
/// controls[t] is m×k, pred_err[t] holds the realized state-energy prediction
/// errors of the k subsystems. Per-step costs follow the objective split:
/// cost_state (T+1 entries), cost_risk (T+1), cost_control (T);
/// total_cost is their sum.
struct Trajectory {
  std::vector<Eigen::MatrixXd> states;
  std::vector<Eigen::MatrixXd> controls;
  std::vector<Eigen::VectorXd> pred_err;
  std::vector<double> cost_state;
  std::vector<double> cost_control;
  std::vector<double> cost_risk;
  double total_cost = 0.0;
};

/// Simulates x_{t+1}^i = A_t x_t^i + B_t u_t^i + C_t x̄_t + w_{t+1}^i under
/// the mean-field coupled law. The prediction error of subsystem i at t ≥ 1 is
///   Δ_t^i = x_tᵀQ_t x_t − (x̂_tᵀQ_t x̂_t + tr(Q_t Σ)),
/// with x̂_t = A_{t−1}x_{t−1} + B_{t−1}u_{t−1} + C_{t−1}x̄_{t−1} + μ the
/// one-step conditional mean. Δ_0 = 0: the initial state is deterministic, so
/// its conditional expectation is itself.
/// x0 must be n×k; mismatches throw ShapeError.
Trajectory rollout_with_noise(const SystemSpec& spec,
                              const MeanFieldGainSchedule& mf,
                              const Eigen::MatrixXd& x0,
                              const NoiseTensor& noise);

/// draw_noise + rollout_with_noise.
Trajectory rollout(const SystemSpec& spec, const MeanFieldGainSchedule& mf,
                   const Eigen::MatrixXd& x0, RngState& rng);

/// Same dynamics, but the control is the stacked centralized law
/// u_t = K̃_t x_t + f̃_t applied by dense multiplication. Oracle path for the
/// law-equivalence check; cost grows with (nk)².
Trajectory rollout_centralized(const SystemSpec& spec,
                               const CentralizedGainSchedule& sched,
                               const Eigen::MatrixXd& x0,
                               const NoiseTensor& noise);

/// Realized Problem-2 objective of a trajectory: standard state and control
/// costs plus the quadratic/affine risk surrogate Σ_i x_tᵀQlam_t x_t + x_tᵀblam_t.
/// The surrogate is counted for t ≥ 1 only: at t = 0 the state is
/// deterministic, the prediction error is identically zero, and the t = 0
/// surrogate term is a known constant with no counterpart in the realized
/// risk cost, so including it would break the constant-offset identity.
double problem2_objective(const SystemSpec& spec, const RiskAugmentation& aug,
                          const Trajectory& traj);

/// The constant by which the expected Problem-1 and Problem-2 objectives
/// differ: Σ_{t=1}^{T} k λ (δ_t − 4 tr((Σ Q_t)²)).
double predicted_problem_offset(const SystemSpec& spec);

/// Mean and quantile band of one scalar summary across runs.
struct Band {
  std::vector<double> mean;
  std::vector<double> lo;
  std::vector<double> hi;
};

struct ScalarBand {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Ensemble statistics of the four Monte Carlo summaries
///   x_avg: (1/k) Σ_i x_tᵀQ_t x_t      x_max: max_i x_tᵀQ_t x_t
///   u_avg: (1/k) Σ_i u_tᵀR_t u_t      u_max: max_i u_tᵀR_t u_t
/// per time step (x over t = 0..T, u over t = 0..T−1) and of their per-run
/// time averages. Bands are empirical quantiles at levels
/// (quantile_level, 1 − quantile_level) across runs, computed by linear
/// interpolation of order statistics: with N sorted values v and
/// h = (N−1)p, q(p) = v[⌊h⌋] + (h−⌊h⌋)(v[⌈h⌉] − v[⌊h⌋]).
struct EnsembleStats {
  Band x_avg, x_max, u_avg, u_max;
  ScalarBand x_avg_tavg, x_max_tavg, u_avg_tavg, u_max_tavg;
  int n_runs = 0;
  double quantile_level = 0.05;
};

/// Runs n_runs independent rollouts; run r is seeded with
/// run_seed(base_seed, r), so the result is a pure function of
/// (spec, mf, x0, n_runs, base_seed, quantile_level) regardless of threads.
EnsembleStats ensemble(const SystemSpec& spec, const MeanFieldGainSchedule& mf,
                       const Eigen::MatrixXd& x0, int n_runs,
                       std::uint64_t base_seed, double quantile_level = 0.05,
                       int threads = 1);

enum class ObjectiveKind { Problem1, Problem2 };

struct ObjectiveEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of the selected objective's expectation.
ObjectiveEstimate objective_estimate(const SystemSpec& spec,
                                     const MeanFieldGainSchedule& mf,
                                     const Eigen::MatrixXd& x0, int n_runs,
                                     std::uint64_t base_seed,
                                     ObjectiveKind kind, int threads = 1);

/// Paired comparison of the two objectives on common rollouts against the
/// predicted constant offset. Passes when |mean difference − predicted| is
/// within 4 paired standard errors.
struct OffsetCheckReport {
  double problem1_mean = 0.0;
  double problem2_mean = 0.0;
  double diff_mean = 0.0;
  double paired_std_error = 0.0;
  double predicted = 0.0;
  double deviation = 0.0;  // |diff_mean − predicted|
  bool pass = false;
};

OffsetCheckReport constant_offset_check(const SystemSpec& spec,
                                        const MeanFieldGainSchedule& mf,
                                        const Eigen::MatrixXd& x0, int n_runs,
                                        std::uint64_t base_seed,
                                        int threads = 1);

/// Per-time z-test of the predictive-variance identity on subsystem 0:
/// across n_samples independent rollouts, the empirical mean of
/// Δ_t² − 4(x_tᵀQ_tΣQ_t x_t + x_tᵀQ_tγ_t) is compared with
/// δ_t − 4 tr((ΣQ_t)²). Applied for t ≥ 1; at t = 0 both sides of the
/// identity degenerate (deterministic initial state).
struct PredictiveVarianceReport {
  struct Row {
    int t = 0;
    double empirical = 0.0;   // mean of Δ_t² across samples
    double predicted = 0.0;   // 4·mean(xᵀQΣQx + xᵀQγ) + δ − 4tr((ΣQ)²)
    double z = 0.0;
    double std_error = 0.0;
  };
  std::vector<Row> rows;
  double max_abs_z = 0.0;
};

PredictiveVarianceReport predictive_variance_check(
    const SystemSpec& spec, const MeanFieldGainSchedule& mf,
    const Eigen::MatrixXd& x0, int n_samples, std::uint64_t base_seed,
    int threads = 1);

/// k деterministic initial states drawn componentwise from
/// Normal(mean_j, variance) via Box–Muller on the SplitMix64 stream of `seed`;
/// entries are filled subsystem by subsystem. Returns n×k.
Eigen::MatrixXd normal_initial_states(int n, int k, const Eigen::VectorXd& mean,
                                      double variance, std::uint64_t seed);

}  // namespace mflqr
