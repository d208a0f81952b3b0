#ifndef CNNRELAX_RELAX_H_
#define CNNRELAX_RELAX_H_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "cnnrelax/model.h"
#include "cnnrelax/qp_solver.h"

namespace cnnrelax {

enum class Variant { kSingleNeuron, kMultiNeuron };

// Location of the filter and the slack variables inside the program vector.
// For the single-neuron limit LP the slacks are eliminated (z = y) and
// z_size is 0. Multi-neuron slacks are stored sample-major: z_ij at
// z_offset + i*k + j.
struct VarMap {
  Eigen::Index w_offset = 0;
  Eigen::Index w_size = 0;
  Eigen::Index z_offset = 0;
  Eigen::Index z_size = 0;
};

struct RelaxationInstance {
  Variant variant = Variant::kSingleNeuron;
  double beta = 0.0;
  Eigen::VectorXd r;
  ConvexProgram program;
  VarMap var_map;
};

// Randomized relaxation of the ReLU fitting problem (minimization convention,
// cost +beta r^T w):
//
//   k = 1, beta > 0:  min 1/2 |z - y|^2 + beta r^T w   s.t. X w <= z, 0 <= z
//   k = 1, beta = 0:  min r^T w                        s.t. X w <= y
//   k > 1, beta = 0:  min r^T w  s.t. sum_j z_ij = y_i, X_ij w <= z_ij, 0 <= z_ij
//   k > 1, beta > 0:  min 1/2 sum_i (sum_j z_ij - y_i)^2 + beta r^T w
//                     with the same inequalities.
//
// Inequality rows for k > 1 are ordered: rows [0, nk) are X_ij w - z_ij <= 0
// and rows [nk, 2nk) are -z_ij <= 0, both indexed i*k + j.
RelaxationInstance build(const Dataset& dataset, double beta,
                         const Eigen::VectorXd& r);

struct FitResult {
  Eigen::VectorXd w_hat;
  Eigen::VectorXd z_hat;
  double train_residual = 0.0;
  SolveReport report;
  Eigen::VectorXd r_used;
  std::uint64_t trial_seed = 0;

  bool ok() const { return report.optimal(); }
};

// Standard normal perturbation drawn from `seed`.
Eigen::VectorXd draw_perturbation(int size, std::uint64_t seed);

// Seed of trial `index` of an amplified fit.
std::uint64_t trial_seed(std::uint64_t seed, int index);

FitResult fit(const Dataset& dataset, double beta, std::uint64_t seed,
              const SolverOptions& solver = {});

// Same as fit() with a caller-supplied perturbation. For 0 < beta < 1 the
// solver tolerance is multiplied by beta (floored at kMinTolerance).
FitResult fit_with_perturbation(const Dataset& dataset, double beta,
                                const Eigen::VectorXd& r,
                                const SolverOptions& solver = {});

struct Assessment {
  double l2_error = 0.0;
  double rel_error = 0.0;
  bool success = false;
};

// success iff |w_hat - w_star|_2 <= tau (1 + |w_star|_2).
Assessment assess(const Eigen::VectorXd& w_hat, const Eigen::VectorXd& w_star,
                  double tau);

struct RelaxOptions {
  double beta = 0.0;
  double tau = 1e-4;
  SolverOptions solver;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  SolveStatus status = SolveStatus::kNumericalFailure;
  double l2_error = 0.0;
  double train_residual = 0.0;
};

// Errors are NaN and success is false when no reference filter was given.
struct RecoveryOutcome {
  FitResult best;
  double l2_error = 0.0;
  double rel_error = 0.0;
  bool success = false;
  std::vector<TrialRecord> trials;
};

class AllTrialsFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs independent perturbations on the same data and keeps the fit with the
// smallest training residual (lowest trial index on ties). Trials may run
// concurrently; the outcome does not depend on the schedule. Throws
// AllTrialsFailed if no trial is solved to optimality.
RecoveryOutcome fit_amplified(const Dataset& dataset, int num_trials,
                              std::uint64_t seed,
                              const RelaxOptions& options = {},
                              const Eigen::VectorXd* w_star = nullptr);

// Amplification over explicit perturbations; trial i records seed i.
RecoveryOutcome fit_amplified_with(
    const Dataset& dataset, const std::vector<Eigen::VectorXd>& perturbations,
    const RelaxOptions& options = {}, const Eigen::VectorXd* w_star = nullptr);

// Least squares on the strictly positive labels: w = pinv(X_S) y_S with
// S = {i : y_i > 0}. Single neuron only.
Eigen::VectorXd pseudoinverse_recovery(const Dataset& dataset);

}  // namespace cnnrelax

#endif  // CNNRELAX_RELAX_H_
