#ifndef CNNRELAX_CERTIFY_H_
#define CNNRELAX_CERTIFY_H_

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cnnrelax/model.h"
#include "cnnrelax/qp_solver.h"

namespace cnnrelax {

// S[j] lists the samples whose block j responds strictly positively to the
// filter; R[i] lists the responding blocks of sample i. Indices are 0-based.
struct ActiveSets {
  std::vector<std::vector<int>> S;
  std::vector<std::vector<int>> R;

  int num_samples() const { return static_cast<int>(R.size()); }
  int num_blocks() const { return static_cast<int>(S.size()); }
};

ActiveSets active_sets(const RowMatrix& X, const Eigen::VectorXd& w_star,
                       int k);

// Rebuild one representation from the other.
ActiveSets sets_from_s(const std::vector<std::vector<int>>& s, int n);
ActiveSets sets_from_r(const std::vector<std::vector<int>>& r, int k);

struct Generator {
  int sample = 0;
  Eigen::VectorXd g;  // sum_{j in R_i} X_ij^T
};

std::vector<Generator> cone_generators(const Dataset& dataset,
                                       const ActiveSets& sets);

enum class ConeVerdict { kInside, kOutside, kIndeterminate };

std::string_view to_string(ConeVerdict verdict);

struct Certificate {
  ConeVerdict verdict = ConeVerdict::kIndeterminate;
  bool exists = false;
  Eigen::VectorXd coefficients;  // one per generator, in generator order
  std::vector<int> samples;      // sample index of each coefficient
  double equality_residual = 0.0;
  double min_coefficient = 0.0;
  // Optimal value of the phase-1 program (l1 distance from the target to the
  // cone along the elastic variables).
  double elastic_value = 0.0;
  // Elastic value within a factor of ten of the threshold, where the verdict
  // is numerically fragile.
  bool boundary_degenerate = false;
  SolveStatus solver_status = SolveStatus::kNumericalFailure;
};

inline constexpr double kConeTolerance = 1e-7;

// Decides target ∈ cone{g_i} by solving
//   min 1^T (e+ + e-)  s.t.  sum_i v_i g_i + e+ - e- = target,  v, e+, e- >= 0.
// The certificate exists iff the optimum is <= tol.
Certificate check_cone_condition(const std::vector<Eigen::VectorXd>& generators,
                                 const Eigen::VectorXd& target,
                                 double tol = kConeTolerance);
Certificate check_cone_condition(const std::vector<Generator>& generators,
                                 const Eigen::VectorXd& target,
                                 double tol = kConeTolerance);

// Optimality certificate of w_star for the beta -> 0 program with cost r^T w.
// Under the minimization convention this is -r ∈ cone{g_i}.
Certificate certify_recovery(const Dataset& dataset,
                             const Eigen::VectorXd& w_star,
                             const Eigen::VectorXd& r,
                             double tol = kConeTolerance);

enum class DualStatus { kOptimal, kInfeasible, kUnbounded, kFailure };

std::string_view to_string(DualStatus status);

// Dual of the beta -> 0 program (minimization form, cost r^T w):
//   k = 1:  max -y^T u  s.t.  X^T u = -r,  u >= 0
//   k > 1:  max -y^T v  s.t.  sum_ij X_ij^T lambda_ij = -r,
//                             0 <= lambda_ij <= v_i
// For k = 1, lambda holds u as an n x 1 matrix and v = u.
struct DualReport {
  DualStatus status = DualStatus::kFailure;
  double dual_objective = 0.0;
  Eigen::MatrixXd lambda;  // n x k
  Eigen::VectorXd v;       // length n

  SolveStatus primal_status = SolveStatus::kNumericalFailure;
  double primal_objective = 0.0;
  Eigen::VectorXd w_primal;
  // |primal - dual| when both are optimal, NaN otherwise.
  double duality_gap = 0.0;
  // Largest |multiplier * slack| pairing the dual point with the primal one.
  double complementarity = 0.0;

  // Set when a reference filter is supplied and the primal optimum equals it:
  // max over i of |lambda_ij| off S_j and |lambda_ij - v_i| on S_j.
  bool structure_checked = false;
  double structure_violation = 0.0;
};

DualReport dual_solve(const Dataset& dataset, const Eigen::VectorXd& r,
                      const SolverOptions& solver = {},
                      const Eigen::VectorXd* w_star = nullptr);

// Fraction of samples with exactly one active block. Under Gaussian features
// and k blocks its expectation is k / 2^k.
double r1_singleton_fraction(const ActiveSets& sets);

// Fraction of samples whose only active block is `block` (expectation 1/2^k).
double singleton_fraction_for_block(const ActiveSets& sets, int block);

}  // namespace cnnrelax

#endif  // CNNRELAX_CERTIFY_H_
