#ifndef CNNRELAX_QP_SOLVER_H_
#define CNNRELAX_QP_SOLVER_H_

#include <limits>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace cnnrelax {

using SparseMatrix = Eigen::SparseMatrix<double>;

// minimize    1/2 x^T Q x + c^T x
// subject to  A_ineq x <= b_ineq
//             A_eq x    = b_eq
//
// Q must be symmetric positive semidefinite (an empty Q makes this an LP).
// Either constraint block may have zero rows.
struct ConvexProgram {
  SparseMatrix q;
  Eigen::VectorXd c;
  SparseMatrix a_ineq;
  Eigen::VectorXd b_ineq;
  SparseMatrix a_eq;
  Eigen::VectorXd b_eq;

  Eigen::Index num_vars() const { return c.size(); }
  Eigen::Index num_ineq() const { return b_ineq.size(); }
  Eigen::Index num_eq() const { return b_eq.size(); }
  bool is_lp() const { return q.nonZeros() == 0; }

  // Empty program with correctly shaped (all-zero) blocks.
  static ConvexProgram empty(Eigen::Index num_vars, Eigen::Index num_ineq,
                             Eigen::Index num_eq);

  // Dense inputs; a zero-row matrix stands for an absent block.
  static ConvexProgram from_dense(const Eigen::MatrixXd& q,
                                  const Eigen::VectorXd& c,
                                  const Eigen::MatrixXd& a_ineq,
                                  const Eigen::VectorXd& b_ineq,
                                  const Eigen::MatrixXd& a_eq,
                                  const Eigen::VectorXd& b_eq);
};

// Throws std::invalid_argument on inconsistent dimensions, non-finite data or
// an asymmetric Q (beyond 1e-12).
void validate(const ConvexProgram& program);

double objective_value(const ConvexProgram& program, const Eigen::VectorXd& x);

// kDualUnbounded means the primal objective is unbounded below, i.e. the dual
// program has no feasible point.
enum class SolveStatus {
  kOptimal,
  kPrimalInfeasible,
  kDualUnbounded,
  kMaxIterations,
  kNumericalFailure,
};

std::string_view to_string(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::kNumericalFailure;
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;  // multipliers of A_ineq rows, >= 0
  Eigen::VectorXd nu;      // multipliers of A_eq rows
  double primal_residual = std::numeric_limits<double>::infinity();
  double dual_residual = std::numeric_limits<double>::infinity();
  double complementarity_gap = std::numeric_limits<double>::infinity();
  double objective = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

// Residuals of the KKT system recomputed from (x, lambda, nu) alone:
//   dual_residual    max(||Q x + c + A_ineq^T lambda + A_eq^T nu||_inf,
//                        max_i -lambda_i)
//   primal_residual  max(max_i (A_ineq x - b_ineq)_i^+, ||A_eq x - b_eq||_inf)
//   complementarity  max_i |lambda_i (A_ineq x - b_ineq)_i|
struct KktSummary {
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double complementarity = 0.0;
  bool pass = false;

  double worst() const;
};

KktSummary check_kkt(const ConvexProgram& program, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& lambda, const Eigen::VectorXd& nu,
                     double tol);
KktSummary check_kkt(const ConvexProgram& program, const SolveReport& report,
                     double tol);

inline constexpr double kMinTolerance = 1e-12;
inline constexpr double kMaxTolerance = 1e-2;

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 200;
  // Static regularization of the KKT matrix.
  double regularization = 1e-10;
};

// Homogeneous self-dual primal-dual interior-point method with Mehrotra
// predictor-corrector steps. Optimal is reported only when the KKT residuals
// of the returned point are all <= tol in the caller's units. Deterministic
// and reentrant.
SolveReport solve(const ConvexProgram& program,
                  const SolverOptions& options = {});
SolveReport solve(const ConvexProgram& program, double tol, int max_iter);

// Minimum-norm least-squares solution (pseudoinverse applied to b).
Eigen::VectorXd least_squares(const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& b);

}  // namespace cnnrelax

#endif  // CNNRELAX_QP_SOLVER_H_
