#ifndef CNNRELAX_BASELINE_H_
#define CNNRELAX_BASELINE_H_

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "cnnrelax/model.h"

namespace cnnrelax {

struct LossGrad {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

// Loss sum_i (forward_i - y_i)^2 and its gradient; the ReLU derivative is
// taken as 0 at the kink.
LossGrad loss_grad(const Dataset& dataset, const Eigen::VectorXd& w);

struct GdConfig {
  double step_size = 0.0;  // <= 0 selects default_step_size()
  int max_iters = 5000;
  double init_scale = -1.0;  // < 0 selects 1/sqrt(d/k)
  double stop_tol = 1e-10;
  std::uint64_t seed = 0;
};

// 0.5 / (k * lambda_max(B^T B)), where B stacks every block X_ij as a row and
// lambda_max comes from 20 power iterations with a fixed start vector. For
// k = 1 this is 0.5 / lambda_max(X^T X).
double default_step_size(const Dataset& dataset);

enum class GdStatus { kConverged, kMaxIterations, kDiverged };

std::string_view to_string(GdStatus status);

struct GdResult {
  Eigen::VectorXd w_hat;
  Eigen::VectorXd w_init;
  double final_loss = 0.0;
  double grad_norm = 0.0;  // infinity norm at w_hat
  int iters_used = 0;
  double step_size = 0.0;
  GdStatus status = GdStatus::kMaxIterations;
};

inline constexpr double kDivergenceLoss = 1e12;

// Fixed-step gradient descent from a Gaussian start drawn from config.seed.
GdResult gd_fit(const Dataset& dataset, const GdConfig& config);

// Same from an explicit starting point (config.seed and init_scale unused).
GdResult gd_fit_from(const Dataset& dataset, const Eigen::VectorXd& w0,
                     const GdConfig& config);

// max_c |g_c - fd_c| / max(|g|_inf, tiny), with central differences of step
// h. Throws std::domain_error if some block has |X_ij w| <= 10 h |X_ij|.
double fd_check(const Dataset& dataset, const Eigen::VectorXd& w, double h);

}  // namespace cnnrelax

#endif  // CNNRELAX_BASELINE_H_
