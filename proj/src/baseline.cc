#include "cnnrelax/baseline.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cnnrelax/kernels.h"
#include "cnnrelax/random.h"

namespace cnnrelax {
namespace {

using Eigen::Index;
using Eigen::VectorXd;

void check_filter(const Dataset& dataset, const VectorXd& w) {
  if (w.size() != dataset.filter_size()) {
    throw std::invalid_argument("filter length differs from d/k");
  }
}

void check_config(const GdConfig& config) {
  if (config.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!std::isfinite(config.step_size)) {
    throw std::invalid_argument("step_size must be finite");
  }
  if (!(config.stop_tol >= 0.0)) {
    throw std::invalid_argument("stop_tol must be nonnegative");
  }
}

}  // namespace

LossGrad loss_grad(const Dataset& dataset, const Eigen::VectorXd& w) {
  check_filter(dataset, w);
  LossGrad out;
  out.loss = kernels::loss_grad(dataset.X, dataset.y, w, dataset.k, &out.grad);
  return out;
}

double default_step_size(const Dataset& dataset) {
  validate_dataset(dataset);
  const Index b = dataset.filter_size();
  const int k = dataset.k;
  // B^T B = sum_ij X_ij^T X_ij, applied without forming it.
  VectorXd v = VectorXd::Ones(b) / std::sqrt(static_cast<double>(b));
  double lambda = 0.0;
  for (int it = 0; it < 20; ++it) {
    VectorXd next = VectorXd::Zero(b);
    for (Index i = 0; i < dataset.n(); ++i) {
      for (int j = 0; j < k; ++j) {
        const auto blk = dataset.block(static_cast<int>(i), j);
        next += blk.dot(v) * blk.transpose();
      }
    }
    lambda = next.norm();
    if (lambda == 0.0) break;
    v = next / lambda;
  }
  if (!(lambda > 0.0)) return 1.0;
  return 0.5 / (k * lambda);
}

std::string_view to_string(GdStatus status) {
  switch (status) {
    case GdStatus::kConverged: return "converged";
    case GdStatus::kMaxIterations: return "max_iterations";
    case GdStatus::kDiverged: return "diverged";
  }
  return "unknown";
}

GdResult gd_fit_from(const Dataset& dataset, const Eigen::VectorXd& w0,
                     const GdConfig& config) {
  validate_dataset(dataset);
  check_filter(dataset, w0);
  check_config(config);
  GdResult out;
  out.step_size =
      config.step_size > 0.0 ? config.step_size : default_step_size(dataset);
  out.w_init = w0;
  VectorXd w = w0;
  VectorXd grad;
  int iter = 0;
  for (;; ++iter) {
    const double loss =
        kernels::loss_grad(dataset.X, dataset.y, w, dataset.k, &grad);
    out.final_loss = loss;
    out.grad_norm = grad.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(loss) || loss > kDivergenceLoss) {
      out.status = GdStatus::kDiverged;
      break;
    }
    if (out.grad_norm <= config.stop_tol) {
      out.status = GdStatus::kConverged;
      break;
    }
    if (iter == config.max_iters) {
      out.status = GdStatus::kMaxIterations;
      break;
    }
    w -= out.step_size * grad;
  }
  out.w_hat = std::move(w);
  out.iters_used = iter;
  return out;
}

GdResult gd_fit(const Dataset& dataset, const GdConfig& config) {
  validate_dataset(dataset);
  const Index b = dataset.filter_size();
  const double scale = config.init_scale >= 0.0
                           ? config.init_scale
                           : 1.0 / std::sqrt(static_cast<double>(b));
  Rng rng(derive_seed(config.seed, Stream::kInit));
  const VectorXd w0 = scale * gaussian_vector(rng, b);
  return gd_fit_from(dataset, w0, config);
}

double fd_check(const Dataset& dataset, const Eigen::VectorXd& w, double h) {
  validate_dataset(dataset);
  check_filter(dataset, w);
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  for (int i = 0; i < dataset.n(); ++i) {
    for (int j = 0; j < dataset.k; ++j) {
      const auto blk = dataset.block(i, j);
      if (std::abs(blk.dot(w)) <= 10.0 * h * blk.norm()) {
        throw std::domain_error("point is within 10 h of a ReLU kink (sample " +
                                std::to_string(i) + ", block " +
                                std::to_string(j) + ")");
      }
    }
  }
  const LossGrad lg = loss_grad(dataset, w);
  VectorXd fd(w.size());
  VectorXd probe = w;
  for (Index c = 0; c < w.size(); ++c) {
    probe(c) = w(c) + h;
    const double up = residual(dataset, probe);
    probe(c) = w(c) - h;
    const double down = residual(dataset, probe);
    probe(c) = w(c);
    fd(c) = (up - down) / (2.0 * h);
  }
  const double denom =
      std::max(lg.grad.lpNorm<Eigen::Infinity>(),
               std::numeric_limits<double>::min());
  return (lg.grad - fd).lpNorm<Eigen::Infinity>() / denom;
}

}  // namespace cnnrelax
