#include "cnnrelax/ridge.h"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "cnnrelax/qp_solver.h"

namespace cnnrelax {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void check_inputs(const Eigen::Ref<const RowMatrix>& X, const VectorXd& y) {
  if (X.rows() == 0) throw std::invalid_argument("ridge needs at least one sample");
  if (X.rows() != y.size()) {
    throw std::invalid_argument("ridge: X and y have different sample counts");
  }
}

}  // namespace

std::vector<RidgeModel> ridge_path(const Eigen::Ref<const RowMatrix>& X,
                                   const Eigen::VectorXd& y,
                                   const std::vector<double>& lambdas) {
  check_inputs(X, y);
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("ridge lambda must be finite and >= 0");
    }
  }
  const VectorXd mean_x = X.colwise().mean().transpose();
  const double mean_y = y.mean();
  const MatrixXd xc = X.rowwise() - mean_x.transpose();
  const VectorXd yc = y.array() - mean_y;
  MatrixXd gram;
  VectorXd rhs;
  bool have_gram = false;
  std::vector<RidgeModel> out(lambdas.size());
  for (std::size_t t = 0; t < lambdas.size(); ++t) {
    RidgeModel& m = out[t];
    m.lambda = lambdas[t];
    if (m.lambda == 0.0) {
      m.weights = least_squares(xc, yc);
    } else {
      if (!have_gram) {
        gram = xc.transpose() * xc;
        rhs = xc.transpose() * yc;
        have_gram = true;
      }
      MatrixXd system = gram;
      system.diagonal().array() += m.lambda;
      m.weights = system.llt().solve(rhs);
    }
    m.intercept = mean_y - mean_x.dot(m.weights);
  }
  return out;
}

RidgeModel ridge_fit(const Eigen::Ref<const RowMatrix>& X,
                     const Eigen::VectorXd& y, double lambda) {
  return ridge_path(X, y, {lambda}).front();
}

Eigen::VectorXd ridge_predict(const RidgeModel& model,
                              const Eigen::Ref<const RowMatrix>& X) {
  if (X.cols() != model.weights.size()) {
    throw std::invalid_argument("ridge_predict: feature count mismatch");
  }
  return (X * model.weights).array() + model.intercept;
}

double rmse(const Eigen::VectorXd& y_hat, const Eigen::VectorXd& y) {
  if (y_hat.size() != y.size() || y.size() == 0) {
    throw std::invalid_argument("rmse needs equal, non-empty vectors");
  }
  return std::sqrt((y_hat - y).squaredNorm() / static_cast<double>(y.size()));
}

}  // namespace cnnrelax
