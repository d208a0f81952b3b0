#ifndef CNNRELAX_RIDGE_H_
#define CNNRELAX_RIDGE_H_

#include <vector>

#include <Eigen/Core>

#include "cnnrelax/model.h"

namespace cnnrelax {

struct RidgeModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  double lambda = 0.0;
};

// Minimizes |y - X w - b|^2 + lambda |w|^2 with an unpenalized intercept b.
// lambda = 0 gives the minimum-norm least-squares fit.
RidgeModel ridge_fit(const Eigen::Ref<const RowMatrix>& X,
                     const Eigen::VectorXd& y, double lambda);

// Fits one model per lambda, sharing the centered Gram matrix.
std::vector<RidgeModel> ridge_path(const Eigen::Ref<const RowMatrix>& X,
                                   const Eigen::VectorXd& y,
                                   const std::vector<double>& lambdas);

Eigen::VectorXd ridge_predict(const RidgeModel& model,
                              const Eigen::Ref<const RowMatrix>& X);

double rmse(const Eigen::VectorXd& y_hat, const Eigen::VectorXd& y);

}  // namespace cnnrelax

#endif  // CNNRELAX_RIDGE_H_
