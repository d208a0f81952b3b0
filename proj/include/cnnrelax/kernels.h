#ifndef CNNRELAX_KERNELS_H_
#define CNNRELAX_KERNELS_H_

#include <Eigen/Core>

#include "cnnrelax/model.h"

// Data-parallel inner loops of the non-convex objective. The top-level
// functions use OpenMP; `reference` holds the plain serial loops the parallel
// versions are tested against.
//
// Reductions are done over fixed chunks of kChunkRows samples whose partial
// sums are combined in chunk order, so results do not depend on the thread
// count.
namespace cnnrelax::kernels {

inline constexpr Eigen::Index kChunkRows = 256;

void forward(const RowMatrix& X, const Eigen::VectorXd& w, int k,
             Eigen::VectorXd& out);

// Returns sum_i (forward_i - y_i)^2. If `grad` is non-null it receives
// sum_i 2 (forward_i - y_i) sum_{j : X_ij w > 0} X_ij^T.
double loss_grad(const RowMatrix& X, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& w, int k, Eigen::VectorXd* grad);

namespace reference {

void forward(const RowMatrix& X, const Eigen::VectorXd& w, int k,
             Eigen::VectorXd& out);

double loss_grad(const RowMatrix& X, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& w, int k, Eigen::VectorXd* grad);

}  // namespace reference
}  // namespace cnnrelax::kernels

#endif  // CNNRELAX_KERNELS_H_
