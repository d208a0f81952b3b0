#include "cnnrelax/kernels.h"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace cnnrelax::kernels {
namespace {

void check_shapes(const RowMatrix& X, const Eigen::VectorXd& w, int k) {
  if (k <= 0 || X.cols() % k != 0) {
    throw std::invalid_argument("block count must divide the input dimension");
  }
  if (w.size() != X.cols() / k) {
    throw std::invalid_argument("filter length must equal d/k");
  }
}

// Forward value and active-block gradient direction for one sample.
inline double sample_forward(const RowMatrix& X, const Eigen::VectorXd& w,
                             int k, Eigen::Index i) {
  const Eigen::Index b = w.size();
  double sum = 0.0;
  for (int j = 0; j < k; ++j) {
    const double u = X.row(i).segment(j * b, b).dot(w);
    if (u > 0.0) sum += u;
  }
  return sum;
}

// Adds this sample's contribution to loss and (optionally) grad.
inline void accumulate_sample(const RowMatrix& X, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& w, int k, Eigen::Index i,
                              double& loss, Eigen::VectorXd* grad) {
  const Eigen::Index b = w.size();
  double f = 0.0;
  for (int j = 0; j < k; ++j) {
    const double u = X.row(i).segment(j * b, b).dot(w);
    if (u > 0.0) f += u;
  }
  const double e = f - y(i);
  loss += e * e;
  if (grad == nullptr || e == 0.0) return;
  for (int j = 0; j < k; ++j) {
    const auto block = X.row(i).segment(j * b, b);
    if (block.dot(w) > 0.0) *grad += (2.0 * e) * block.transpose();
  }
}

}  // namespace

void forward(const RowMatrix& X, const Eigen::VectorXd& w, int k,
             Eigen::VectorXd& out) {
  check_shapes(X, w, k);
  const Eigen::Index n = X.rows();
  out.resize(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) out(i) = sample_forward(X, w, k, i);
}

double loss_grad(const RowMatrix& X, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& w, int k, Eigen::VectorXd* grad) {
  check_shapes(X, w, k);
  if (y.size() != X.rows()) throw std::invalid_argument("label length != n");
  const Eigen::Index n = X.rows();
  const Eigen::Index b = w.size();
  const Eigen::Index num_chunks = (n + kChunkRows - 1) / kChunkRows;
  std::vector<double> chunk_loss(num_chunks, 0.0);
  std::vector<Eigen::VectorXd> chunk_grad;
  if (grad != nullptr) chunk_grad.assign(num_chunks, Eigen::VectorXd::Zero(b));

#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < num_chunks; ++c) {
    const Eigen::Index end = std::min(n, (c + 1) * kChunkRows);
    Eigen::VectorXd* g = grad != nullptr ? &chunk_grad[c] : nullptr;
    for (Eigen::Index i = c * kChunkRows; i < end; ++i) {
      accumulate_sample(X, y, w, k, i, chunk_loss[c], g);
    }
  }

  double loss = 0.0;
  if (grad != nullptr) grad->setZero(b);
  for (Eigen::Index c = 0; c < num_chunks; ++c) {
    loss += chunk_loss[c];
    if (grad != nullptr) *grad += chunk_grad[c];
  }
  return loss;
}

namespace reference {

void forward(const RowMatrix& X, const Eigen::VectorXd& w, int k,
             Eigen::VectorXd& out) {
  check_shapes(X, w, k);
  out.resize(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out(i) = sample_forward(X, w, k, i);
  }
}

double loss_grad(const RowMatrix& X, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& w, int k, Eigen::VectorXd* grad) {
  check_shapes(X, w, k);
  if (y.size() != X.rows()) throw std::invalid_argument("label length != n");
  double loss = 0.0;
  if (grad != nullptr) grad->setZero(w.size());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    accumulate_sample(X, y, w, k, i, loss, grad);
  }
  return loss;
}

}  // namespace reference
}  // namespace cnnrelax::kernels
