#ifndef CNNRELAX_MODEL_H_
#define CNNRELAX_MODEL_H_

#include <cstdint>
#include <utility>

#include <Eigen/Core>

namespace cnnrelax {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Ground-truth teacher: one filter of length d/k shared by k non-overlapping
// blocks of the input.
struct PlantedModel {
  int d = 0;
  int k = 1;
  Eigen::VectorXd w_star;
  std::uint64_t seed = 0;

  int filter_size() const { return d / k; }
};

// Samples are rows of X; block j of row i is X_ij = X(i, j*b : (j+1)*b) with
// b = d/k.
struct Dataset {
  RowMatrix X;
  Eigen::VectorXd y;
  int k = 1;

  int n() const { return static_cast<int>(X.rows()); }
  int d() const { return static_cast<int>(X.cols()); }
  int filter_size() const { return d() / k; }
  auto block(int i, int j) const {
    return X.row(i).segment(static_cast<Eigen::Index>(j) * filter_size(),
                            filter_size());
  }
};

// Throws std::invalid_argument unless n, d, k are positive and k divides d.
void validate_shape(int n, int d, int k);

// Checks the Dataset invariants (shape, finite entries, k | d).
void validate_dataset(const Dataset& dataset);

// Gaussian features and filter from named substreams of `seed`; labels from
// the noiseless forward map.
std::pair<PlantedModel, Dataset> sample_planted(int n, int d, int k,
                                                std::uint64_t seed);

// output_i = sum_j max(X_ij . w, 0).
Eigen::VectorXd forward(const RowMatrix& X, const Eigen::VectorXd& w, int k);

// sum_i (forward_i - y_i)^2.
double residual(const Dataset& dataset, const Eigen::VectorXd& w);

}  // namespace cnnrelax

#endif  // CNNRELAX_MODEL_H_
