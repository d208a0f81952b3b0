#include "cnnrelax/model.h"

#include <stdexcept>
#include <string>

#include "cnnrelax/kernels.h"
#include "cnnrelax/random.h"

namespace cnnrelax {

void validate_shape(int n, int d, int k) {
  if (n <= 0 || d <= 0 || k <= 0) {
    throw std::invalid_argument("n, d and k must be positive");
  }
  if (d % k != 0) {
    throw std::invalid_argument("k = " + std::to_string(k) +
                                " does not divide d = " + std::to_string(d));
  }
}

void validate_dataset(const Dataset& dataset) {
  validate_shape(dataset.n(), dataset.d(), dataset.k);
  if (dataset.y.size() != dataset.n()) {
    throw std::invalid_argument("label vector length differs from n");
  }
  if (!dataset.X.allFinite() || !dataset.y.allFinite()) {
    throw std::invalid_argument("dataset has non-finite entries");
  }
}

std::pair<PlantedModel, Dataset> sample_planted(int n, int d, int k,
                                                std::uint64_t seed) {
  validate_shape(n, d, k);
  PlantedModel model;
  model.d = d;
  model.k = k;
  model.seed = seed;

  Rng filter_rng(derive_seed(seed, Stream::kFilter));
  do {
    model.w_star = gaussian_vector(filter_rng, d / k);
  } while (model.w_star.isZero(0.0));

  Rng feature_rng(derive_seed(seed, Stream::kFeatures));
  Dataset data;
  data.k = k;
  data.X = gaussian_matrix(feature_rng, n, d);
  data.y = forward(data.X, model.w_star, k);
  return {std::move(model), std::move(data)};
}

Eigen::VectorXd forward(const RowMatrix& X, const Eigen::VectorXd& w, int k) {
  Eigen::VectorXd out;
  kernels::forward(X, w, k, out);
  return out;
}

double residual(const Dataset& dataset, const Eigen::VectorXd& w) {
  return kernels::loss_grad(dataset.X, dataset.y, w, dataset.k, nullptr);
}

}  // namespace cnnrelax
