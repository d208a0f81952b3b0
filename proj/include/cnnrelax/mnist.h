#ifndef CNNRELAX_MNIST_H_
#define CNNRELAX_MNIST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cnnrelax/idx.h"
#include "cnnrelax/model.h"
#include "cnnrelax/relax.h"

namespace cnnrelax {

// Rotates an image by theta degrees (counter-clockwise in (row, col)
// coordinates, so the +row axis turns toward +col) about its center
// ((rows-1)/2, (cols-1)/2). Each output pixel p' samples the input at
// c + R(-theta)(p' - c) with bilinear interpolation; samples outside the
// frame read as 0. Requires theta in [-180, 180].
Eigen::MatrixXd rotate_image(const Eigen::MatrixXd& image, double theta);

enum class Split { kTrain, kTest };

struct RotationDataset {
  RowMatrix X;          // one flattened (row-major) rotated image per row
  Eigen::VectorXd y;    // rotation angle in degrees
  std::vector<std::size_t> source;  // index of each image in the source tensor
  Split split = Split::kTrain;
};

struct RotationConfig {
  double angle_lo = -45.0;
  double angle_hi = 45.0;
  int n_train = 10000;
  int n_test = 5000;
  std::uint64_t seed = 0;
};

// Images come from a rank-3 tensor [count, rows, cols]. Integer kinds are
// divided by 255; float kinds are taken as already in [0, 1]. Train and test
// draw disjoint images; each image gets an independent uniform angle.
std::pair<RotationDataset, RotationDataset> build_rotation_dataset(
    const IdxTensor& images, const RotationConfig& config);

// Filter learned by the relaxation on (centered pixels, shifted angles).
struct LearnedFilter {
  Eigen::VectorXd w_hat;        // length pixels / k
  Eigen::VectorXd pixel_mean;   // subtracted before the block responses
  double label_shift = 0.0;     // added to the angles before fitting
  int k = 1;
  RecoveryOutcome fit;
};

struct FilterConfig {
  int k = 16;
  int trials = 6;
  // Samples of the training set given to the relaxation (0 = all of them).
  int fit_samples = 2000;
  std::uint64_t seed = 0;
  SolverOptions solver;
};

// Throws std::invalid_argument unless k divides the pixel count; propagates
// AllTrialsFailed.
LearnedFilter learn_filter_features(const RotationDataset& train,
                                    const FilterConfig& config);

// [pixels, (X_ij - mean_j) w_hat)_+ for j = 1..k]; width pixels + k.
RowMatrix augment(const LearnedFilter& filter, const RowMatrix& X);

struct MnistConfig {
  RotationConfig rotation;
  FilterConfig filter;
  std::vector<double> lambdas = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  double validation_fraction = 0.1;
};

struct MnistResult {
  double rmse_raw = 0.0;
  double rmse_augmented = 0.0;
  double lambda_raw = 0.0;
  double lambda_augmented = 0.0;
  LearnedFilter filter;
  int n_train = 0;
  int n_test = 0;
};

// Picks lambda on the last validation_fraction of train, refits on all of
// train, and reports the test RMSE.
double select_lambda(const RowMatrix& X, const Eigen::VectorXd& y,
                     const std::vector<double>& lambdas,
                     double validation_fraction);

MnistResult run_rotation_experiment(const RotationDataset& train,
                                    const RotationDataset& test,
                                    const MnistConfig& config);

struct MnistFiles {
  std::string train_images;
  std::string train_labels;
  std::string test_images;
  std::string test_labels;
};

// Standard file names inside `dir`, or nullopt if any is missing.
std::optional<MnistFiles> find_mnist_files(const std::string& dir);

// Value of CNNRELAX_DATA_DIR, or empty.
std::string default_data_dir();

// Loads the four files, trains on the training images and tests on the
// held-out images. Digit labels are only checked for a matching count; a
// mismatch or an unreadable file throws IoError.
MnistResult run_mnist_experiment(const MnistFiles& files,
                                 const MnistConfig& config);

// experiment,rmse table.
std::string format_results_csv(const MnistResult& result);

}  // namespace cnnrelax

#endif  // CNNRELAX_MNIST_H_
