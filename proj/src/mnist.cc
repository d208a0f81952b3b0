#include "cnnrelax/mnist.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cnnrelax/errors.h"
#include "cnnrelax/random.h"
#include "cnnrelax/ridge.h"

namespace cnnrelax {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double unit_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double pixel(const MatrixXd& image, Index r, Index c) {
  if (r < 0 || c < 0 || r >= image.rows() || c >= image.cols()) return 0.0;
  return image(r, c);
}

RotationDataset make_split(const IdxTensor& images,
                           const std::vector<std::size_t>& picks, double lo,
                           double hi, std::uint64_t angle_seed, Split split) {
  const Index rows = images.dims[1];
  const Index cols = images.dims[2];
  const Index pixels = rows * cols;
  const double scale = images.kind == IdxKind::kFloat32 ||
                               images.kind == IdxKind::kFloat64
                           ? 1.0
                           : 1.0 / 255.0;
  RotationDataset out;
  out.split = split;
  out.source = picks;
  out.X.resize(static_cast<Index>(picks.size()), pixels);
  out.y.resize(static_cast<Index>(picks.size()));
  Rng rng(angle_seed);
  for (Index i = 0; i < out.y.size(); ++i) {
    out.y(i) = lo == hi ? lo : lo + (hi - lo) * unit_uniform(rng);
  }
  const long count = static_cast<long>(picks.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    MatrixXd image(rows, cols);
    const double* src = images.data.data() + picks[i] * pixels;
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) image(r, c) = src[r * cols + c] * scale;
    }
    const MatrixXd rotated = rotate_image(image, out.y(i));
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) out.X(i, r * cols + c) = rotated(r, c);
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd rotate_image(const Eigen::MatrixXd& image, double theta) {
  if (!(theta >= -180.0 && theta <= 180.0)) {
    throw std::invalid_argument("rotation angle must lie in [-180, 180]");
  }
  const double rad = theta * std::numbers::pi / 180.0;
  const double cs = std::cos(rad);
  const double sn = std::sin(rad);
  const double cr = (static_cast<double>(image.rows()) - 1.0) / 2.0;
  const double cc = (static_cast<double>(image.cols()) - 1.0) / 2.0;
  MatrixXd out(image.rows(), image.cols());
  for (Index r = 0; r < image.rows(); ++r) {
    for (Index c = 0; c < image.cols(); ++c) {
      const double dr = static_cast<double>(r) - cr;
      const double dc = static_cast<double>(c) - cc;
      const double sr = cr + cs * dr + sn * dc;
      const double sc = cc - sn * dr + cs * dc;
      const double fr = std::floor(sr);
      const double fc = std::floor(sc);
      const double ar = sr - fr;
      const double ac = sc - fc;
      const auto r0 = static_cast<Index>(fr);
      const auto c0 = static_cast<Index>(fc);
      out(r, c) = (1 - ar) * (1 - ac) * pixel(image, r0, c0) +
                  (1 - ar) * ac * pixel(image, r0, c0 + 1) +
                  ar * (1 - ac) * pixel(image, r0 + 1, c0) +
                  ar * ac * pixel(image, r0 + 1, c0 + 1);
    }
  }
  return out;
}

std::pair<RotationDataset, RotationDataset> build_rotation_dataset(
    const IdxTensor& images, const RotationConfig& config) {
  if (images.dims.size() != 3) {
    throw std::invalid_argument("image tensor must have shape [count, rows, cols]");
  }
  if (config.n_train < 0 || config.n_test < 0) {
    throw std::invalid_argument("sample counts must be nonnegative");
  }
  if (!(config.angle_lo >= -180.0 && config.angle_hi <= 180.0 &&
        config.angle_lo <= config.angle_hi)) {
    throw std::invalid_argument("angle range must satisfy -180 <= lo <= hi <= 180");
  }
  const std::size_t available = images.dims[0];
  const std::size_t wanted =
      static_cast<std::size_t>(config.n_train) + static_cast<std::size_t>(config.n_test);
  if (wanted > available) {
    throw std::invalid_argument("need " + std::to_string(wanted) +
                                " images, tensor has " + std::to_string(available));
  }
  std::vector<std::size_t> order(available);
  for (std::size_t i = 0; i < available; ++i) order[i] = i;
  Rng rng(derive_seed(config.seed, Stream::kSelection));
  for (std::size_t i = available; i-- > 1;) {
    std::swap(order[i], order[rng() % (i + 1)]);
  }
  const std::vector<std::size_t> train_idx(order.begin(),
                                           order.begin() + config.n_train);
  const std::vector<std::size_t> test_idx(order.begin() + config.n_train,
                                          order.begin() + wanted);
  const std::uint64_t rot = static_cast<std::uint64_t>(Stream::kRotation);
  return {make_split(images, train_idx, config.angle_lo, config.angle_hi,
                     derive_seed(config.seed, {rot, 0}), Split::kTrain),
          make_split(images, test_idx, config.angle_lo, config.angle_hi,
                     derive_seed(config.seed, {rot, 1}), Split::kTest)};
}

LearnedFilter learn_filter_features(const RotationDataset& train,
                                    const FilterConfig& config) {
  const Index pixels = train.X.cols();
  if (config.k <= 0 || pixels % config.k != 0) {
    throw std::invalid_argument("k = " + std::to_string(config.k) +
                                " does not divide the pixel count " +
                                std::to_string(pixels));
  }
  if (train.X.rows() == 0) throw std::invalid_argument("empty training set");
  const Index m = config.fit_samples > 0
                      ? std::min<Index>(config.fit_samples, train.X.rows())
                      : train.X.rows();
  LearnedFilter out;
  out.k = config.k;
  // Raw pixels are nonnegative, which leaves the relaxation unbounded, and
  // the linking equalities need nonnegative targets.
  out.pixel_mean = train.X.topRows(m).colwise().mean().transpose();
  out.label_shift = std::max(0.0, -train.y.head(m).minCoeff());
  Dataset data;
  data.k = config.k;
  data.X = train.X.topRows(m).rowwise() - out.pixel_mean.transpose();
  data.y = train.y.head(m).array() + out.label_shift;
  RelaxOptions options;
  options.solver = config.solver;
  out.fit = fit_amplified(data, config.trials, config.seed, options);
  out.w_hat = out.fit.best.w_hat;
  return out;
}

RowMatrix augment(const LearnedFilter& filter, const RowMatrix& X) {
  const Index pixels = X.cols();
  const Index b = filter.w_hat.size();
  if (b * filter.k != pixels || filter.pixel_mean.size() != pixels) {
    throw std::invalid_argument("augment: filter does not match image width");
  }
  RowMatrix out(X.rows(), pixels + filter.k);
  out.leftCols(pixels) = X;
  for (Index i = 0; i < X.rows(); ++i) {
    for (int j = 0; j < filter.k; ++j) {
      const double response =
          (X.row(i).segment(j * b, b) -
           filter.pixel_mean.segment(j * b, b).transpose())
              .dot(filter.w_hat);
      out(i, pixels + j) = std::max(response, 0.0);
    }
  }
  return out;
}

double select_lambda(const RowMatrix& X, const Eigen::VectorXd& y,
                     const std::vector<double>& lambdas,
                     double validation_fraction) {
  if (lambdas.empty()) throw std::invalid_argument("empty lambda grid");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw std::invalid_argument("validation fraction must lie in (0, 1)");
  }
  const Index n = X.rows();
  const Index n_val = std::max<Index>(
      1, static_cast<Index>(std::lround(validation_fraction * n)));
  if (n_val >= n) throw std::invalid_argument("too few samples for validation");
  const Index n_fit = n - n_val;
  const std::vector<RidgeModel> models =
      ridge_path(X.topRows(n_fit), y.head(n_fit), lambdas);
  double best_err = std::numeric_limits<double>::infinity();
  double best = lambdas.front();
  for (const RidgeModel& m : models) {
    const double err = rmse(ridge_predict(m, X.bottomRows(n_val)), y.tail(n_val));
    if (err < best_err) {
      best_err = err;
      best = m.lambda;
    }
  }
  return best;
}

MnistResult run_rotation_experiment(const RotationDataset& train,
                                    const RotationDataset& test,
                                    const MnistConfig& config) {
  if (train.X.cols() != test.X.cols()) {
    throw std::invalid_argument("train and test images differ in size");
  }
  MnistResult out;
  out.n_train = static_cast<int>(train.X.rows());
  out.n_test = static_cast<int>(test.X.rows());
  out.filter = learn_filter_features(train, config.filter);

  out.lambda_raw =
      select_lambda(train.X, train.y, config.lambdas, config.validation_fraction);
  const RidgeModel raw = ridge_fit(train.X, train.y, out.lambda_raw);
  out.rmse_raw = rmse(ridge_predict(raw, test.X), test.y);

  const RowMatrix aug_train = augment(out.filter, train.X);
  const RowMatrix aug_test = augment(out.filter, test.X);
  out.lambda_augmented = select_lambda(aug_train, train.y, config.lambdas,
                                       config.validation_fraction);
  const RidgeModel aug = ridge_fit(aug_train, train.y, out.lambda_augmented);
  out.rmse_augmented = rmse(ridge_predict(aug, aug_test), test.y);
  return out;
}

std::optional<MnistFiles> find_mnist_files(const std::string& dir) {
  namespace fs = std::filesystem;
  auto pick = [&](const char* dashed, const char* dotted) -> std::optional<std::string> {
    for (const char* name : {dashed, dotted}) {
      const fs::path p = fs::path(dir) / name;
      std::error_code ec;
      if (fs::is_regular_file(p, ec)) return p.string();
    }
    return std::nullopt;
  };
  const auto ti = pick("train-images-idx3-ubyte", "train-images.idx3-ubyte");
  const auto tl = pick("train-labels-idx1-ubyte", "train-labels.idx1-ubyte");
  const auto vi = pick("t10k-images-idx3-ubyte", "t10k-images.idx3-ubyte");
  const auto vl = pick("t10k-labels-idx1-ubyte", "t10k-labels.idx1-ubyte");
  if (!ti || !tl || !vi || !vl) return std::nullopt;
  return MnistFiles{*ti, *tl, *vi, *vl};
}

std::string default_data_dir() {
  const char* env = std::getenv("CNNRELAX_DATA_DIR");
  return env != nullptr ? std::string(env) : std::string();
}

MnistResult run_mnist_experiment(const MnistFiles& files,
                                 const MnistConfig& config) {
  const IdxTensor train_images = read_idx_file(files.train_images);
  const IdxTensor test_images = read_idx_file(files.test_images);
  auto check_labels = [](const IdxTensor& images, const std::string& path) {
    const IdxTensor labels = read_idx_file(path);
    if (labels.dims.empty() || images.dims.empty() ||
        labels.dims[0] != images.dims[0]) {
      throw IoError(path + ": label count does not match the images");
    }
  };
  check_labels(train_images, files.train_labels);
  check_labels(test_images, files.test_labels);
  RotationConfig train_cfg = config.rotation;
  train_cfg.n_test = 0;
  RotationConfig test_cfg = config.rotation;
  test_cfg.n_train = 0;
  test_cfg.seed = derive_seed(config.rotation.seed, {1});
  const RotationDataset train = build_rotation_dataset(train_images, train_cfg).first;
  const RotationDataset test = build_rotation_dataset(test_images, test_cfg).second;
  return run_rotation_experiment(train, test, config);
}

std::string format_results_csv(const MnistResult& result) {
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "experiment,rmse\nls_raw_pixels,%.17g\nls_learned_filter,%.17g\n",
                result.rmse_raw, result.rmse_augmented);
  return buf;
}

}  // namespace cnnrelax
