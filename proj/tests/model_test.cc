#include "cnnrelax/model.h"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "gtest/gtest.h"

#include "cnnrelax/kernels.h"
#include "cnnrelax/random.h"
#include "test_util.h"

namespace cnnrelax {
namespace {

using testing::make_dataset;
using testing::vec;

bool bitwise_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

TEST(SamplePlanted, ShapesAndNonnegativeLabels) {
  const auto [model, data] = sample_planted(3, 4, 2, 7);
  EXPECT_EQ(data.X.rows(), 3);
  EXPECT_EQ(data.X.cols(), 4);
  EXPECT_EQ(data.y.size(), 3);
  EXPECT_EQ(model.w_star.size(), 2);
  EXPECT_EQ(model.filter_size(), 2);
  EXPECT_TRUE((data.y.array() >= 0.0).all());
}

TEST(SamplePlanted, SameSeedIsBitwiseIdentical) {
  const auto [m1, d1] = sample_planted(3, 4, 2, 7);
  const auto [m2, d2] = sample_planted(3, 4, 2, 7);
  EXPECT_EQ(std::memcmp(d1.X.data(), d2.X.data(), sizeof(double) * 12), 0);
  EXPECT_TRUE(bitwise_equal(d1.y, d2.y));
  EXPECT_TRUE(bitwise_equal(m1.w_star, m2.w_star));
  const auto [m3, d3] = sample_planted(3, 4, 2, 8);
  EXPECT_FALSE(bitwise_equal(m1.w_star, m3.w_star));
}

TEST(SamplePlanted, HalfOfSingleNeuronLabelsArePositive) {
  const auto [model, data] = sample_planted(1000, 10, 1, 1);
  const double frac = (data.y.array() > 0.0).cast<double>().mean();
  EXPECT_GE(frac, 0.44);
  EXPECT_LE(frac, 0.56);
}

TEST(SamplePlanted, LabelsMatchForwardMap) {
  const auto [model, data] = sample_planted(50, 12, 3, 11);
  EXPECT_TRUE(bitwise_equal(data.y, forward(data.X, model.w_star, 3)));
  EXPECT_LE(residual(data, model.w_star), 1e-20);
}

TEST(SamplePlanted, FeaturesDoNotDependOnFilterStream) {
  // Same features for different n prefixes: the row-major fill keeps the
  // first rows stable.
  const auto [m1, small] = sample_planted(5, 6, 1, 3);
  const auto [m2, large] = sample_planted(9, 6, 1, 3);
  EXPECT_TRUE(small.X == large.X.topRows(5));
  EXPECT_TRUE(m1.w_star == m2.w_star);
}

TEST(SamplePlanted, RejectsBadShapes) {
  EXPECT_THROW(sample_planted(3, 5, 2, 0), std::invalid_argument);
  EXPECT_THROW(sample_planted(0, 4, 2, 0), std::invalid_argument);
  EXPECT_THROW(sample_planted(3, -4, 2, 0), std::invalid_argument);
  EXPECT_THROW(sample_planted(3, 4, 0, 0), std::invalid_argument);
}

TEST(Forward, Examples) {
  const Dataset single = make_dataset({{1.0, -3.0}}, {0.0}, 1);
  EXPECT_DOUBLE_EQ(forward(single.X, vec({1.0, 0.0}), 1)(0), 1.0);
  const Dataset pair = make_dataset({{2.0, -1.0}}, {0.0}, 2);
  EXPECT_DOUBLE_EQ(forward(pair.X, vec({3.0}), 2)(0), 6.0);
  const auto [model, data] = sample_planted(20, 6, 3, 2);
  EXPECT_TRUE(forward(data.X, Eigen::VectorXd::Zero(2), 3).isZero(0.0));
}

TEST(Forward, RejectsWrongFilterLength) {
  const auto [model, data] = sample_planted(4, 6, 3, 2);
  EXPECT_THROW(forward(data.X, Eigen::VectorXd::Zero(3), 3),
               std::invalid_argument);
  EXPECT_THROW(residual(data, Eigen::VectorXd::Zero(6)), std::invalid_argument);
}

TEST(Forward, NonnegativeHomogeneousAndSingleBlockConsistent) {
  Rng rng(5);
  for (int k : {1, 2, 4}) {
    const auto [model, data] = sample_planted(40, 8, k, 100 + k);
    const Eigen::VectorXd w = gaussian_vector(rng, 8 / k);
    const Eigen::VectorXd out = forward(data.X, w, k);
    EXPECT_TRUE((out.array() >= 0.0).all());
    for (double c : {0.0, 0.5, 3.0}) {
      EXPECT_LE((forward(data.X, c * w, k) - c * out).lpNorm<Eigen::Infinity>(),
                1e-12 * (1.0 + out.lpNorm<Eigen::Infinity>()));
    }
  }
  const auto [model, data] = sample_planted(30, 5, 1, 9);
  const Eigen::VectorXd w = gaussian_vector(rng, 5);
  const Eigen::VectorXd expected = (data.X * w).cwiseMax(0.0);
  EXPECT_LE((forward(data.X, w, 1) - expected).lpNorm<Eigen::Infinity>(), 1e-14);
}

TEST(Residual, Examples) {
  const Dataset data = testing::two_point_fixture();
  EXPECT_DOUBLE_EQ(residual(data, vec({0.5})), 0.25);
  const Dataset zeros = make_dataset({{1.0, 2.0}, {3.0, -1.0}}, {0.0, 0.0}, 1);
  EXPECT_EQ(residual(zeros, vec({0.0, 0.0})), 0.0);
}

TEST(Kernels, ParallelMatchesSerialReference) {
  Rng rng(17);
  for (int n : {1, 255, 256, 257, 3000}) {
    for (int k : {1, 3}) {
      const auto [model, data] = sample_planted(n, 12, k, n * 7 + k);
      const Eigen::VectorXd w = gaussian_vector(rng, 12 / k);
      Eigen::VectorXd fp;
      Eigen::VectorXd fs;
      kernels::forward(data.X, w, k, fp);
      kernels::reference::forward(data.X, w, k, fs);
      EXPECT_TRUE(bitwise_equal(fp, fs));

      const Eigen::VectorXd y = data.y + 0.1 * gaussian_vector(rng, n);
      Eigen::VectorXd gp;
      Eigen::VectorXd gs;
      const double lp = kernels::loss_grad(data.X, y, w, k, &gp);
      const double ls = kernels::reference::loss_grad(data.X, y, w, k, &gs);
      EXPECT_NEAR(lp, ls, 1e-12 * (1.0 + ls));
      EXPECT_LE((gp - gs).lpNorm<Eigen::Infinity>(),
                1e-12 * (1.0 + gs.lpNorm<Eigen::Infinity>()));
    }
  }
}

TEST(Kernels, ResultDoesNotDependOnThreadCount) {
  const auto [model, data] = sample_planted(5000, 20, 4, 3);
  Rng rng(1);
  const Eigen::VectorXd w = gaussian_vector(rng, 5);
  const Eigen::VectorXd y = data.y.array() + 0.5;
  Eigen::VectorXd g1;
  Eigen::VectorXd g2;
  const double l1 = kernels::loss_grad(data.X, y, w, 4, &g1);
  double l2 = 0.0;
#pragma omp parallel num_threads(1)
  {
    l2 = kernels::loss_grad(data.X, y, w, 4, &g2);
  }
  EXPECT_EQ(l1, l2);
  EXPECT_TRUE(bitwise_equal(g1, g2));
}

TEST(DeriveSeed, PureAndTagSensitive) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {2}), derive_seed(2, {2}));
  EXPECT_NE(derive_seed(1, Stream::kFeatures), derive_seed(1, Stream::kFilter));
}

}  // namespace
}  // namespace cnnrelax
