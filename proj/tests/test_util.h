#ifndef CNNRELAX_TESTS_TEST_UTIL_H_
#define CNNRELAX_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <initializer_list>

#include <Eigen/Core>

#include "cnnrelax/model.h"

namespace cnnrelax::testing {

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  std::copy(values.begin(), values.end(), v.data());
  return v;
}

inline Dataset make_dataset(std::initializer_list<std::initializer_list<double>> rows,
                            std::initializer_list<double> y, int k) {
  Dataset data;
  data.k = k;
  data.X.resize(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) data.X(i, c++) = v;
    ++i;
  }
  data.y = vec(y);
  return data;
}

// X = [[1], [-1]], y = [1, 0]: the only filters fitting exactly are w = 1.
inline Dataset two_point_fixture() {
  return make_dataset({{1.0}, {-1.0}}, {1.0, 0.0}, 1);
}

}  // namespace cnnrelax::testing

#endif  // CNNRELAX_TESTS_TEST_UTIL_H_
