#ifndef CNNRELAX_RANDOM_H_
#define CNNRELAX_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Core>

namespace cnnrelax {

// Named substreams split off a master seed, so that e.g. the perturbation can
// vary while the features stay fixed.
enum class Stream : std::uint64_t {
  kFeatures = 1,
  kFilter = 2,
  kPerturbation = 3,
  kInit = 4,
  kSweepCell = 5,
  kRotation = 6,
  kSelection = 7,
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Hashes a seed together with an ordered list of tags. Pure function of its
// arguments; used for every seed derivation in the library.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> tags);

inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream) {
  return derive_seed(seed, {static_cast<std::uint64_t>(stream)});
}

using Rng = std::mt19937_64;

// i.i.d. standard normal entries, filled in index order.
Eigen::VectorXd gaussian_vector(Rng& rng, Eigen::Index size);

// i.i.d. standard normal entries, filled row by row.
Eigen::MatrixXd gaussian_matrix(Rng& rng, Eigen::Index rows,
                                Eigen::Index cols);

}  // namespace cnnrelax

#endif  // CNNRELAX_RANDOM_H_
