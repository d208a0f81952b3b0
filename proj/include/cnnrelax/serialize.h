#ifndef CNNRELAX_SERIALIZE_H_
#define CNNRELAX_SERIALIZE_H_

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "json.hpp"

#include "cnnrelax/baseline.h"
#include "cnnrelax/certify.h"
#include "cnnrelax/model.h"
#include "cnnrelax/qp_solver.h"
#include "cnnrelax/relax.h"
#include "cnnrelax/sweep.h"

namespace cnnrelax {

using Json = nlohmann::ordered_json;

// Dataset text format:
//   # n=<n> d=<d> k=<k> seed=<seed>
//   y,x_1,...,x_d
//   <one sample per line, 17 significant digits>
struct LoadedDataset {
  Dataset data;
  std::uint64_t seed = 0;
};

std::string format_dataset_csv(const Dataset& dataset, std::uint64_t seed);
void save_dataset(const Dataset& dataset, std::uint64_t seed,
                  const std::string& path);
// Throws SchemaError naming the offending line.
LoadedDataset parse_dataset_csv(const std::string& text);
// Throws IoError if the file cannot be read.
LoadedDataset load_dataset(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

Json to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);

// Dense row-major arrays: {q, c, a_ineq, b_ineq, a_eq, b_eq}.
Json to_json(const ConvexProgram& program);
ConvexProgram program_from_json(const Json& j);

Json to_json(const SolveReport& report);
Json to_json(const FitResult& fit);
Json to_json(const RecoveryOutcome& outcome);
Json to_json(const Certificate& certificate);
Json to_json(const ActiveSets& sets);
Json to_json(const DualReport& dual);
Json to_json(const GdResult& result);
Json to_json(const GridSpec& spec);
Json to_json(const PhaseCell& cell);

}  // namespace cnnrelax

#endif  // CNNRELAX_SERIALIZE_H_
