#ifndef CNNRELAX_SWEEP_H_
#define CNNRELAX_SWEEP_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnnrelax/baseline.h"
#include "cnnrelax/qp_solver.h"

namespace cnnrelax {

enum class Method { kRelaxation, kGradientDescent };

// "relax" / "gd".
std::string_view to_string(Method method);
Method parse_method(std::string_view text);

struct GridSpec {
  std::vector<int> n_values;
  std::vector<int> d_values;
  int k = 1;
  int trials = 100;
  std::vector<Method> methods = {Method::kRelaxation, Method::kGradientDescent};
  double tau = 1e-4;
  std::uint64_t master_seed = 0;
  // Relaxation perturbations per trial; 1 is a single fit, more runs the
  // amplified fit with that many perturbations.
  int amplify = 1;
  double beta = 0.0;
  GdConfig gd;
  SolverOptions solver;
  // Thread count for run_grid; 0 leaves the OpenMP default.
  int workers = 0;
};

// Throws std::invalid_argument on empty or non-ascending axes, d values not
// divisible by k, or non-positive counts.
void validate(const GridSpec& spec);

struct PhaseCell {
  Method method = Method::kRelaxation;
  int k = 1;
  int n = 0;
  int d = 0;
  int trials = 0;      // trials attempted
  int trials_run = 0;  // trials that produced an estimate
  int failures = 0;    // solver failures or divergence, excluded from errors
  double min_err = 0.0;
  double mean_err = 0.0;
  double success_rate = 0.0;  // successes / trials
};

struct TrialOutcome {
  bool ok = false;
  double l2_error = 0.0;
  bool success = false;
};

std::uint64_t cell_trial_seed(std::uint64_t master_seed, Method method, int n,
                              int d, int trial);

// One trial: a fresh planted instance from cell_trial_seed and one run of the
// method on it.
TrialOutcome run_trial(const GridSpec& spec, Method method, int n, int d,
                       int trial);

// Cells ordered by method, then n, then d. Trials run concurrently; the result
// is identical to run_grid_serial.
std::vector<PhaseCell> run_grid(const GridSpec& spec);
std::vector<PhaseCell> run_grid_serial(const GridSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "method,k,n,d,trials,min_err,mean_err,success_rate";

// The trials column holds trials_run.
std::string format_csv(const std::vector<PhaseCell>& cells);
void write_csv(const std::vector<PhaseCell>& cells, const std::string& path);
std::vector<PhaseCell> parse_csv(const std::string& text);
std::vector<PhaseCell> read_csv(const std::string& path);

struct BoundaryPoint {
  int d = 0;
  std::optional<int> n;
};

// Smallest n with success_rate >= threshold for each d (ascending d).
std::vector<BoundaryPoint> estimate_boundary(
    const std::vector<PhaseCell>& cells, double threshold,
    Method method = Method::kRelaxation);

// Rows are n (largest first), columns are d; success_rate is bucketed into
// ten glyphs from ' ' to '@'.
std::string render_heatmap(const std::vector<PhaseCell>& cells, Method method);

}  // namespace cnnrelax

#endif  // CNNRELAX_SWEEP_H_
