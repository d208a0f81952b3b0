#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cnnrelax/baseline.h"
#include "cnnrelax/certify.h"
#include "cnnrelax/errors.h"
#include "cnnrelax/idx.h"
#include "cnnrelax/mnist.h"
#include "cnnrelax/model.h"
#include "cnnrelax/random.h"
#include "cnnrelax/relax.h"
#include "cnnrelax/serialize.h"
#include "cnnrelax/sweep.h"

namespace cnnrelax {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --config files are JSON objects whose keys are long flag names without the
// leading dashes, applied to the invoked subcommand. Flags given on the
// command line take precedence.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    Json out = Json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        std::vector<std::string> values = opt->as<std::vector<std::string>>();
        out[name] = values.size() == 1 ? Json(values.front()) : Json(values);
      } else if (default_also && !opt->get_default_str().empty()) {
        out[name] = opt->get_default_str();
      }
    }
    return out.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    Json root;
    try {
      root = Json::parse(input);
    } catch (const Json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<std::string> parents;
    for (const CLI::App* sub : root_->get_subcommands()) parents.push_back(sub->get_name());
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : root.items()) {
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const Json& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  const CLI::App* root_;

  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config values must be scalars or arrays of scalars");
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_file(path, text);
  }
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::string out;
  char buf[32];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.10g", i ? " " : "", v(i));
    out += buf;
  }
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& values) {
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

// The planted filter when the dataset is exactly the one `gen` writes for its
// recorded seed.
std::optional<Eigen::VectorXd> planted_truth(const LoadedDataset& loaded) {
  const Dataset& d = loaded.data;
  const auto [model, data] = sample_planted(d.n(), d.d(), d.k, loaded.seed);
  if (data.X == d.X && data.y == d.y) return model.w_star;
  return std::nullopt;
}

std::optional<Eigen::VectorXd> reference_filter(const LoadedDataset& loaded,
                                                const std::vector<double>& given) {
  if (!given.empty()) {
    if (static_cast<int>(given.size()) != loaded.data.filter_size()) {
      throw UsageError("--w-star needs " + std::to_string(loaded.data.filter_size()) +
                       " values");
    }
    return to_vector(given);
  }
  return planted_truth(loaded);
}

SolverOptions solver_options(double tol, int max_iter) {
  SolverOptions s;
  s.tol = tol;
  s.max_iter = max_iter;
  return s;
}

struct GenArgs {
  int n = 0;
  int d = 0;
  int k = 1;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  validate_shape(a.n, a.d, a.k);
  const auto [model, data] = sample_planted(a.n, a.d, a.k, a.seed);
  write_output(a.out, format_dataset_csv(data, a.seed));
  return kExitOk;
}

struct FitArgs {
  std::string in;
  std::string method = "relax";
  double beta = 0.0;
  int trials = 1;
  std::uint64_t seed = 0;
  double tau = 1e-4;
  double tol = 1e-8;
  int max_iter = 200;
  double step = 0.0;
  int gd_iters = 5000;
  double init_scale = -1.0;
  std::vector<double> w_star;
  bool json = false;
};

int run_fit(const FitArgs& a) {
  const Method method = parse_method(a.method);
  const LoadedDataset loaded = load_dataset(a.in);
  const std::optional<Eigen::VectorXd> truth = reference_filter(loaded, a.w_star);
  const Eigen::VectorXd* w_star = truth ? &*truth : nullptr;

  if (method == Method::kRelaxation) {
    RelaxOptions options;
    options.beta = a.beta;
    options.tau = a.tau;
    options.solver = solver_options(a.tol, a.max_iter);
    RecoveryOutcome outcome;
    try {
      outcome = fit_amplified(loaded.data, a.trials, a.seed, options, w_star);
    } catch (const AllTrialsFailed& e) {
      throw SolverFailure(e.what());
    }
    if (a.json) {
      std::cout << to_json(outcome).dump(2) << "\n";
    } else {
      std::cout << "status " << to_string(outcome.best.report.status) << "\n"
                << "w_hat " << format_vector(outcome.best.w_hat) << "\n"
                << "train_residual " << outcome.best.train_residual << "\n";
      if (w_star) {
        std::cout << "l2_error " << outcome.l2_error << "\n"
                  << "success " << (outcome.success ? "true" : "false") << "\n";
      }
    }
    return kExitOk;
  }

  std::optional<GdResult> best;
  for (int t = 0; t < a.trials; ++t) {
    GdConfig config;
    config.step_size = a.step;
    config.max_iters = a.gd_iters;
    config.init_scale = a.init_scale;
    config.seed = a.trials == 1 ? a.seed : trial_seed(a.seed, t);
    GdResult r = gd_fit(loaded.data, config);
    if (r.status == GdStatus::kDiverged) continue;
    if (!best || r.final_loss < best->final_loss) best = std::move(r);
  }
  if (!best) throw SolverFailure("gradient descent diverged on every restart");
  Json out = to_json(*best);
  if (w_star) {
    const Assessment as = assess(best->w_hat, *w_star, a.tau);
    out["l2_error"] = as.l2_error;
    out["rel_error"] = as.rel_error;
    out["success"] = as.success;
  }
  if (a.json) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "status " << to_string(best->status) << "\n"
              << "w_hat " << format_vector(best->w_hat) << "\n"
              << "train_residual " << best->final_loss << "\n";
    if (w_star) std::cout << "l2_error " << out["l2_error"].get<double>() << "\n";
  }
  return kExitOk;
}

struct CertifyArgs {
  std::string in;
  std::vector<double> r;
  std::uint64_t seed = 0;
  std::vector<double> w_star;
  double tol = kConeTolerance;
  double solver_tol = 1e-8;
  int max_iter = 200;
  bool json = false;
};

int run_certify(const CertifyArgs& a) {
  const LoadedDataset loaded = load_dataset(a.in);
  const Dataset& data = loaded.data;
  const std::optional<Eigen::VectorXd> truth = reference_filter(loaded, a.w_star);
  if (!truth) {
    throw UsageError("no reference filter: pass --w-star or a dataset written by gen");
  }
  Eigen::VectorXd r;
  if (!a.r.empty()) {
    if (static_cast<int>(a.r.size()) != data.filter_size()) {
      throw UsageError("--r needs " + std::to_string(data.filter_size()) + " values");
    }
    r = to_vector(a.r);
  } else {
    // The perturbation of the first trial of `fit --seed`.
    r = draw_perturbation(data.filter_size(), trial_seed(a.seed, 0));
  }

  const ActiveSets sets = active_sets(data.X, *truth, data.k);
  const Certificate cert = certify_recovery(data, *truth, r, a.tol);
  const DualReport dual =
      dual_solve(data, r, solver_options(a.solver_tol, a.max_iter), &*truth);

  Json per_block = Json::array();
  for (int j = 0; j < data.k; ++j) per_block.push_back(singleton_fraction_for_block(sets, j));
  Json out{{"r", to_json(r)},
           {"w_star", to_json(*truth)},
           {"singleton_fraction", r1_singleton_fraction(sets)},
           {"singleton_fraction_per_block", std::move(per_block)},
           {"active_sets", to_json(sets)},
           {"certificate", to_json(cert)},
           {"dual", to_json(dual)}};
  if (a.json) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "verdict " << to_string(cert.verdict) << "\n"
              << "elastic_value " << cert.elastic_value << "\n"
              << "boundary_degenerate " << (cert.boundary_degenerate ? "true" : "false")
              << "\n"
              << "singleton_fraction " << r1_singleton_fraction(sets) << "\n"
              << "dual_status " << to_string(dual.status) << "\n"
              << "dual_objective " << dual.dual_objective << "\n"
              << "duality_gap " << dual.duality_gap << "\n";
  }
  if (cert.solver_status != SolveStatus::kOptimal || dual.status == DualStatus::kFailure) {
    throw SolverFailure("certificate or dual program was not solved");
  }
  return kExitOk;
}

struct SweepArgs {
  std::vector<int> n_values;
  std::vector<int> d_values;
  int k = 1;
  int trials = 100;
  std::vector<std::string> methods = {"relax", "gd"};
  double tau = 1e-4;
  std::uint64_t seed = 0;
  int amplify = 1;
  double beta = 0.0;
  int workers = 0;
  int gd_iters = 5000;
  double gd_step = 0.0;
  double tol = 1e-8;
  int max_iter = 200;
  std::string out;
  std::string json_path;
  bool heatmap = false;
  double threshold = 0.5;
};

int run_sweep(const SweepArgs& a) {
  GridSpec spec;
  spec.n_values = a.n_values;
  spec.d_values = a.d_values;
  spec.k = a.k;
  spec.trials = a.trials;
  spec.methods.clear();
  for (const std::string& m : a.methods) spec.methods.push_back(parse_method(m));
  spec.tau = a.tau;
  spec.master_seed = a.seed;
  spec.amplify = a.amplify;
  spec.beta = a.beta;
  spec.workers = a.workers;
  spec.gd.max_iters = a.gd_iters;
  spec.gd.step_size = a.gd_step;
  spec.solver = solver_options(a.tol, a.max_iter);
  validate(spec);

  const std::vector<PhaseCell> cells = run_grid(spec);
  write_output(a.out, format_csv(cells));
  if (a.heatmap) {
    for (Method m : spec.methods) {
      std::cerr << to_string(m) << "\n" << render_heatmap(cells, m);
    }
  }
  if (!a.json_path.empty()) {
    Json out{{"spec", to_json(spec)}, {"cells", Json::array()}, {"boundary", Json::object()}};
    for (const PhaseCell& c : cells) out["cells"].push_back(to_json(c));
    for (Method m : spec.methods) {
      Json points = Json::array();
      for (const BoundaryPoint& p : estimate_boundary(cells, a.threshold, m)) {
        points.push_back(Json{{"d", p.d}, {"n", p.n ? Json(*p.n) : Json(nullptr)}});
      }
      out["boundary"][std::string(to_string(m))] = std::move(points);
    }
    out["boundary_threshold"] = a.threshold;
    write_file(a.json_path, out.dump(2) + "\n");
  }
  return kExitOk;
}

struct MnistArgs {
  std::string data_dir;
  int n_train = 10000;
  int n_test = 5000;
  double angle_lo = -45.0;
  double angle_hi = 45.0;
  int k = 16;
  int trials = 6;
  int fit_samples = 2000;
  std::uint64_t seed = 0;
  std::vector<double> lambdas = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  double validation_fraction = 0.1;
  std::string out;
  bool json = false;
};

int run_mnist(const MnistArgs& a) {
  if (!(a.angle_lo >= -180.0 && a.angle_hi <= 180.0 && a.angle_lo <= a.angle_hi)) {
    throw UsageError("angles must satisfy -180 <= lo <= hi <= 180");
  }
  if (784 % a.k != 0) throw UsageError("--k must divide 784");
  const std::string dir = a.data_dir.empty() ? default_data_dir() : a.data_dir;
  if (dir.empty()) throw UsageError("pass --data-dir or set CNNRELAX_DATA_DIR");
  const std::optional<MnistFiles> files = find_mnist_files(dir);
  if (!files) throw IoError("the four MNIST IDX files were not found in " + dir);
  MnistConfig config;
  config.rotation.angle_lo = a.angle_lo;
  config.rotation.angle_hi = a.angle_hi;
  config.rotation.n_train = a.n_train;
  config.rotation.n_test = a.n_test;
  config.rotation.seed = a.seed;
  config.filter.k = a.k;
  config.filter.trials = a.trials;
  config.filter.fit_samples = a.fit_samples;
  config.filter.seed = derive_seed(a.seed, Stream::kPerturbation);
  config.lambdas = a.lambdas;
  config.validation_fraction = a.validation_fraction;

  MnistResult result;
  try {
    result = run_mnist_experiment(*files, config);
  } catch (const AllTrialsFailed& e) {
    throw SolverFailure(e.what());
  }
  write_output(a.out, format_results_csv(result));
  if (a.json) {
    Json out{{"rmse_raw", result.rmse_raw},
             {"rmse_augmented", result.rmse_augmented},
             {"lambda_raw", result.lambda_raw},
             {"lambda_augmented", result.lambda_augmented},
             {"n_train", result.n_train},
             {"n_test", result.n_test},
             {"k", result.filter.k},
             {"label_shift", result.filter.label_shift},
             {"w_hat", to_json(result.filter.w_hat)}};
    std::cerr << out.dump(2) << "\n";
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Convex relaxation for learning a ReLU convolution filter"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.set_config("--config", "", "JSON file of flag values (flags win)");
  app.allow_config_extras(CLI::config_extras_mode::error);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Write a planted dataset as CSV");
  gen_cmd->add_option("--n", gen.n, "Samples")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--d", gen.d, "Input dimension")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--k", gen.k, "Blocks")->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output path (default standard output)");

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a filter to a dataset");
  fit_cmd->add_option("--in", fit.in, "Dataset CSV")->required();
  fit_cmd->add_option("--method", fit.method, "relax or gd")
      ->check(CLI::IsMember({"relax", "gd"}))
      ->capture_default_str();
  fit_cmd->add_option("--beta", fit.beta, "Perturbation weight (0 = limit LP)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fit_cmd->add_option("--trials", fit.trials, "Perturbations (relax) or restarts (gd)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Seed")->capture_default_str();
  fit_cmd->add_option("--tau", fit.tau, "Success tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--tol", fit.tol, "Solver tolerance")
      ->check(CLI::Range(kMinTolerance, kMaxTolerance))
      ->capture_default_str();
  fit_cmd->add_option("--max-iter", fit.max_iter, "Solver iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--step", fit.step, "GD step size (0 = default)")->capture_default_str();
  fit_cmd->add_option("--gd-iters", fit.gd_iters, "GD iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--init-scale", fit.init_scale, "GD init scale (<0 = 1/sqrt(b))")
      ->capture_default_str();
  fit_cmd->add_option("--w-star", fit.w_star, "Reference filter")->delimiter(',');
  fit_cmd->add_flag("--json", fit.json, "Emit JSON");

  CertifyArgs cert;
  CLI::App* cert_cmd =
      app.add_subcommand("certify", "Active sets, cone condition and dual check");
  cert_cmd->add_option("--in", cert.in, "Dataset CSV")->required();
  cert_cmd->add_option("--r", cert.r, "Perturbation (default drawn from --seed)")
      ->delimiter(',');
  cert_cmd->add_option("--seed", cert.seed, "Seed for r")->capture_default_str();
  cert_cmd->add_option("--w-star", cert.w_star, "Reference filter")->delimiter(',');
  cert_cmd->add_option("--tol", cert.tol, "Cone membership tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cert_cmd->add_option("--solver-tol", cert.solver_tol, "Solver tolerance")
      ->check(CLI::Range(kMinTolerance, kMaxTolerance))
      ->capture_default_str();
  cert_cmd->add_option("--max-iter", cert.max_iter, "Solver iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cert_cmd->add_flag("--json", cert.json, "Emit JSON");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Phase-transition grid as CSV");
  sweep_cmd->add_option("--n", sweep.n_values, "Sample counts")->required()->delimiter(',');
  sweep_cmd->add_option("--d", sweep.d_values, "Dimensions")->required()->delimiter(',');
  sweep_cmd->add_option("--k", sweep.k, "Blocks")->check(CLI::PositiveNumber)->capture_default_str();
  sweep_cmd->add_option("--trials", sweep.trials, "Trials per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--methods", sweep.methods, "relax,gd")
      ->delimiter(',')
      ->check(CLI::IsMember({"relax", "gd"}));
  sweep_cmd->add_option("--tau", sweep.tau, "Success tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.seed, "Master seed")->capture_default_str();
  sweep_cmd->add_option("--amplify", sweep.amplify, "Perturbations per relax trial")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--beta", sweep.beta, "Perturbation weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--workers", sweep.workers, "Threads (0 = default)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--gd-iters", sweep.gd_iters, "GD iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--gd-step", sweep.gd_step, "GD step (0 = default)")->capture_default_str();
  sweep_cmd->add_option("--tol", sweep.tol, "Solver tolerance")
      ->check(CLI::Range(kMinTolerance, kMaxTolerance))
      ->capture_default_str();
  sweep_cmd->add_option("--max-iter", sweep.max_iter, "Solver iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "CSV path (default standard output)");
  sweep_cmd->add_option("--json", sweep.json_path, "JSON sidecar path");
  sweep_cmd->add_option("--threshold", sweep.threshold, "Boundary threshold in the sidecar")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sweep_cmd->add_flag("--heatmap", sweep.heatmap, "ASCII heatmap on standard error");

  MnistArgs mnist;
  CLI::App* mnist_cmd = app.add_subcommand("mnist", "Rotation-angle regression on MNIST");
  mnist_cmd->add_option("--data-dir", mnist.data_dir, "Directory of the IDX files");
  mnist_cmd->add_option("--n-train", mnist.n_train, "Training images")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mnist_cmd->add_option("--n-test", mnist.n_test, "Test images")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mnist_cmd->add_option("--angle-lo", mnist.angle_lo, "Lowest angle (degrees)")->capture_default_str();
  mnist_cmd->add_option("--angle-hi", mnist.angle_hi, "Highest angle (degrees)")->capture_default_str();
  mnist_cmd->add_option("--k", mnist.k, "Blocks per image")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mnist_cmd->add_option("--trials", mnist.trials, "Relaxation perturbations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mnist_cmd->add_option("--fit-samples", mnist.fit_samples, "Images given to the relaxation (0 = all)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  mnist_cmd->add_option("--seed", mnist.seed, "Seed")->capture_default_str();
  mnist_cmd->add_option("--lambdas", mnist.lambdas, "Ridge grid")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  mnist_cmd->add_option("--validation-fraction", mnist.validation_fraction,
                        "Share of train held out for lambda")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  mnist_cmd->add_option("--out", mnist.out, "CSV path (default standard output)");
  mnist_cmd->add_flag("--json", mnist.json, "Also print a JSON summary on standard error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (cert_cmd->parsed()) return run_certify(cert);
    if (sweep_cmd->parsed()) return run_sweep(sweep);
    if (mnist_cmd->parsed()) return run_mnist(mnist);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SchemaError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IdxError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace cnnrelax

int main(int argc, char** argv) { return cnnrelax::run(argc, argv); }
