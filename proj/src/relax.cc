#include "cnnrelax/relax.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cnnrelax/random.h"

namespace cnnrelax {
namespace {

using Eigen::Index;
using Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

SparseMatrix from_triplets(Index rows, Index cols,
                           const std::vector<Triplet>& entries) {
  SparseMatrix out(rows, cols);
  out.setFromTriplets(entries.begin(), entries.end());
  out.prune(0.0);
  out.makeCompressed();
  return out;
}

void check_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be a finite nonnegative number");
  }
}

// k = 1, beta = 0: min r^T w s.t. X w <= y.
void build_single_lp(const Dataset& data, const VectorXd& r,
                     RelaxationInstance& out) {
  const Index n = data.n();
  const Index d = data.d();
  out.var_map = {0, d, d, 0};
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(n * d));
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < d; ++c) entries.emplace_back(i, c, data.X(i, c));
  }
  ConvexProgram& p = out.program;
  p = ConvexProgram::empty(d, n, 0);
  p.c = r;
  p.a_ineq = from_triplets(n, d, entries);
  p.b_ineq = data.y;
}

// Variables [w, z]; rows X_ij w - z_ij <= 0 then -z_ij <= 0.
void build_slack_program(const Dataset& data, const VectorXd& r, double beta,
                         RelaxationInstance& out) {
  const Index n = data.n();
  const Index k = data.k;
  const Index b = data.filter_size();
  const Index nz = n * k;
  const Index m = b + nz;
  out.var_map = {0, b, b, nz};

  std::vector<Triplet> ineq;
  ineq.reserve(static_cast<std::size_t>(nz * (b + 2)));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < k; ++j) {
      const Index row = i * k + j;
      for (Index c = 0; c < b; ++c) {
        ineq.emplace_back(row, c, data.X(i, j * b + c));
      }
      ineq.emplace_back(row, b + row, -1.0);
      ineq.emplace_back(nz + row, b + row, -1.0);
    }
  }

  ConvexProgram& p = out.program;
  p = ConvexProgram::empty(m, 2 * nz, beta > 0.0 ? 0 : n);
  p.a_ineq = from_triplets(2 * nz, m, ineq);

  if (beta > 0.0) {
    // 1/2 sum_i (sum_j z_ij - y_i)^2 = 1/2 z^T Q z - sum_ij y_i z_ij + const
    std::vector<Triplet> q;
    q.reserve(static_cast<std::size_t>(n * k * k));
    p.c.head(b) = beta * r;
    for (Index i = 0; i < n; ++i) {
      for (Index j1 = 0; j1 < k; ++j1) {
        p.c(b + i * k + j1) = -data.y(i);
        for (Index j2 = 0; j2 < k; ++j2) {
          q.emplace_back(b + i * k + j1, b + i * k + j2, 1.0);
        }
      }
    }
    p.q = from_triplets(m, m, q);
  } else {
    std::vector<Triplet> eq;
    eq.reserve(static_cast<std::size_t>(nz));
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < k; ++j) eq.emplace_back(i, b + i * k + j, 1.0);
    }
    p.c.head(b) = r;
    p.a_eq = from_triplets(n, m, eq);
    p.b_eq = data.y;
  }
}

double safe_residual(const Dataset& data, const VectorXd& w) {
  if (w.size() != data.filter_size() || !w.allFinite()) {
    return std::numeric_limits<double>::infinity();
  }
  return residual(data, w);
}

TrialRecord record_of(const FitResult& fit, const VectorXd* w_star) {
  TrialRecord rec;
  rec.seed = fit.trial_seed;
  rec.status = fit.report.status;
  rec.train_residual = fit.train_residual;
  rec.l2_error = w_star != nullptr && fit.w_hat.size() == w_star->size()
                     ? (fit.w_hat - *w_star).norm()
                     : std::numeric_limits<double>::quiet_NaN();
  return rec;
}

RecoveryOutcome select_best(std::vector<FitResult> fits,
                            const RelaxOptions& options,
                            const VectorXd* w_star) {
  RecoveryOutcome out;
  out.trials.reserve(fits.size());
  int best = -1;
  for (std::size_t t = 0; t < fits.size(); ++t) {
    out.trials.push_back(record_of(fits[t], w_star));
    if (!fits[t].ok()) continue;
    if (best < 0 || fits[t].train_residual < fits[best].train_residual) {
      best = static_cast<int>(t);
    }
  }
  if (best < 0) {
    throw AllTrialsFailed("all " + std::to_string(fits.size()) +
                          " relaxation trials failed to solve");
  }
  out.best = std::move(fits[best]);
  if (w_star != nullptr) {
    const Assessment a = assess(out.best.w_hat, *w_star, options.tau);
    out.l2_error = a.l2_error;
    out.rel_error = a.rel_error;
    out.success = a.success;
  } else {
    out.l2_error = out.rel_error = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace

RelaxationInstance build(const Dataset& dataset, double beta,
                         const Eigen::VectorXd& r) {
  validate_dataset(dataset);
  check_beta(beta);
  if (r.size() != dataset.filter_size()) {
    throw std::invalid_argument("perturbation length " +
                                std::to_string(r.size()) +
                                " differs from filter size " +
                                std::to_string(dataset.filter_size()));
  }
  RelaxationInstance out;
  out.variant = dataset.k == 1 ? Variant::kSingleNeuron : Variant::kMultiNeuron;
  out.beta = beta;
  out.r = r;
  if (dataset.k == 1 && beta == 0.0) {
    build_single_lp(dataset, r, out);
  } else {
    build_slack_program(dataset, r, beta, out);
  }
  return out;
}

Eigen::VectorXd draw_perturbation(int size, std::uint64_t seed) {
  Rng rng(seed);
  return gaussian_vector(rng, size);
}

std::uint64_t trial_seed(std::uint64_t seed, int index) {
  return derive_seed(seed, {static_cast<std::uint64_t>(Stream::kPerturbation),
                            static_cast<std::uint64_t>(index)});
}

FitResult fit_with_perturbation(const Dataset& dataset, double beta,
                                const Eigen::VectorXd& r,
                                const SolverOptions& solver) {
  const RelaxationInstance inst = build(dataset, beta, r);
  FitResult out;
  out.r_used = r;
  // The multipliers of the finite-beta program are O(beta), so an absolute
  // tolerance has to shrink with beta to pin down w.
  SolverOptions options = solver;
  if (beta > 0.0 && beta < 1.0) {
    options.tol = std::max(kMinTolerance, solver.tol * beta);
  }
  out.report = solve(inst.program, options);
  const VarMap& vm = inst.var_map;
  if (out.report.x.size() == inst.program.num_vars()) {
    out.w_hat = out.report.x.segment(vm.w_offset, vm.w_size);
    out.z_hat = vm.z_size > 0 ? VectorXd(out.report.x.segment(vm.z_offset,
                                                              vm.z_size))
                              : VectorXd(dataset.y);
  } else {
    out.w_hat = VectorXd::Zero(vm.w_size);
  }
  out.train_residual = safe_residual(dataset, out.w_hat);
  return out;
}

FitResult fit(const Dataset& dataset, double beta, std::uint64_t seed,
              const SolverOptions& solver) {
  FitResult out = fit_with_perturbation(
      dataset, beta, draw_perturbation(dataset.filter_size(), seed), solver);
  out.trial_seed = seed;
  return out;
}

Assessment assess(const Eigen::VectorXd& w_hat, const Eigen::VectorXd& w_star,
                  double tau) {
  if (w_hat.size() != w_star.size()) {
    throw std::invalid_argument("filter lengths differ");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  Assessment out;
  const double norm_star = w_star.norm();
  out.l2_error = (w_hat - w_star).norm();
  out.rel_error = norm_star > 0.0
                      ? out.l2_error / norm_star
                      : std::numeric_limits<double>::infinity();
  out.success = out.l2_error <= tau * (1.0 + norm_star);
  return out;
}

RecoveryOutcome fit_amplified(const Dataset& dataset, int num_trials,
                              std::uint64_t seed, const RelaxOptions& options,
                              const Eigen::VectorXd* w_star) {
  if (num_trials < 1) throw std::invalid_argument("num_trials must be >= 1");
  validate_dataset(dataset);
  std::vector<FitResult> fits(static_cast<std::size_t>(num_trials));
  std::vector<std::string> errors(fits.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < num_trials; ++t) {
    try {
      fits[t] = fit(dataset, options.beta, trial_seed(seed, t), options.solver);
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw std::invalid_argument(e);
  }
  return select_best(std::move(fits), options, w_star);
}

RecoveryOutcome fit_amplified_with(
    const Dataset& dataset, const std::vector<Eigen::VectorXd>& perturbations,
    const RelaxOptions& options, const Eigen::VectorXd* w_star) {
  if (perturbations.empty()) {
    throw std::invalid_argument("at least one perturbation is required");
  }
  std::vector<FitResult> fits;
  fits.reserve(perturbations.size());
  for (std::size_t t = 0; t < perturbations.size(); ++t) {
    fits.push_back(fit_with_perturbation(dataset, options.beta,
                                         perturbations[t], options.solver));
    fits.back().trial_seed = t;
  }
  return select_best(std::move(fits), options, w_star);
}

Eigen::VectorXd pseudoinverse_recovery(const Dataset& dataset) {
  validate_dataset(dataset);
  if (dataset.k != 1) {
    throw std::invalid_argument(
        "pseudoinverse recovery needs a single neuron (k = 1)");
  }
  std::vector<Index> rows;
  for (Index i = 0; i < dataset.n(); ++i) {
    if (dataset.y(i) > 0.0) rows.push_back(i);
  }
  if (rows.empty()) {
    throw std::invalid_argument("no strictly positive labels");
  }
  Eigen::MatrixXd xs(static_cast<Index>(rows.size()), dataset.d());
  VectorXd ys(static_cast<Index>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    xs.row(static_cast<Index>(t)) = dataset.X.row(rows[t]);
    ys(static_cast<Index>(t)) = dataset.y(rows[t]);
  }
  return least_squares(xs, ys);
}

}  // namespace cnnrelax
