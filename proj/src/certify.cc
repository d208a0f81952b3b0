#include "cnnrelax/certify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cnnrelax/relax.h"

namespace cnnrelax {
namespace {

using Eigen::Index;
using Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SparseMatrix from_triplets(Index rows, Index cols,
                           const std::vector<Triplet>& entries) {
  SparseMatrix out(rows, cols);
  out.setFromTriplets(entries.begin(), entries.end());
  out.prune(0.0);
  out.makeCompressed();
  return out;
}

struct DualProgram {
  ConvexProgram program;
  Index lambda_size = 0;  // lambda occupies x[0, lambda_size)
  Index v_offset = 0;     // v occupies x[v_offset, v_offset + n)
};

// min y^T u  s.t.  X^T u = -r,  -u <= 0
DualProgram single_dual(const Dataset& data, const VectorXd& r) {
  const Index n = data.n();
  const Index d = data.d();
  std::vector<Triplet> eq;
  std::vector<Triplet> ineq;
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < d; ++c) eq.emplace_back(c, i, data.X(i, c));
    ineq.emplace_back(i, i, -1.0);
  }
  DualProgram out;
  out.program = ConvexProgram::empty(n, n, d);
  out.program.c = data.y;
  out.program.a_eq = from_triplets(d, n, eq);
  out.program.b_eq = -r;
  out.program.a_ineq = from_triplets(n, n, ineq);
  out.lambda_size = n;
  out.v_offset = 0;
  return out;
}

// Variables [lambda (i*k + j), v]:
// min y^T v  s.t.  sum X_ij^T lambda_ij = -r,  -lambda <= 0,  lambda_ij - v_i <= 0
DualProgram multi_dual(const Dataset& data, const VectorXd& r) {
  const Index n = data.n();
  const Index k = data.k;
  const Index b = data.filter_size();
  const Index nl = n * k;
  std::vector<Triplet> eq;
  std::vector<Triplet> ineq;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < k; ++j) {
      const Index col = i * k + j;
      for (Index c = 0; c < b; ++c) eq.emplace_back(c, col, data.X(i, j * b + c));
      ineq.emplace_back(col, col, -1.0);
      ineq.emplace_back(nl + col, col, 1.0);
      ineq.emplace_back(nl + col, nl + i, -1.0);
    }
  }
  DualProgram out;
  out.program = ConvexProgram::empty(nl + n, 2 * nl, b);
  out.program.c.tail(n) = data.y;
  out.program.a_eq = from_triplets(b, nl + n, eq);
  out.program.b_eq = -r;
  out.program.a_ineq = from_triplets(2 * nl, nl + n, ineq);
  out.lambda_size = nl;
  out.v_offset = nl;
  return out;
}

}  // namespace

ActiveSets active_sets(const RowMatrix& X, const Eigen::VectorXd& w_star,
                       int k) {
  if (k <= 0 || X.cols() % k != 0 || w_star.size() != X.cols() / k) {
    throw std::invalid_argument("active_sets: filter length must equal d/k");
  }
  const Index b = w_star.size();
  ActiveSets out;
  out.S.assign(static_cast<std::size_t>(k), {});
  out.R.assign(static_cast<std::size_t>(X.rows()), {});
  for (Index i = 0; i < X.rows(); ++i) {
    for (int j = 0; j < k; ++j) {
      if (X.row(i).segment(j * b, b).dot(w_star) > 0.0) {
        out.S[j].push_back(static_cast<int>(i));
        out.R[i].push_back(j);
      }
    }
  }
  return out;
}

ActiveSets sets_from_s(const std::vector<std::vector<int>>& s, int n) {
  ActiveSets out;
  out.S = s;
  out.R.assign(static_cast<std::size_t>(n), {});
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (int i : s[j]) {
      if (i < 0 || i >= n) throw std::invalid_argument("sample index out of range");
      out.R[i].push_back(static_cast<int>(j));
    }
  }
  for (auto& row : out.R) std::sort(row.begin(), row.end());
  return out;
}

ActiveSets sets_from_r(const std::vector<std::vector<int>>& r, int k) {
  ActiveSets out;
  out.R = r;
  out.S.assign(static_cast<std::size_t>(k), {});
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (int j : r[i]) {
      if (j < 0 || j >= k) throw std::invalid_argument("block index out of range");
      out.S[j].push_back(static_cast<int>(i));
    }
  }
  for (auto& col : out.S) std::sort(col.begin(), col.end());
  return out;
}

std::vector<Generator> cone_generators(const Dataset& dataset,
                                       const ActiveSets& sets) {
  if (sets.num_samples() != dataset.n()) {
    throw std::invalid_argument("active sets were built for another dataset");
  }
  std::vector<Generator> out;
  for (int i = 0; i < dataset.n(); ++i) {
    if (sets.R[i].empty()) continue;
    Generator gen;
    gen.sample = i;
    gen.g = VectorXd::Zero(dataset.filter_size());
    for (int j : sets.R[i]) gen.g += dataset.block(i, j).transpose();
    out.push_back(std::move(gen));
  }
  return out;
}

std::string_view to_string(ConeVerdict verdict) {
  switch (verdict) {
    case ConeVerdict::kInside: return "inside";
    case ConeVerdict::kOutside: return "outside";
    case ConeVerdict::kIndeterminate: return "indeterminate";
  }
  return "unknown";
}

Certificate check_cone_condition(const std::vector<Eigen::VectorXd>& generators,
                                 const Eigen::VectorXd& target, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const Index dim = target.size();
  const Index m = static_cast<Index>(generators.size());
  for (const VectorXd& g : generators) {
    if (g.size() != dim) {
      throw std::invalid_argument("generator length differs from target");
    }
  }
  // Variables [v (m), e+ (dim), e- (dim)], all nonnegative.
  const Index nv = m + 2 * dim;
  std::vector<Triplet> eq;
  std::vector<Triplet> ineq;
  for (Index i = 0; i < m; ++i) {
    for (Index c = 0; c < dim; ++c) eq.emplace_back(c, i, generators[i](c));
  }
  for (Index c = 0; c < dim; ++c) {
    eq.emplace_back(c, m + c, 1.0);
    eq.emplace_back(c, m + dim + c, -1.0);
  }
  for (Index t = 0; t < nv; ++t) ineq.emplace_back(t, t, -1.0);
  ConvexProgram p = ConvexProgram::empty(nv, nv, dim);
  p.c.tail(2 * dim).setOnes();
  p.a_eq = from_triplets(dim, nv, eq);
  p.b_eq = target;
  p.a_ineq = from_triplets(nv, nv, ineq);

  Certificate out;
  const SolveReport report = solve(p);
  out.solver_status = report.status;
  if (!report.optimal()) {
    out.verdict = ConeVerdict::kIndeterminate;
    out.elastic_value = kNaN;
    out.equality_residual = kNaN;
    out.min_coefficient = kNaN;
    return out;
  }
  out.coefficients = report.x.head(m);
  out.elastic_value = std::max(0.0, report.x.tail(2 * dim).sum());
  VectorXd combo = VectorXd::Zero(dim);
  for (Index i = 0; i < m; ++i) combo += out.coefficients(i) * generators[i];
  out.equality_residual = (combo - target).lpNorm<Eigen::Infinity>();
  out.min_coefficient = m > 0 ? out.coefficients.minCoeff() : 0.0;
  out.exists = out.elastic_value <= tol;
  out.verdict = out.exists ? ConeVerdict::kInside : ConeVerdict::kOutside;
  out.boundary_degenerate =
      out.elastic_value >= tol / 10.0 && out.elastic_value <= 10.0 * tol;
  return out;
}

Certificate check_cone_condition(const std::vector<Generator>& generators,
                                 const Eigen::VectorXd& target, double tol) {
  std::vector<VectorXd> vecs;
  std::vector<int> samples;
  vecs.reserve(generators.size());
  for (const Generator& g : generators) {
    vecs.push_back(g.g);
    samples.push_back(g.sample);
  }
  Certificate out = check_cone_condition(vecs, target, tol);
  out.samples = std::move(samples);
  return out;
}

Certificate certify_recovery(const Dataset& dataset,
                             const Eigen::VectorXd& w_star,
                             const Eigen::VectorXd& r, double tol) {
  validate_dataset(dataset);
  if (r.size() != dataset.filter_size()) {
    throw std::invalid_argument("perturbation length differs from filter size");
  }
  const ActiveSets sets = active_sets(dataset.X, w_star, dataset.k);
  return check_cone_condition(cone_generators(dataset, sets), -r, tol);
}

std::string_view to_string(DualStatus status) {
  switch (status) {
    case DualStatus::kOptimal: return "optimal";
    case DualStatus::kInfeasible: return "infeasible";
    case DualStatus::kUnbounded: return "unbounded";
    case DualStatus::kFailure: return "failure";
  }
  return "unknown";
}

DualReport dual_solve(const Dataset& dataset, const Eigen::VectorXd& r,
                      const SolverOptions& solver,
                      const Eigen::VectorXd* w_star) {
  validate_dataset(dataset);
  if (r.size() != dataset.filter_size()) {
    throw std::invalid_argument("perturbation length differs from filter size");
  }
  const Index n = dataset.n();
  const Index k = dataset.k;
  const DualProgram dual =
      k == 1 ? single_dual(dataset, r) : multi_dual(dataset, r);
  const SolveReport dr = solve(dual.program, solver);

  DualReport out;
  switch (dr.status) {
    case SolveStatus::kOptimal: out.status = DualStatus::kOptimal; break;
    case SolveStatus::kPrimalInfeasible: out.status = DualStatus::kInfeasible; break;
    case SolveStatus::kDualUnbounded: out.status = DualStatus::kUnbounded; break;
    default: out.status = DualStatus::kFailure; break;
  }
  out.dual_objective = kNaN;
  out.duality_gap = kNaN;
  out.complementarity = kNaN;
  if (out.status == DualStatus::kOptimal) {
    out.dual_objective = -dr.objective;
    out.lambda = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                Eigen::Dynamic, Eigen::RowMajor>>(
        dr.x.data(), n, k);
    out.v = dr.x.segment(dual.v_offset, n);
  }

  const FitResult primal = fit_with_perturbation(dataset, 0.0, r, solver);
  out.primal_status = primal.report.status;
  out.primal_objective = primal.report.optimal() ? primal.report.objective : kNaN;
  out.w_primal = primal.w_hat;
  if (out.status != DualStatus::kOptimal || !primal.report.optimal()) {
    return out;
  }
  out.duality_gap = std::abs(out.primal_objective - out.dual_objective);

  // Complementary slackness of the two solutions, and the block structure
  // expected when the primal optimum is the reference filter.
  const Index b = dataset.filter_size();
  double comp = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < k; ++j) {
      const double response = dataset.block(i, j).dot(primal.w_hat);
      const double lam = out.lambda(i, j);
      if (k == 1) {
        comp = std::max(comp, std::abs(lam * (dataset.y(i) - response)));
      } else {
        const double z = primal.z_hat(i * k + j);
        comp = std::max(comp, std::abs(lam * (z - response)));
        comp = std::max(comp, std::abs((out.v(i) - lam) * z));
      }
    }
  }
  out.complementarity = comp;

  if (w_star != nullptr && w_star->size() == b &&
      assess(primal.w_hat, *w_star, 1e-4).success) {
    const ActiveSets sets = active_sets(dataset.X, *w_star, dataset.k);
    double worst = 0.0;
    for (Index i = 0; i < n; ++i) {
      std::vector<bool> active(static_cast<std::size_t>(k), false);
      for (int j : sets.R[i]) active[j] = true;
      for (Index j = 0; j < k; ++j) {
        const double lam = out.lambda(i, j);
        worst = std::max(worst, active[j] ? std::abs(lam - out.v(i))
                                          : std::abs(lam));
      }
    }
    out.structure_checked = true;
    out.structure_violation = worst;
  }
  return out;
}

double r1_singleton_fraction(const ActiveSets& sets) {
  if (sets.R.empty()) return 0.0;
  std::size_t count = 0;
  for (const auto& row : sets.R) count += row.size() == 1 ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(sets.R.size());
}

double singleton_fraction_for_block(const ActiveSets& sets, int block) {
  if (block < 0 || block >= sets.num_blocks()) {
    throw std::invalid_argument("block index out of range");
  }
  if (sets.R.empty()) return 0.0;
  std::size_t count = 0;
  for (const auto& row : sets.R) {
    count += row.size() == 1 && row.front() == block ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(sets.R.size());
}

}  // namespace cnnrelax
