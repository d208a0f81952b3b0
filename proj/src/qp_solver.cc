#include "cnnrelax/qp_solver.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

namespace cnnrelax {
namespace {

using Eigen::Index;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

double inf_norm(const VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

double max_abs(const SparseMatrix& m) {
  double out = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      out = std::max(out, std::abs(it.value()));
    }
  }
  return out;
}

KktSummary kkt_residuals(const SparseMatrix& q, const VectorXd& c,
                         const SparseMatrix& a, const VectorXd& b,
                         const SparseMatrix& e, const VectorXd& f,
                         const VectorXd& x, const VectorXd& lambda,
                         const VectorXd& nu, double tol) {
  KktSummary out;
  VectorXd stationarity = q * x + c;
  if (a.rows() > 0) stationarity += a.transpose() * lambda;
  if (e.rows() > 0) stationarity += e.transpose() * nu;
  out.dual_residual = inf_norm(stationarity);
  if (lambda.size() > 0) {
    out.dual_residual = std::max(out.dual_residual, -lambda.minCoeff());
  }
  if (a.rows() > 0) {
    const VectorXd slack = a * x - b;
    out.primal_residual = std::max(0.0, slack.maxCoeff());
    out.complementarity =
        (lambda.array() * slack.array()).abs().maxCoeff();
  }
  if (e.rows() > 0) {
    out.primal_residual = std::max(out.primal_residual, inf_norm(e * x - f));
  }
  out.pass = out.worst() <= tol;
  return out;
}

// ---------------------------------------------------------------------------
// Presolve: drop zero rows and exact duplicate rows.

struct Presolved {
  ConvexProgram program;
  std::vector<Index> ineq_rows;  // original index of each kept row
  std::vector<Index> eq_rows;
  bool infeasible = false;
};

using RowKey = std::pair<std::vector<std::pair<Index, double>>, double>;

// Returns the kept rows of (a, rhs). Sets *infeasible when a zero row cannot
// be satisfied (0 <= rhs for inequalities, 0 == rhs for equalities).
std::vector<Index> reduce_rows(const SparseMatrix& a, const VectorXd& rhs,
                               bool equality, double tol, bool* infeasible) {
  Eigen::SparseMatrix<double, Eigen::RowMajor> rows = a;
  rows.prune([](Index, Index, double v) { return v != 0.0; });
  std::map<RowKey, Index> seen;
  std::vector<Index> kept;
  for (Index i = 0; i < rows.rows(); ++i) {
    RowKey key;
    key.second = rhs(i);
    for (decltype(rows)::InnerIterator it(rows, i); it; ++it) {
      key.first.emplace_back(it.col(), it.value());
    }
    if (key.first.empty()) {
      const bool ok = equality ? std::abs(rhs(i)) <= tol : rhs(i) >= -tol;
      if (!ok) *infeasible = true;
      continue;
    }
    if (seen.emplace(std::move(key), i).second) kept.push_back(i);
  }
  return kept;
}

SparseMatrix select_rows(const SparseMatrix& a, const std::vector<Index>& rows) {
  std::vector<Index> position(a.rows(), -1);
  for (std::size_t r = 0; r < rows.size(); ++r) position[rows[r]] = r;
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const Index r = position[it.row()];
      if (r >= 0 && it.value() != 0.0) {
        triplets.emplace_back(r, it.col(), it.value());
      }
    }
  }
  SparseMatrix out(static_cast<Index>(rows.size()), a.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

VectorXd select_entries(const VectorXd& v, const std::vector<Index>& rows) {
  VectorXd out(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out(r) = v(rows[r]);
  return out;
}

Presolved presolve(const ConvexProgram& program, double tol) {
  Presolved out;
  out.ineq_rows = reduce_rows(program.a_ineq, program.b_ineq, false, tol,
                              &out.infeasible);
  out.eq_rows =
      reduce_rows(program.a_eq, program.b_eq, true, tol, &out.infeasible);
  out.program.q = program.q;
  out.program.c = program.c;
  out.program.a_ineq = select_rows(program.a_ineq, out.ineq_rows);
  out.program.b_ineq = select_entries(program.b_ineq, out.ineq_rows);
  out.program.a_eq = select_rows(program.a_eq, out.eq_rows);
  out.program.b_eq = select_entries(program.b_eq, out.eq_rows);
  return out;
}

// ---------------------------------------------------------------------------
// Quasi-definite KKT system
//
//   [ Q + dI    A^T          E^T ] [dx]   [rx]
//   [ A        -W^-1 - dI    0   ] [dl] = [rl]
//   [ E         0           -dI  ] [dn]   [rn]
//
// factored as L D L^T without pivoting. Inequality multipliers are eliminated
// first (which forms the normal equations implicitly), the primal variables
// follow in approximate-minimum-degree order, and each equality row is placed
// right after the last primal variable it touches.

class KktSystem {
 public:
  KktSystem(const SparseMatrix& q, const SparseMatrix& a,
            const SparseMatrix& e, double regularization)
      : q_(q), a_(a), e_(e), m_(q.rows()), p_(a.rows()), l_(e.rows()),
        reg_(regularization) {
    compute_ordering();
    assemble();
    ldlt_.analyzePattern(kkt_);
  }

  double regularization() const { return reg_; }
  void set_regularization(double reg) { reg_ = reg; }

  // w_inv = s / lambda. Returns false if the factorization fails or the
  // pivots do not have the quasi-definite sign pattern.
  bool factor(const VectorXd& w_inv) {
    w_inv_ = w_inv;
    double* values = kkt_.valuePtr();
    for (Index j = 0; j < m_; ++j) values[x_diag_[j]] = q_diag_(j) + reg_;
    for (Index i = 0; i < p_; ++i) values[l_diag_[i]] = -w_inv(i) - reg_;
    for (Index i = 0; i < l_; ++i) values[n_diag_[i]] = -reg_;
    ldlt_.factorize(kkt_);
    if (ldlt_.info() != Eigen::Success) return false;
    const VectorXd& d = ldlt_.vectorD();
    if (!d.allFinite()) return false;
    for (Index j = 0; j < m_; ++j) {
      if (!(d(new_index_[j]) > 0.0)) return false;
    }
    for (Index i = 0; i < p_ + l_; ++i) {
      if (!(d(new_index_[m_ + i]) < 0.0)) return false;
    }
    return true;
  }

  // Solves the unregularized system, using the regularized factorization
  // plus iterative refinement.
  void solve(const VectorXd& rx, const VectorXd& rl, const VectorXd& rn,
             VectorXd* dx, VectorXd* dl, VectorXd* dn) const {
    const Index total = m_ + p_ + l_;
    VectorXd rhs(total);
    rhs << rx, rl, rn;
    VectorXd sol = solve_regularized(rhs);
    const double scale = 1.0 + inf_norm(rhs);
    for (int it = 0; it < 4; ++it) {
      const VectorXd res = rhs - apply(sol);
      if (inf_norm(res) <= 1e-15 * scale) break;
      sol += solve_regularized(res);
    }
    *dx = sol.head(m_);
    *dl = sol.segment(m_, p_);
    *dn = sol.tail(l_);
  }

 private:
  void compute_ordering() {
    // Symmetric pattern of Q + A^T A + E^T E + I.
    auto pattern = [](const SparseMatrix& s) {
      SparseMatrix out = s;
      for (Index k = 0; k < out.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(out, k); it; ++it) it.valueRef() = 1.0;
      }
      return out;
    };
    SparseMatrix identity(m_, m_);
    identity.setIdentity();
    SparseMatrix pat = identity + pattern(q_);
    if (p_ > 0) {
      const SparseMatrix pa = pattern(a_);
      pat = pat + SparseMatrix(pa.transpose() * pa);
    }
    if (l_ > 0) {
      const SparseMatrix pe = pattern(e_);
      pat = pat + SparseMatrix(pe.transpose() * pe);
    }
    Eigen::AMDOrdering<int> amd;
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
    amd(pat, perm);

    std::vector<Index> rank(m_);
    for (Index pos = 0; pos < m_; ++pos) rank[perm.indices()(pos)] = pos;
    std::vector<Index> last(l_, -1);
    for (Index k = 0; k < e_.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(e_, k); it; ++it) {
        last[it.row()] = std::max(last[it.row()], rank[it.col()]);
      }
    }
    std::vector<std::vector<Index>> after(m_);
    std::vector<Index> trailing;
    for (Index i = 0; i < l_; ++i) {
      if (last[i] >= 0) {
        after[last[i]].push_back(i);
      } else {
        trailing.push_back(i);
      }
    }

    new_index_.assign(m_ + p_ + l_, 0);
    Index next = 0;
    for (Index i = 0; i < p_; ++i) new_index_[m_ + i] = next++;
    for (Index pos = 0; pos < m_; ++pos) {
      new_index_[perm.indices()(pos)] = next++;
      for (Index i : after[pos]) new_index_[m_ + p_ + i] = next++;
    }
    for (Index i : trailing) new_index_[m_ + p_ + i] = next++;
  }

  void assemble() {
    const Index total = m_ + p_ + l_;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(q_.nonZeros() + a_.nonZeros() + e_.nonZeros() + total);
    auto add = [&](Index row, Index col, double v) {
      Index r = new_index_[row];
      Index c = new_index_[col];
      if (r < c) std::swap(r, c);
      triplets.emplace_back(r, c, v);
    };
    q_diag_ = VectorXd::Zero(m_);
    for (Index k = 0; k < q_.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(q_, k); it; ++it) {
        if (it.row() == it.col()) {
          q_diag_(it.row()) += it.value();
        } else if (new_index_[it.row()] > new_index_[it.col()]) {
          add(it.row(), it.col(), it.value());
        }
      }
    }
    for (Index k = 0; k < a_.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(a_, k); it; ++it) {
        add(m_ + it.row(), it.col(), it.value());
      }
    }
    for (Index k = 0; k < e_.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(e_, k); it; ++it) {
        add(m_ + p_ + it.row(), it.col(), it.value());
      }
    }
    for (Index i = 0; i < total; ++i) add(i, i, 1.0);  // values set in factor()
    kkt_.resize(total, total);
    kkt_.setFromTriplets(triplets.begin(), triplets.end());
    kkt_.makeCompressed();

    auto diag_slot = [&](Index old) {
      const Index col = new_index_[old];
      const Index slot = kkt_.outerIndexPtr()[col];
      if (kkt_.innerIndexPtr()[slot] != col) {
        throw std::logic_error("KKT diagonal entry missing");
      }
      return slot;
    };
    x_diag_.resize(m_);
    l_diag_.resize(p_);
    n_diag_.resize(l_);
    for (Index j = 0; j < m_; ++j) x_diag_[j] = diag_slot(j);
    for (Index i = 0; i < p_; ++i) l_diag_[i] = diag_slot(m_ + i);
    for (Index i = 0; i < l_; ++i) n_diag_[i] = diag_slot(m_ + p_ + i);
  }

  VectorXd solve_regularized(const VectorXd& rhs) const {
    const Index total = rhs.size();
    VectorXd permuted(total);
    for (Index i = 0; i < total; ++i) permuted(new_index_[i]) = rhs(i);
    const VectorXd sol = ldlt_.solve(permuted);
    VectorXd out(total);
    for (Index i = 0; i < total; ++i) out(i) = sol(new_index_[i]);
    return out;
  }

  // Unregularized KKT matrix times v.
  VectorXd apply(const VectorXd& v) const {
    const auto vx = v.head(m_);
    const auto vl = v.segment(m_, p_);
    const auto vn = v.tail(l_);
    VectorXd out(v.size());
    VectorXd top = q_ * vx;
    if (p_ > 0) top += a_.transpose() * vl;
    if (l_ > 0) top += e_.transpose() * vn;
    out.head(m_) = top;
    if (p_ > 0) {
      out.segment(m_, p_) = a_ * vx - w_inv_.cwiseProduct(vl);
    }
    if (l_ > 0) out.tail(l_) = e_ * vx;
    return out;
  }

  const SparseMatrix& q_;
  const SparseMatrix& a_;
  const SparseMatrix& e_;
  Index m_;
  Index p_;
  Index l_;
  double reg_;
  std::vector<Index> new_index_;
  SparseMatrix kkt_;
  VectorXd q_diag_;
  VectorXd w_inv_;
  std::vector<Index> x_diag_;
  std::vector<Index> l_diag_;
  std::vector<Index> n_diag_;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>>
      ldlt_;
};

bool factor_with_retry(KktSystem& kkt, const VectorXd& w_inv) {
  for (int attempt = 0; attempt < 5; ++attempt) {
    if (kkt.factor(w_inv)) return true;
    kkt.set_regularization(kkt.regularization() * 100.0);
  }
  return false;
}

// Largest alpha in (0, 1] keeping v + alpha dv >= 0.
double max_step(const VectorXd& v, const VectorXd& dv) {
  double alpha = 1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

double max_step(double v, double dv) { return dv < 0.0 ? -v / dv : 1.0; }

// Shifts v into the positive orthant the way the standard self-dual
// initialization does.
void shift_positive(VectorXd& v) {
  if (v.size() == 0) return;
  const double alpha = -v.minCoeff();
  if (alpha >= 0.0) v.array() += 1.0 + alpha;
}

struct Direction {
  VectorXd dx, dl, dn, ds;
  double dtau = 0.0;
  double dkappa = 0.0;
};

SolveReport solve_presolved(const ConvexProgram& program,
                            const SolverOptions& options) {
  const Index m = program.num_vars();
  const Index p = program.num_ineq();
  const Index l = program.num_eq();
  const SparseMatrix& a = program.a_ineq;
  const VectorXd& b = program.b_ineq;
  const SparseMatrix& e = program.a_eq;
  const VectorXd& f = program.b_eq;
  const double tol = options.tol;

  // The objective is rescaled so its largest coefficient is O(1); multipliers
  // are mapped back before any residual is reported.
  const double cost_norm = std::max(inf_norm(program.c), max_abs(program.q));
  const double scale =
      cost_norm > 0.0 ? std::clamp(1.0 / cost_norm, 1e-6, 1e6) : 1.0;
  const VectorXd c = program.c * scale;
  const SparseMatrix q = program.q * scale;

  SolveReport best;
  best.x = VectorXd::Zero(m);
  best.lambda = VectorXd::Zero(p);
  best.nu = VectorXd::Zero(l);
  double best_worst = kInf;

  KktSystem kkt(q, a, e, options.regularization);
  VectorXd w_inv = VectorXd::Ones(p);
  if (!factor_with_retry(kkt, w_inv)) return best;

  VectorXd x, s, lam, nu, scratch_x, scratch_l, scratch_n;
  kkt.solve(VectorXd::Zero(m), b, f, &x, &scratch_l, &scratch_n);
  s = b - a * x;
  kkt.solve(-c, VectorXd::Zero(p), VectorXd::Zero(l), &scratch_x, &lam, &nu);
  shift_positive(s);
  shift_positive(lam);
  double tau = 1.0;
  double kappa = 1.0;

  auto finish = [&](SolveReport report, SolveStatus status, int iter) {
    report.status = status;
    report.iterations = iter;
    return report;
  };

  int stalled = 0;
  for (int iter = 0;; ++iter) {
    const VectorXd qx = q * x;
    const double xqx = x.dot(qx);
    VectorXd r1 = qx + c * tau;
    if (p > 0) r1 += a.transpose() * lam;
    if (l > 0) r1 += e.transpose() * nu;
    const VectorXd ax = a * x;
    const VectorXd r2 = ax + s - b * tau;
    const VectorXd r3 = e * x - f * tau;
    const double r4 = c.dot(x) + b.dot(lam) + f.dot(nu) + xqx / tau + kappa;

    // Current estimate in the caller's units.
    const VectorXd x_hat = x / tau;
    const VectorXd lam_hat = lam / tau;
    const VectorXd nu_hat = nu / tau;
    const KktSummary scaled =
        kkt_residuals(q, c, a, b, e, f, x_hat, lam_hat, nu_hat, tol);
    const VectorXd lam_out = lam_hat / scale;
    const VectorXd nu_out = nu_hat / scale;
    const KktSummary original = kkt_residuals(
        program.q, program.c, a, b, e, f, x_hat, lam_out, nu_out, tol);
    if (std::isfinite(original.worst()) && original.worst() < best_worst) {
      best_worst = original.worst();
      best.x = x_hat;
      best.lambda = lam_out;
      best.nu = nu_out;
    }
    if (scaled.pass && original.pass) {
      SolveReport report;
      report.x = x_hat;
      report.lambda = lam_out;
      report.nu = nu_out;
      return finish(report, SolveStatus::kOptimal, iter);
    }
    if (iter >= options.max_iter) {
      return finish(best, SolveStatus::kMaxIterations, iter);
    }

    // Infeasibility certificates from the homogeneous iterate.
    if (tau < kappa) {
      const double by = b.dot(lam) + f.dot(nu);
      if (by < 0.0) {
        VectorXd at = VectorXd::Zero(m);
        if (p > 0) at += a.transpose() * lam;
        if (l > 0) at += e.transpose() * nu;
        if (inf_norm(at) <= tol * -by) {
          SolveReport report;
          report.x = x;
          report.lambda = lam / -by;
          report.nu = nu / -by;
          return finish(report, SolveStatus::kPrimalInfeasible, iter);
        }
      }
      const double cx = c.dot(x);
      if (cx < 0.0) {
        const double bound = tol * -cx;
        if (inf_norm(qx) <= bound && inf_norm(ax + s) <= bound &&
            inf_norm(e * x) <= bound) {
          SolveReport report;
          report.x = x / -cx;
          report.lambda = lam;
          report.nu = nu;
          return finish(report, SolveStatus::kDualUnbounded, iter);
        }
      }
    }

    const double mu = (s.dot(lam) + tau * kappa) / static_cast<double>(p + 1);
    w_inv = s.cwiseQuotient(lam);
    if (!factor_with_retry(kkt, w_inv)) {
      return finish(best, SolveStatus::kNumericalFailure, iter);
    }

    VectorXd u1x, u1l, u1n;
    kkt.solve(-c, b, f, &u1x, &u1l, &u1n);
    const VectorXd gx = c + (2.0 / tau) * qx;
    const double g_u1 = gx.dot(u1x) + b.dot(u1l) + f.dot(u1n);
    const double denom = g_u1 - xqx / (tau * tau) - kappa / tau;

    auto direction = [&](double eta, const VectorXd& comp_s,
                         double comp_tau) {
      Direction d;
      VectorXd rl = -eta * r2;
      if (p > 0) rl -= comp_s.cwiseQuotient(lam);
      kkt.solve(-eta * r1, rl, -eta * r3, &d.dx, &d.dl, &d.dn);
      const double g_u2 = gx.dot(d.dx) + b.dot(d.dl) + f.dot(d.dn);
      d.dtau = (-eta * r4 - comp_tau / tau - g_u2) / denom;
      d.dx += d.dtau * u1x;
      d.dl += d.dtau * u1l;
      d.dn += d.dtau * u1n;
      d.ds = -eta * r2 - a * d.dx + b * d.dtau;
      d.dkappa = (comp_tau - kappa * d.dtau) / tau;
      return d;
    };
    auto step_length = [&](const Direction& d) {
      double alpha = std::min(max_step(s, d.ds), max_step(lam, d.dl));
      alpha = std::min(alpha, max_step(tau, d.dtau));
      return std::min(alpha, max_step(kappa, d.dkappa));
    };

    // Predictor.
    const VectorXd comp_aff = -s.cwiseProduct(lam);
    const Direction aff = direction(1.0, comp_aff, -tau * kappa);
    const double alpha_aff = std::min(1.0, step_length(aff));
    const double sigma = std::pow(1.0 - alpha_aff, 3);

    // Corrector.
    VectorXd comp = comp_aff - aff.ds.cwiseProduct(aff.dl);
    comp.array() += sigma * mu;
    const double comp_tau = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
    const Direction dir = direction(1.0 - sigma, comp, comp_tau);
    const double alpha = std::min(1.0, 0.99 * step_length(dir));

    x += alpha * dir.dx;
    s += alpha * dir.ds;
    lam += alpha * dir.dl;
    nu += alpha * dir.dn;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;

    if (!(alpha > 1e-10) || !x.allFinite() || !std::isfinite(tau)) {
      if (++stalled >= 5 || !x.allFinite()) {
        return finish(best, SolveStatus::kNumericalFailure, iter + 1);
      }
    } else {
      stalled = 0;
    }
  }
}

}  // namespace

ConvexProgram ConvexProgram::empty(Index num_vars, Index num_ineq,
                                   Index num_eq) {
  ConvexProgram out;
  out.q.resize(num_vars, num_vars);
  out.c = VectorXd::Zero(num_vars);
  out.a_ineq.resize(num_ineq, num_vars);
  out.b_ineq = VectorXd::Zero(num_ineq);
  out.a_eq.resize(num_eq, num_vars);
  out.b_eq = VectorXd::Zero(num_eq);
  return out;
}

ConvexProgram ConvexProgram::from_dense(const Eigen::MatrixXd& q,
                                        const VectorXd& c,
                                        const Eigen::MatrixXd& a_ineq,
                                        const VectorXd& b_ineq,
                                        const Eigen::MatrixXd& a_eq,
                                        const VectorXd& b_eq) {
  const Index m = c.size();
  ConvexProgram out = empty(m, b_ineq.size(), b_eq.size());
  out.c = c;
  out.b_ineq = b_ineq;
  out.b_eq = b_eq;
  if (q.size() > 0) out.q = q.sparseView(0.0, 0.0);
  if (a_ineq.size() > 0) out.a_ineq = a_ineq.sparseView(0.0, 0.0);
  if (a_eq.size() > 0) out.a_eq = a_eq.sparseView(0.0, 0.0);
  return out;
}

void validate(const ConvexProgram& program) {
  const Index m = program.num_vars();
  if (m <= 0) throw std::invalid_argument("program has no variables");
  if (program.q.rows() != m || program.q.cols() != m) {
    throw std::invalid_argument("Q must be m x m");
  }
  if (program.a_ineq.rows() != program.b_ineq.size() ||
      program.a_ineq.cols() != m) {
    throw std::invalid_argument("A_ineq / b_ineq dimensions inconsistent");
  }
  if (program.a_eq.rows() != program.b_eq.size() || program.a_eq.cols() != m) {
    throw std::invalid_argument("A_eq / b_eq dimensions inconsistent");
  }
  if (!program.c.allFinite() || !program.b_ineq.allFinite() ||
      !program.b_eq.allFinite()) {
    throw std::invalid_argument("program vectors have non-finite entries");
  }
  for (const SparseMatrix* mat : {&program.q, &program.a_ineq, &program.a_eq}) {
    for (Index k = 0; k < mat->outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(*mat, k); it; ++it) {
        if (!std::isfinite(it.value())) {
          throw std::invalid_argument("program matrices have non-finite entries");
        }
      }
    }
  }
  const SparseMatrix asym = program.q - SparseMatrix(program.q.transpose());
  if (max_abs(asym) > 1e-12) throw std::invalid_argument("Q is not symmetric");
}

double objective_value(const ConvexProgram& program, const VectorXd& x) {
  return 0.5 * x.dot(program.q * x) + program.c.dot(x);
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kPrimalInfeasible:
      return "PrimalInfeasible";
    case SolveStatus::kDualUnbounded:
      return "DualUnbounded";
    case SolveStatus::kMaxIterations:
      return "MaxIterations";
    case SolveStatus::kNumericalFailure:
      return "NumericalFailure";
  }
  return "Unknown";
}

double KktSummary::worst() const {
  return std::max({primal_residual, dual_residual, complementarity});
}

KktSummary check_kkt(const ConvexProgram& program, const VectorXd& x,
                     const VectorXd& lambda, const VectorXd& nu, double tol) {
  if (x.size() != program.num_vars() || lambda.size() != program.num_ineq() ||
      nu.size() != program.num_eq()) {
    throw std::invalid_argument("primal-dual pair does not match the program");
  }
  return kkt_residuals(program.q, program.c, program.a_ineq, program.b_ineq,
                       program.a_eq, program.b_eq, x, lambda, nu, tol);
}

KktSummary check_kkt(const ConvexProgram& program, const SolveReport& report,
                     double tol) {
  return check_kkt(program, report.x, report.lambda, report.nu, tol);
}

SolveReport solve(const ConvexProgram& program, const SolverOptions& options) {
  validate(program);
  if (!(options.tol >= kMinTolerance && options.tol <= kMaxTolerance)) {
    throw std::invalid_argument("tol must lie in [1e-12, 1e-2]");
  }
  if (options.max_iter <= 0) throw std::invalid_argument("max_iter must be positive");

  const Presolved reduced = presolve(program, options.tol);
  SolveReport report;
  if (reduced.infeasible) {
    report.status = SolveStatus::kPrimalInfeasible;
    report.x = VectorXd::Zero(program.num_vars());
    report.lambda = VectorXd::Zero(program.num_ineq());
    report.nu = VectorXd::Zero(program.num_eq());
    return report;
  }
  const SolveReport inner = solve_presolved(reduced.program, options);
  report.status = inner.status;
  report.iterations = inner.iterations;
  report.x = inner.x;
  report.lambda = VectorXd::Zero(program.num_ineq());
  report.nu = VectorXd::Zero(program.num_eq());
  for (std::size_t r = 0; r < reduced.ineq_rows.size(); ++r) {
    report.lambda(reduced.ineq_rows[r]) = inner.lambda(r);
  }
  for (std::size_t r = 0; r < reduced.eq_rows.size(); ++r) {
    report.nu(reduced.eq_rows[r]) = inner.nu(r);
  }
  if (report.status == SolveStatus::kPrimalInfeasible ||
      report.status == SolveStatus::kDualUnbounded) {
    return report;
  }
  const KktSummary kkt = check_kkt(program, report, options.tol);
  report.primal_residual = kkt.primal_residual;
  report.dual_residual = kkt.dual_residual;
  report.complementarity_gap = kkt.complementarity;
  report.objective = objective_value(program, report.x);
  if (report.optimal() && !kkt.pass) report.status = SolveStatus::kNumericalFailure;
  return report;
}

SolveReport solve(const ConvexProgram& program, double tol, int max_iter) {
  SolverOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return solve(program, options);
}

VectorXd least_squares(const Eigen::MatrixXd& a, const VectorXd& b) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw std::invalid_argument("least_squares needs a nonempty matrix");
  }
  if (a.rows() != b.size()) {
    throw std::invalid_argument("least_squares: row count differs from rhs");
  }
  return Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(a).solve(b);
}

}  // namespace cnnrelax
