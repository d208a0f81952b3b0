#include "cnnrelax/serialize.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "cnnrelax/errors.h"

namespace cnnrelax {
namespace {

using Eigen::Index;
using Eigen::VectorXd;

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

double parse_double(const std::string& s, int line, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw SchemaError(line, std::string("bad ") + what + " value '" + s + "'");
  }
  if (!std::isfinite(v)) {
    throw SchemaError(line, std::string("non-finite ") + what + " value '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

Json dense_rows(const SparseMatrix& m) {
  const Eigen::MatrixXd dense(m);
  Json rows = Json::array();
  for (Index i = 0; i < dense.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < dense.cols(); ++j) row.push_back(dense(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j, Index cols, const char* name) {
  if (!j.is_array()) {
    throw std::invalid_argument(std::string(name) + " must be an array of rows");
  }
  Eigen::MatrixXd out(static_cast<Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || static_cast<Index>(j[i].size()) != cols) {
      throw std::invalid_argument(std::string(name) + " row " +
                                  std::to_string(i) + " has wrong length");
    }
    for (Index c = 0; c < cols; ++c) out(static_cast<Index>(i), c) = j[i][c].get<double>();
  }
  return out;
}

Json residuals_json(double primal, double dual, double gap) {
  return Json{{"primal_residual", primal},
              {"dual_residual", dual},
              {"complementarity_gap", gap}};
}

}  // namespace

std::string format_dataset_csv(const Dataset& dataset, std::uint64_t seed) {
  validate_dataset(dataset);
  std::string out = "# n=" + std::to_string(dataset.n()) +
                    " d=" + std::to_string(dataset.d()) +
                    " k=" + std::to_string(dataset.k) +
                    " seed=" + std::to_string(seed) + "\ny";
  for (int c = 1; c <= dataset.d(); ++c) out += ",x_" + std::to_string(c);
  out += '\n';
  for (int i = 0; i < dataset.n(); ++i) {
    append_double(out, dataset.y(i));
    for (int c = 0; c < dataset.d(); ++c) {
      out += ',';
      append_double(out, dataset.X(i, c));
    }
    out += '\n';
  }
  return out;
}

void save_dataset(const Dataset& dataset, std::uint64_t seed,
                  const std::string& path) {
  write_file(path, format_dataset_csv(dataset, seed));
}

LoadedDataset parse_dataset_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(1, "empty input");
  line = strip_cr(line);
  if (line.rfind("# ", 0) != 0) {
    throw SchemaError(1, "expected metadata '# n=<n> d=<d> k=<k> seed=<seed>'");
  }
  std::map<std::string, std::string> meta;
  {
    std::istringstream fields(line.substr(2));
    std::string token;
    while (fields >> token) {
      const std::size_t eq = token.find('=');
      if (eq == std::string::npos) {
        throw SchemaError(1, "metadata token '" + token + "' is not key=value");
      }
      meta[token.substr(0, eq)] = token.substr(eq + 1);
    }
  }
  long long n = 0;
  long long d = 0;
  long long k = 0;
  LoadedDataset out;
  try {
    for (const char* key : {"n", "d", "k", "seed"}) {
      if (!meta.count(key)) {
        throw SchemaError(1, std::string("metadata is missing ") + key);
      }
    }
    std::size_t used = 0;
    n = std::stoll(meta["n"], &used);
    d = std::stoll(meta["d"], &used);
    k = std::stoll(meta["k"], &used);
    out.seed = std::stoull(meta["seed"], &used);
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception&) {
    throw SchemaError(1, "metadata values must be integers");
  }
  if (n <= 0 || d <= 0 || k <= 0 || d % k != 0 || n > (1LL << 31) ||
      d > (1LL << 31)) {
    throw SchemaError(1, "metadata n, d, k are not a valid shape");
  }

  std::string expected = "y";
  for (long long c = 1; c <= d; ++c) expected += ",x_" + std::to_string(c);
  if (!std::getline(in, line) || strip_cr(line) != expected) {
    throw SchemaError(2, "expected header 'y,x_1,...,x_" + std::to_string(d) + "'");
  }

  out.data.k = static_cast<int>(k);
  out.data.X.resize(n, d);
  out.data.y.resize(n);
  int lineno = 2;
  Index row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (row >= n) {
      throw SchemaError(lineno, "more samples than n=" + std::to_string(n));
    }
    const std::vector<std::string> f = split_commas(line);
    if (static_cast<long long>(f.size()) != d + 1) {
      throw SchemaError(lineno, "expected " + std::to_string(d + 1) +
                                    " columns, found " + std::to_string(f.size()));
    }
    out.data.y(row) = parse_double(f[0], lineno, "label");
    for (Index c = 0; c < d; ++c) {
      out.data.X(row, c) = parse_double(f[c + 1], lineno, "feature");
    }
    ++row;
  }
  if (row != n) {
    throw SchemaError(lineno, "found " + std::to_string(row) +
                                  " samples, metadata says n=" + std::to_string(n));
  }
  return out;
}

LoadedDataset load_dataset(const std::string& path) {
  return parse_dataset_csv(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a numeric array");
  VectorXd out(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    out(static_cast<Index>(i)) = j[i].get<double>();
  }
  return out;
}

Json to_json(const ConvexProgram& program) {
  return Json{{"q", dense_rows(program.q)},
              {"c", to_json(program.c)},
              {"a_ineq", dense_rows(program.a_ineq)},
              {"b_ineq", to_json(program.b_ineq)},
              {"a_eq", dense_rows(program.a_eq)},
              {"b_eq", to_json(program.b_eq)}};
}

ConvexProgram program_from_json(const Json& j) {
  try {
    const VectorXd c = vector_from_json(j.at("c"));
    const Index m = c.size();
    const VectorXd b_ineq = vector_from_json(j.at("b_ineq"));
    const VectorXd b_eq = vector_from_json(j.at("b_eq"));
    Eigen::MatrixXd q = matrix_from_json(j.at("q"), m, "q");
    if (q.rows() == 0) q = Eigen::MatrixXd::Zero(m, m);
    ConvexProgram out = ConvexProgram::from_dense(
        q, c, matrix_from_json(j.at("a_ineq"), m, "a_ineq"), b_ineq,
        matrix_from_json(j.at("a_eq"), m, "a_eq"), b_eq);
    validate(out);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed program JSON: ") + e.what());
  }
}

Json to_json(const SolveReport& report) {
  Json out{{"status", std::string(to_string(report.status))},
           {"x", to_json(report.x)},
           {"lambda", to_json(report.lambda)},
           {"nu", to_json(report.nu)},
           {"objective", report.objective},
           {"iterations", report.iterations}};
  out.update(residuals_json(report.primal_residual, report.dual_residual,
                            report.complementarity_gap));
  return out;
}

Json to_json(const FitResult& fit) {
  return Json{{"method", "relax"},
              {"w_hat", to_json(fit.w_hat)},
              {"z_hat", to_json(fit.z_hat)},
              {"train_residual", fit.train_residual},
              {"r_used", to_json(fit.r_used)},
              {"trial_seed", fit.trial_seed},
              {"report", to_json(fit.report)}};
}

Json to_json(const RecoveryOutcome& outcome) {
  Json trials = Json::array();
  for (const TrialRecord& t : outcome.trials) {
    trials.push_back(Json{{"seed", t.seed},
                          {"status", std::string(to_string(t.status))},
                          {"l2_error", t.l2_error},
                          {"train_residual", t.train_residual}});
  }
  return Json{{"best", to_json(outcome.best)},
              {"l2_error", outcome.l2_error},
              {"rel_error", outcome.rel_error},
              {"success", outcome.success},
              {"trials", std::move(trials)}};
}

Json to_json(const Certificate& certificate) {
  return Json{{"verdict", std::string(to_string(certificate.verdict))},
              {"exists", certificate.exists},
              {"coefficients", to_json(certificate.coefficients)},
              {"samples", certificate.samples},
              {"equality_residual", certificate.equality_residual},
              {"min_coefficient", certificate.min_coefficient},
              {"elastic_value", certificate.elastic_value},
              {"boundary_degenerate", certificate.boundary_degenerate},
              {"solver_status", std::string(to_string(certificate.solver_status))}};
}

Json to_json(const ActiveSets& sets) {
  return Json{{"S", sets.S}, {"R", sets.R}};
}

Json to_json(const DualReport& dual) {
  Json lambda = Json::array();
  for (Index i = 0; i < dual.lambda.rows(); ++i) {
    lambda.push_back(to_json(VectorXd(dual.lambda.row(i).transpose())));
  }
  Json out{{"status", std::string(to_string(dual.status))},
           {"dual_objective", dual.dual_objective},
           {"lambda", std::move(lambda)},
           {"v", to_json(dual.v)},
           {"primal_status", std::string(to_string(dual.primal_status))},
           {"primal_objective", dual.primal_objective},
           {"w_primal", to_json(dual.w_primal)},
           {"duality_gap", dual.duality_gap},
           {"complementarity", dual.complementarity},
           {"structure_checked", dual.structure_checked}};
  if (dual.structure_checked) out["structure_violation"] = dual.structure_violation;
  return out;
}

Json to_json(const GdResult& result) {
  return Json{{"method", "gd"},
              {"w_hat", to_json(result.w_hat)},
              {"train_residual", result.final_loss},
              {"status", std::string(to_string(result.status))},
              {"iterations", result.iters_used},
              {"grad_norm", result.grad_norm},
              {"step_size", result.step_size},
              {"w_init", to_json(result.w_init)}};
}

Json to_json(const GridSpec& spec) {
  Json methods = Json::array();
  for (Method m : spec.methods) methods.push_back(std::string(to_string(m)));
  return Json{{"n_values", spec.n_values},
              {"d_values", spec.d_values},
              {"k", spec.k},
              {"trials", spec.trials},
              {"methods", std::move(methods)},
              {"tau", spec.tau},
              {"master_seed", spec.master_seed},
              {"amplify", spec.amplify},
              {"beta", spec.beta},
              {"gd", Json{{"step_size", spec.gd.step_size},
                          {"max_iters", spec.gd.max_iters},
                          {"init_scale", spec.gd.init_scale},
                          {"stop_tol", spec.gd.stop_tol}}},
              {"solver", Json{{"tol", spec.solver.tol},
                              {"max_iter", spec.solver.max_iter}}}};
}

Json to_json(const PhaseCell& cell) {
  return Json{{"method", std::string(to_string(cell.method))},
              {"k", cell.k},
              {"n", cell.n},
              {"d", cell.d},
              {"trials", cell.trials},
              {"trials_run", cell.trials_run},
              {"failures", cell.failures},
              {"min_err", cell.min_err},
              {"mean_err", cell.mean_err},
              {"success_rate", cell.success_rate}};
}

}  // namespace cnnrelax
