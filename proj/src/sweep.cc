#include "cnnrelax/sweep.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cnnrelax/errors.h"
#include "cnnrelax/model.h"
#include "cnnrelax/random.h"
#include "cnnrelax/relax.h"

namespace cnnrelax {
namespace {

struct WorkItem {
  std::size_t cell = 0;
  Method method = Method::kRelaxation;
  int n = 0;
  int d = 0;
  int trial = 0;
};

std::vector<PhaseCell> make_cells(const GridSpec& spec,
                                  std::vector<WorkItem>& items) {
  std::vector<PhaseCell> cells;
  for (Method m : spec.methods) {
    for (int n : spec.n_values) {
      for (int d : spec.d_values) {
        PhaseCell cell;
        cell.method = m;
        cell.k = spec.k;
        cell.n = n;
        cell.d = d;
        cell.trials = spec.trials;
        for (int t = 0; t < spec.trials; ++t) {
          items.push_back({cells.size(), m, n, d, t});
        }
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

// Combines per-trial outcomes in item order, so the result does not depend on
// which thread produced which outcome.
void aggregate(std::vector<PhaseCell>& cells, const std::vector<WorkItem>& items,
               const std::vector<TrialOutcome>& outcomes) {
  std::vector<double> sums(cells.size(), 0.0);
  std::vector<int> successes(cells.size(), 0);
  for (PhaseCell& c : cells) c.min_err = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < items.size(); ++t) {
    PhaseCell& cell = cells[items[t].cell];
    const TrialOutcome& o = outcomes[t];
    if (!o.ok) {
      ++cell.failures;
      continue;
    }
    ++cell.trials_run;
    sums[items[t].cell] += o.l2_error;
    cell.min_err = std::min(cell.min_err, o.l2_error);
    successes[items[t].cell] += o.success ? 1 : 0;
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    PhaseCell& cell = cells[c];
    if (cell.trials_run == 0) {
      cell.min_err = cell.mean_err = std::numeric_limits<double>::quiet_NaN();
    } else {
      cell.mean_err = sums[c] / cell.trials_run;
    }
    cell.success_rate =
        cell.trials > 0 ? static_cast<double>(successes[c]) / cell.trials : 0.0;
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw SchemaError(line, "not a number: '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, int line) {
  const double v = parse_double(s, line);
  if (v != std::floor(v) || std::abs(v) > 2e9) {
    throw SchemaError(line, "not an integer: '" + s + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

std::string_view to_string(Method method) {
  return method == Method::kRelaxation ? "relax" : "gd";
}

Method parse_method(std::string_view text) {
  if (text == "relax") return Method::kRelaxation;
  if (text == "gd") return Method::kGradientDescent;
  throw std::invalid_argument("unknown method '" + std::string(text) +
                              "' (expected relax or gd)");
}

void validate(const GridSpec& spec) {
  auto ascending = [](const std::vector<int>& v) {
    if (v.empty()) return false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] <= 0 || (i > 0 && v[i] <= v[i - 1])) return false;
    }
    return true;
  };
  if (!ascending(spec.n_values)) {
    throw std::invalid_argument("n values must be positive and ascending");
  }
  if (!ascending(spec.d_values)) {
    throw std::invalid_argument("d values must be positive and ascending");
  }
  if (spec.k <= 0) throw std::invalid_argument("k must be positive");
  for (int d : spec.d_values) {
    if (d % spec.k != 0) {
      throw std::invalid_argument("d = " + std::to_string(d) +
                                  " is not divisible by k = " +
                                  std::to_string(spec.k));
    }
  }
  if (spec.trials <= 0) throw std::invalid_argument("trials must be positive");
  if (spec.methods.empty()) throw std::invalid_argument("no methods selected");
  if (!(spec.tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (spec.amplify < 1) throw std::invalid_argument("amplify must be >= 1");
  if (!(spec.beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (spec.workers < 0) throw std::invalid_argument("workers must be >= 0");
}

std::uint64_t cell_trial_seed(std::uint64_t master_seed, Method method, int n,
                              int d, int trial) {
  return derive_seed(master_seed,
                     {static_cast<std::uint64_t>(Stream::kSweepCell),
                      static_cast<std::uint64_t>(method),
                      static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(d),
                      static_cast<std::uint64_t>(trial)});
}

TrialOutcome run_trial(const GridSpec& spec, Method method, int n, int d,
                       int trial) {
  const std::uint64_t seed = cell_trial_seed(spec.master_seed, method, n, d, trial);
  const auto [model, data] = sample_planted(n, d, spec.k, seed);
  TrialOutcome out;
  Eigen::VectorXd w_hat;
  if (method == Method::kRelaxation) {
    if (spec.amplify > 1) {
      RelaxOptions options;
      options.beta = spec.beta;
      options.tau = spec.tau;
      options.solver = spec.solver;
      try {
        w_hat = fit_amplified(data, spec.amplify, seed, options).best.w_hat;
      } catch (const AllTrialsFailed&) {
        return out;
      }
    } else {
      const FitResult f =
          fit(data, spec.beta, derive_seed(seed, Stream::kPerturbation),
              spec.solver);
      if (!f.ok()) return out;
      w_hat = f.w_hat;
    }
  } else {
    GdConfig config = spec.gd;
    config.seed = seed;
    const GdResult g = gd_fit(data, config);
    if (g.status == GdStatus::kDiverged) return out;
    w_hat = g.w_hat;
  }
  const Assessment a = assess(w_hat, model.w_star, spec.tau);
  out.ok = true;
  out.l2_error = a.l2_error;
  out.success = a.success;
  return out;
}

std::vector<PhaseCell> run_grid(const GridSpec& spec) {
  validate(spec);
  std::vector<WorkItem> items;
  std::vector<PhaseCell> cells = make_cells(spec, items);
  std::vector<TrialOutcome> outcomes(items.size());
  const int threads = spec.workers > 0 ? spec.workers : omp_get_max_threads();
  const long count = static_cast<long>(items.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long t = 0; t < count; ++t) {
    const WorkItem& it = items[t];
    outcomes[t] = run_trial(spec, it.method, it.n, it.d, it.trial);
  }
  aggregate(cells, items, outcomes);
  return cells;
}

std::vector<PhaseCell> run_grid_serial(const GridSpec& spec) {
  validate(spec);
  std::vector<WorkItem> items;
  std::vector<PhaseCell> cells = make_cells(spec, items);
  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(items.size());
  for (const WorkItem& it : items) {
    outcomes.push_back(run_trial(spec, it.method, it.n, it.d, it.trial));
  }
  aggregate(cells, items, outcomes);
  return cells;
}

std::string format_csv(const std::vector<PhaseCell>& cells) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const PhaseCell& c : cells) {
    out += std::string(to_string(c.method)) + ',' + std::to_string(c.k) + ',' +
           std::to_string(c.n) + ',' + std::to_string(c.d) + ',' +
           std::to_string(c.trials_run) + ',' + format_double(c.min_err) + ',' +
           format_double(c.mean_err) + ',' + format_double(c.success_rate) +
           '\n';
  }
  return out;
}

void write_csv(const std::vector<PhaseCell>& cells, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << format_csv(cells);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

std::vector<PhaseCell> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw SchemaError(1, "expected header '" + std::string(kCsvHeader) + "'");
  }
  std::vector<PhaseCell> cells;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 8) {
      throw SchemaError(lineno, "expected 8 fields, found " +
                                    std::to_string(f.size()));
    }
    PhaseCell c;
    try {
      c.method = parse_method(f[0]);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(lineno, e.what());
    }
    c.k = parse_int(f[1], lineno);
    c.n = parse_int(f[2], lineno);
    c.d = parse_int(f[3], lineno);
    c.trials_run = parse_int(f[4], lineno);
    c.trials = c.trials_run;
    c.min_err = parse_double(f[5], lineno);
    c.mean_err = parse_double(f[6], lineno);
    c.success_rate = parse_double(f[7], lineno);
    cells.push_back(c);
  }
  return cells;
}

std::vector<PhaseCell> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::vector<BoundaryPoint> estimate_boundary(
    const std::vector<PhaseCell>& cells, double threshold, Method method) {
  std::map<int, std::optional<int>> best;
  for (const PhaseCell& c : cells) {
    if (c.method != method) continue;
    auto& slot = best[c.d];
    if (c.success_rate >= threshold && (!slot || c.n < *slot)) slot = c.n;
  }
  std::vector<BoundaryPoint> out;
  for (const auto& [d, n] : best) out.push_back({d, n});
  return out;
}

std::string render_heatmap(const std::vector<PhaseCell>& cells, Method method) {
  static constexpr char kGlyphs[] = " .:-=+*#%@";
  std::set<int> ns;
  std::set<int> ds;
  std::map<std::pair<int, int>, double> rate;
  for (const PhaseCell& c : cells) {
    if (c.method != method) continue;
    ns.insert(c.n);
    ds.insert(c.d);
    rate[{c.n, c.d}] = c.success_rate;
  }
  std::string out;
  for (auto n = ns.rbegin(); n != ns.rend(); ++n) {
    char label[16];
    std::snprintf(label, sizeof label, "%6d |", *n);
    out += label;
    for (int d : ds) {
      auto it = rate.find({*n, d});
      if (it == rate.end()) {
        out += '?';
        continue;
      }
      const int level =
          std::clamp(static_cast<int>(std::floor(it->second * 10.0)), 0, 9);
      out += kGlyphs[level];
    }
    out += '\n';
  }
  out += "       +" + std::string(ds.size(), '-') + "\n";
  out += "        d = ";
  for (int d : ds) out += std::to_string(d) + ' ';
  out += '\n';
  return out;
}

}  // namespace cnnrelax
