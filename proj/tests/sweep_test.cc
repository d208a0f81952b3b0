#include "cnnrelax/sweep.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "gtest/gtest.h"

#include "cnnrelax/errors.h"
#include "cnnrelax/model.h"
#include "cnnrelax/random.h"
#include "cnnrelax/relax.h"

#ifndef CNNRELAX_TEST_DATA_DIR
#define CNNRELAX_TEST_DATA_DIR "."
#endif

namespace cnnrelax {
namespace {

GridSpec single_cell(int n, int d, int trials, Method method) {
  GridSpec spec;
  spec.n_values = {n};
  spec.d_values = {d};
  spec.trials = trials;
  spec.methods = {method};
  spec.master_seed = 2024;
  return spec;
}

GridSpec golden_grid() {
  GridSpec spec;
  spec.n_values = {20, 60};
  spec.d_values = {4, 8};
  spec.k = 2;
  spec.trials = 6;
  spec.master_seed = 7;
  spec.gd.max_iters = 300;
  return spec;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("cnnrelax_sweep_test_" + name))
      .string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

TEST(GridSpecValidation, RejectsBadSpecs) {
  GridSpec spec = single_cell(10, 4, 1, Method::kRelaxation);
  EXPECT_NO_THROW(validate(spec));
  spec.k = 3;
  EXPECT_THROW(validate(spec), std::invalid_argument);
  spec = single_cell(10, 4, 0, Method::kRelaxation);
  EXPECT_THROW(validate(spec), std::invalid_argument);
  spec = single_cell(10, 4, 1, Method::kRelaxation);
  spec.n_values = {20, 10};
  EXPECT_THROW(validate(spec), std::invalid_argument);
  spec.n_values = {};
  EXPECT_THROW(validate(spec), std::invalid_argument);
  spec = single_cell(10, 4, 1, Method::kRelaxation);
  spec.methods.clear();
  EXPECT_THROW(validate(spec), std::invalid_argument);
}

TEST(RunGrid, SingleCellMatchesDirectFit) {
  GridSpec spec = single_cell(40, 5, 1, Method::kRelaxation);
  spec.methods = {Method::kRelaxation, Method::kGradientDescent};
  const std::vector<PhaseCell> cells = run_grid(spec);
  ASSERT_EQ(cells.size(), 2u);

  const std::uint64_t rs = cell_trial_seed(2024, Method::kRelaxation, 40, 5, 0);
  const auto [m1, d1] = sample_planted(40, 5, 1, rs);
  const FitResult f = fit(d1, 0.0, derive_seed(rs, Stream::kPerturbation));
  ASSERT_TRUE(f.ok());
  EXPECT_EQ(cells[0].method, Method::kRelaxation);
  EXPECT_EQ(cells[0].min_err, (f.w_hat - m1.w_star).norm());
  EXPECT_EQ(cells[0].mean_err, cells[0].min_err);

  const std::uint64_t gs = cell_trial_seed(2024, Method::kGradientDescent, 40, 5, 0);
  const auto [m2, d2] = sample_planted(40, 5, 1, gs);
  GdConfig config;
  config.seed = gs;
  EXPECT_EQ(cells[1].method, Method::kGradientDescent);
  EXPECT_EQ(cells[1].min_err, (gd_fit(d2, config).w_hat - m2.w_star).norm());
}

TEST(RunGrid, ParallelScheduleMatchesSerialReference) {
  const GridSpec spec = golden_grid();
  EXPECT_EQ(format_csv(run_grid(spec)), format_csv(run_grid_serial(spec)));
  GridSpec one_worker = spec;
  one_worker.workers = 1;
  EXPECT_EQ(format_csv(run_grid(one_worker)), format_csv(run_grid(spec)));
}

TEST(RunGrid, AddingGridPointsKeepsExistingCells) {
  GridSpec small = golden_grid();
  small.methods = {Method::kRelaxation};
  GridSpec large = small;
  large.n_values = {10, 20, 60};
  const auto a = run_grid(small);
  const auto b = run_grid(large);
  for (const PhaseCell& c : a) {
    bool found = false;
    for (const PhaseCell& e : b) {
      if (e.n == c.n && e.d == c.d) {
        found = true;
        EXPECT_EQ(e.min_err, c.min_err);
        EXPECT_EQ(e.success_rate, c.success_rate);
      }
    }
    EXPECT_TRUE(found);
  }
}

TEST(RunGrid, CellInvariants) {
  for (const PhaseCell& c : run_grid(golden_grid())) {
    EXPECT_GE(c.success_rate, 0.0);
    EXPECT_LE(c.success_rate, 1.0);
    EXPECT_EQ(c.trials_run + c.failures, c.trials);
    if (c.trials_run > 0) EXPECT_LE(c.min_err, c.mean_err);
  }
}

TEST(RunGrid, FailuresAreCountedNotAveraged) {
  // n < d: the limit program is unbounded on every trial.
  const auto cells = run_grid(single_cell(3, 8, 5, Method::kRelaxation));
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].failures, 5);
  EXPECT_EQ(cells[0].trials_run, 0);
  EXPECT_TRUE(std::isnan(cells[0].min_err));
  EXPECT_EQ(cells[0].success_rate, 0.0);
}

TEST(RunGrid, PlateauNearHalfAtTwentySamplesPerDimension) {
  const auto cells = run_grid(single_cell(200, 10, 200, Method::kRelaxation));
  EXPECT_GE(cells[0].success_rate, 0.42);
  EXPECT_LE(cells[0].success_rate, 0.58);
}

TEST(RunGrid, UnderdeterminedCellsRarelyRecover) {
  const auto cells = run_grid(single_cell(20, 100, 50, Method::kRelaxation));
  EXPECT_LE(cells[0].success_rate, 0.05);
}

TEST(RunGrid, AmplificationLiftsThePlateau) {
  GridSpec single = single_cell(1000, 10, 60, Method::kRelaxation);
  GridSpec amplified = single;
  amplified.amplify = 6;
  const double base = run_grid(single)[0].success_rate;
  const double lifted = run_grid(amplified)[0].success_rate;
  EXPECT_GE(base, 0.30);
  EXPECT_LE(base, 0.70);
  EXPECT_GE(lifted, 0.9);
}

TEST(Csv, EmptyListIsHeaderOnly) {
  const std::string path = temp_path("empty.csv");
  write_csv({}, path);
  EXPECT_EQ(slurp(path), std::string(kCsvHeader) + "\n");
  std::filesystem::remove(path);
}

TEST(Csv, OneCellRoundTrips) {
  PhaseCell cell;
  cell.method = Method::kGradientDescent;
  cell.k = 5;
  cell.n = 400;
  cell.d = 10;
  cell.trials = cell.trials_run = 100;
  cell.min_err = 1.0 / 3.0;
  cell.mean_err = std::sqrt(2.0);
  cell.success_rate = 0.37;
  const std::string path = temp_path("one.csv");
  write_csv({cell}, path);
  const std::string text = slurp(path);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  const std::vector<PhaseCell> back = read_csv(path);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].method, cell.method);
  EXPECT_EQ(back[0].k, 5);
  EXPECT_EQ(back[0].n, 400);
  EXPECT_EQ(back[0].d, 10);
  EXPECT_EQ(back[0].trials_run, 100);
  EXPECT_EQ(back[0].min_err, cell.min_err);
  EXPECT_EQ(back[0].mean_err, cell.mean_err);
  EXPECT_EQ(back[0].success_rate, cell.success_rate);
  std::filesystem::remove(path);
}

TEST(Csv, MalformedInputNamesTheLine) {
  try {
    parse_csv(std::string(kCsvHeader) + "\nrelax,1,2,3,4,5,6,7\nrelax,1,2\n");
    FAIL() << "expected a schema error";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_csv("bogus\n"), SchemaError);
  EXPECT_THROW(read_csv("/nonexistent/dir/file.csv"), IoError);
  EXPECT_THROW(write_csv({}, "/nonexistent/dir/file.csv"), IoError);
}

TEST(Csv, GoldenGridIsByteStable) {
  const std::string text = format_csv(run_grid(golden_grid()));
  EXPECT_EQ(text, format_csv(run_grid(golden_grid())));
  const std::string golden =
      slurp(std::string(CNNRELAX_TEST_DATA_DIR) + "/golden/sweep_2x2.csv");
  EXPECT_EQ(text, golden);
}

TEST(Boundary, MonotoneSyntheticGrid) {
  std::vector<PhaseCell> cells;
  for (int n : {10, 20, 30, 40}) {
    for (int d : {5, 7}) {
      PhaseCell c;
      c.n = n;
      c.d = d;
      c.success_rate = n >= (d == 5 ? 30 : 40) ? 1.0 : 0.0;
      cells.push_back(c);
    }
  }
  const auto b = estimate_boundary(cells, 0.5);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].d, 5);
  EXPECT_EQ(b[0].n, 30);
  EXPECT_EQ(b[1].n, 40);
  const auto none = estimate_boundary(cells, 1.5);
  EXPECT_FALSE(none[0].n.has_value());
  EXPECT_FALSE(none[1].n.has_value());
}

TEST(Boundary, GrowsAtMostLinearlyInDimension) {
  GridSpec spec;
  spec.n_values = {100, 200, 400, 800, 1600, 3200, 6400, 12800};
  spec.d_values = {10, 20, 40};
  spec.trials = 50;
  spec.methods = {Method::kRelaxation};
  spec.master_seed = 11;
  const auto boundary = estimate_boundary(run_grid(spec), 0.40);
  ASSERT_EQ(boundary.size(), 3u);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::string seen;
  for (const BoundaryPoint& p : boundary) {
    ASSERT_TRUE(p.n.has_value()) << "no boundary for d = " << p.d;
    const double ratio = static_cast<double>(*p.n) / p.d;
    seen += " d=" + std::to_string(p.d) + ":n=" + std::to_string(*p.n);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_LE(hi / lo, 3.0) << "boundary" << seen;
}

TEST(Heatmap, GlyphLevels) {
  std::vector<PhaseCell> cells;
  for (int n : {10, 20}) {
    for (int d : {1, 2, 3}) {
      PhaseCell c;
      c.n = n;
      c.d = d;
      c.success_rate = n == 20 ? (d - 1) * 0.5 : 0.0;
      cells.push_back(c);
    }
  }
  const std::string map = render_heatmap(cells, Method::kRelaxation);
  std::istringstream in(map);
  std::string top;
  std::string bottom;
  std::getline(in, top);
  std::getline(in, bottom);
  EXPECT_EQ(top, "    20 | +@");
  EXPECT_EQ(bottom, "    10 |   ");
}

TEST(Methods, NamesRoundTrip) {
  EXPECT_EQ(parse_method(to_string(Method::kRelaxation)), Method::kRelaxation);
  EXPECT_EQ(parse_method(to_string(Method::kGradientDescent)),
            Method::kGradientDescent);
  EXPECT_THROW(parse_method("sgd"), std::invalid_argument);
}

}  // namespace
}  // namespace cnnrelax
