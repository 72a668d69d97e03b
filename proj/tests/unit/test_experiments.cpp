#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "marcopolo/experiments.hpp"

using namespace marcopolo;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("marcopolo_test_" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n = 1 << 12;
  c.trials = 2000;
  c.algorithms = {"ALG1", "ALG3", "ALG4"};
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("POI distance is uniform on [0, n]") {
  const double n = 1 << 20;
  std::mt19937_64 rng(3);
  double sum = 0.0;
  double angle_sum_cos = 0.0;
  const int N = 1000000;
  for (int i = 0; i < N; ++i) {
    const Point2 p = sample_poi(rng, n);
    const double r = norm(p);
    REQUIRE(r <= n * (1.0 + 1e-12));
    sum += r;
    angle_sum_cos += p.x / (r > 0.0 ? r : 1.0);
  }
  CHECK(std::abs(sum / N - n / 2.0) <= 0.002 * n / 2.0);
  CHECK(std::abs(angle_sum_cos / N) < 0.005);
}

TEST_CASE("trial streams are reproducible and distinct") {
  auto a = trial_rng(9, 41);
  auto b = trial_rng(9, 41);
  auto c = trial_rng(9, 42);
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
  auto u = trial_rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = uniform01(u);
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("monte carlo statistics are consistent") {
  const auto res = monte_carlo(small_config());
  CHECK(res.violations == 0);
  REQUIRE(res.algorithms.size() == 3);
  for (const auto& a : res.algorithms) {
    REQUIRE(a.rows.size() == 3);
    for (const auto& r : a.rows) {
      CAPTURE(a.algorithm);
      CHECK(r.count == 2000);
      CHECK(r.min <= r.avg);
      CHECK(r.avg <= r.max);
      CHECK(r.stddev >= 0.0);
      // Bound columns hold c, b and c_R; observed counts may exceed c by the
      // last layer's slack of m - 2 probes, rounded up to whole probes.
      const double L = 12.0;
      const double m = static_cast<double>(a.probes_per_layer);
      if (r.metric == Metric::kDistance) CHECK(r.max <= r.bound + 1e-9);
      if (r.metric == Metric::kProbes) CHECK(r.max * L <= std::ceil(r.bound * L) + m - 2.0 + 1e-9);
      if (r.metric == Metric::kResponses) CHECK(r.max * L <= std::ceil(r.bound * L) + 1e-9);
    }
    for (const auto& h : a.histograms) {
      long mass = 0;
      for (long v : h.counts) mass += v;
      CHECK(mass == 2000);
    }
  }
}

TEST_CASE("monte carlo is independent of the worker count") {
  auto cfg = small_config();
  cfg.workers = 1;
  const auto one = monte_carlo(cfg).rows();
  cfg.workers = 3;
  const auto three = monte_carlo(cfg).rows();
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].min == three[i].min);
    CHECK(one[i].max == three[i].max);
    CHECK(one[i].avg == doctest::Approx(three[i].avg).epsilon(1e-12));
  }
}

TEST_CASE("a single trial has equal min, avg and max") {
  auto cfg = small_config();
  cfg.trials = 1;
  for (const auto& r : monte_carlo(cfg).rows()) {
    CHECK(r.min == r.max);
    CHECK(r.avg == doctest::Approx(r.min));
    CHECK(r.stddev == 0.0);
  }
}

TEST_CASE("table CSV round trip and best columns") {
  const auto res = monte_carlo(small_config());
  const auto dir = scratch_dir("csv");
  emit_report(res, dir);
  CHECK(std::filesystem::exists(dir / "table.csv"));
  const auto back = read_table_csv(dir / "table.csv");
  const auto rows = res.rows();
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].algorithm == rows[i].algorithm);
    CHECK(back[i].metric == rows[i].metric);
    CHECK(back[i].avg == rows[i].avg);
    CHECK(back[i].max == rows[i].max);
  }
  // Oracle for the best flags: direct minimum scan per column.
  const auto best = best_by_column(rows);
  double pmax = 1e300;
  for (const auto& r : rows) {
    if (r.metric == Metric::kProbes) pmax = std::min(pmax, r.max);
  }
  for (const auto& alg : best.at("P_max")) {
    bool ok = false;
    for (const auto& r : rows) ok |= r.algorithm == alg && r.metric == Metric::kProbes && r.max == pmax;
    CHECK(ok);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("best_by_column reports ties") {
  std::vector<StatsRow> rows;
  for (const char* name : {"A", "B"}) {
    StatsRow r;
    r.algorithm = name;
    r.metric = Metric::kProbes;
    r.min = r.avg = r.max = 3.0;
    rows.push_back(r);
  }
  const auto best = best_by_column(rows);
  CHECK(best.at("P_avg").size() == 2);
}

TEST_CASE("experiment config validation") {
  const auto dir = scratch_dir("cfg");
  auto write = [&](const std::string& text) {
    std::ofstream(dir / "c.json") << text;
    return dir / "c.json";
  };
  const auto ok = load_experiment_config(write(R"({"n": 1024, "trials": 7, "algorithms": ["ALG3"],
      "placement_files": {"ALG7": "alg7.json"}})"));
  CHECK(ok.n == 1024.0);
  CHECK(ok.trials == 7);
  CHECK(ok.placement_files.at("ALG7") == dir / "alg7.json");
  CHECK_THROWS_AS(load_experiment_config(write(R"({"trials": 0})")), std::invalid_argument);
  CHECK_THROWS_AS(load_experiment_config(write(R"({"n": 1})")), std::invalid_argument);
  CHECK_THROWS_AS(load_experiment_config(write(R"({"poi_distribution": "area"})")), std::invalid_argument);
  CHECK_THROWS(load_experiment_config(dir / "missing.json"));
  auto cfg = small_config();
  cfg.algorithms = {"ALG7"};
  CHECK_THROWS_AS(monte_carlo(cfg), std::runtime_error);
  std::filesystem::remove_all(dir);
}
