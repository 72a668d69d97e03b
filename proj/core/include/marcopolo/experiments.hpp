#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "marcopolo/geometry.hpp"
#include "marcopolo/placements.hpp"
#include "marcopolo/verifier.hpp"

namespace marcopolo {

// Independent stream for one trial: mt19937_64 seeded from splitmix64(seed ^ f(trial)).
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);
double uniform01(std::mt19937_64& rng);

// Uniform angle in [0, 2 pi) and uniform distance in [0, n] (not area-uniform).
Point2 sample_poi(std::mt19937_64& rng, double n);

enum class Metric { kProbes, kDistance, kResponses };
std::string to_string(Metric m);

struct StatsRow {
  std::string algorithm;
  Metric metric = Metric::kProbes;
  long count = 0;
  double min = 0.0, avg = 0.0, max = 0.0, stddev = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();  // NaN when there is none
};

struct Histogram {
  std::string algorithm;
  Metric metric = Metric::kProbes;
  double lo = 0.0, width = 1.0;
  std::vector<long> counts;  // values outside the range land in the end bins
  double mean = 0.0, stddev = 0.0;
};

struct ExperimentConfig {
  double n = 1 << 20;
  long trials = 100000;
  std::vector<std::string> algorithms{"ALG1", "ALG2", "ALG3", "ALG4", "ALG5", "ALG6"};
  std::uint64_t seed = 1;
  std::string poi_distribution = "uniform-angle-uniform-radius";
  std::filesystem::path output_dir;
  // PlacementFiles for ALG7/ALG8 (optimized layouts are not generated on the fly).
  std::map<std::string, std::filesystem::path> placement_files;
  HexagonOrder hex_order = HexagonOrder::kCenterFirst;
  int hexfam_budget = 0;  // 0 means ceil(log2 n)
  int histogram_bins = 40;
  unsigned workers = 0;   // 0: MARCOPOLO_WORKERS or 1
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct AlgorithmResult {
  std::string algorithm;
  std::vector<StatsRow> rows;  // probes, distance, responses
  std::vector<Histogram> histograms;
  long violations = 0;  // trials breaking a bound or the success/containment invariants
  std::size_t probes_per_layer = 0;
};

struct MonteCarloResult {
  std::vector<AlgorithmResult> algorithms;
  long violations = 0;
  std::vector<StatsRow> rows() const;
};

// Throws std::runtime_error for placements that do not certify.
MonteCarloResult monte_carlo(const ExperimentConfig& config);

// Table layout: one line per algorithm, Min/Avg/Max/Bound for P and D,
// Avg/Max/Bound for R, plus stddevs and a "best" column listing the columns
// where that algorithm has the smallest value.
void write_table_csv(const std::filesystem::path& path, const std::vector<StatsRow>& rows);
std::vector<StatsRow> read_table_csv(const std::filesystem::path& path);

// Column name (e.g. "P_avg") -> algorithm(s) holding the minimum.
std::map<std::string, std::vector<std::string>> best_by_column(const std::vector<StatsRow>& rows);

// table.csv plus hist_<algorithm>_<metric>.csv per histogram. Throws on unwritable paths.
void emit_report(const MonteCarloResult& result, const std::filesystem::path& dir);

}  // namespace marcopolo
