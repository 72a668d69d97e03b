#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "marcopolo/placements.hpp"

namespace marcopolo {

struct OptimizerConfig {
  int population = 48;
  int generations = 200;
  double mutation_factor = 0.7;  // F
  double crossover_rate = 0.9;   // CR
  std::uint64_t seed = 1;
  std::pair<double, double> rho1_bounds{0.74, 0.84};
  int greedy_max_probes = 40;  // total probes per layer, initial ones included
  double search_min_cell = 1e-3;
  double final_min_cell = 1e-6;
  // Seed one individual with the first six probes of the ALG7 reproduction.
  bool seed_with_alg7 = true;
  unsigned workers = 0;  // 0: MARCOPOLO_WORKERS or 1
  // Called after initialisation (generation 0) and after every generation.
  std::function<void(int generation, double best_fitness)> progress;

  // Throws std::invalid_argument on population < 8, F outside (0, 2), CR outside [0, 1].
  void validate() const;
};

struct GreedyOptions {
  int max_probes = 40;
  // Certifier resolution; the effective cell is also capped at a quarter of the next radius.
  double min_cell = 1e-3;
};

struct GreedyResult {
  LayerPlacement placement;
  bool covered = false;
  bool infeasible = false;  // stopped because the next radius cannot close the largest gap
  double uncovered_area = 0.0;            // certifier bound at the last step
  std::vector<double> uncovered_history;  // one entry per certifier pass
};

// Adds probes of radius rho1^(k+1), each through two points on the hull of
// the largest uncovered region, choosing the one that removes the most
// uncovered cell area. A covered input comes back unchanged.
// Throws std::invalid_argument unless the input follows rho_k = rho1^k.
GreedyResult greedy_fill(const LayerPlacement& initial, const GreedyOptions& options = {});

// ALG4 at rho1 without its final probe, completed by greedy_fill.
GreedyResult alg7_layer(double rho1, const GreedyOptions& options = {});

struct Alg7Search {
  double lo = 0.76;
  double hi = 0.84;
  double step = 5e-4;
  GreedyOptions greedy;
  double final_min_cell = 1e-6;
};

// Smallest rho1 on the grid hi, hi - step, ... >= lo whose greedy layer
// certifies at final_min_cell. Throws std::runtime_error if none does.
LayerPlacement reproduce_alg7(const Alg7Search& search = {});

struct EvolveResult {
  LayerPlacement placement;
  double fitness = 0.0;
  std::vector<double> best_fitness;  // after initialisation, then per generation
  long evaluations = 0;
};

// Carries the best placement found when nothing certified.
class OptimizerError : public std::runtime_error {
 public:
  OptimizerError(const std::string& what, LayerPlacement best_effort)
      : std::runtime_error(what), best_effort_(std::move(best_effort)) {}
  const LayerPlacement& best_effort() const { return best_effort_; }

 private:
  LayerPlacement best_effort_;
};

// Layout vector: rho1, then (angle, distance) for probes 1..6 with radii rho1^k.
inline constexpr int kEvolveDimensions = 13;
std::vector<Probe> decode_initial(const std::vector<double>& x);

// c of the greedily completed layout, plus 100 and the remaining uncovered
// area when it does not cover.
double evolve_fitness(const std::vector<double>& x, const GreedyOptions& greedy, GreedyResult* out = nullptr);

// Differential evolution (rand/1/bin) over the layout vector. Bit-reproducible
// for a fixed config. The result is certified at final_min_cell.
EvolveResult evolve_initial(const OptimizerConfig& config);

}  // namespace marcopolo
