#pragma once

#include <span>

#include "marcopolo/geometry.hpp"
#include "marcopolo/placements.hpp"

namespace marcopolo {

struct BoundsReport {
  double c_probes = 0.0;    // coefficient of ceil(log2 n) in P(n)
  double b_distance = 0.0;  // coefficient of n in D(n)
  double c_responses = 0.0; // coefficient of ceil(log2 n) in R_max
  int worst_probe_index = 0;     // 1-based k attaining c_probes
  int worst_distance_index = 0;  // 1-based k attaining b_distance
  int worst_response_index = 0;  // 1-based index of the largest probe
  // The omitted-last-probe shortcut assumes the last two probes are at least
  // d1 * rho_m apart; false flags a placement where the saving is overstated.
  bool shortcut_valid = true;
};

// max( max_{k<m} k / -log2 rho_k , (m - 1) / -log2 rho_m ).
// Throws std::domain_error if some rho_k >= 1.
double probe_coefficient(std::span<const Probe> probes, int* worst_index = nullptr);

// Recurrence: running leg sum d_k, last probe minus 2 d1 rho_m, max of d_k / (1 - rho_k).
double distance_bound(std::span<const Probe> probes, int* worst_index = nullptr);
bool distance_shortcut_valid(std::span<const Probe> probes);

// -1 / log2(rho_max). Throws std::domain_error if rho_max >= 1.
double response_bound(std::span<const Probe> probes, int* worst_index = nullptr);

BoundsReport analyze(std::span<const Probe> probes);

// Per-run limits for a search of radius n. Probe and response counts are
// integers and the last layer may overshoot, so
//   P <= ceil(c * ceil(log2 n)) + m - 2,  R <= ceil(c_R * ceil(log2 n)),  D <= b * n.
struct RunLimits {
  double probes = 0.0;
  double distance = 0.0;
  double responses = 0.0;
};
RunLimits run_limits(const BoundsReport& bounds, std::size_t probe_count, double n);

enum class Scheme { kAlg3, kAlg4, kAlg5, kAlg6, kPerimeterOnly };

struct Rho1SearchOptions {
  double lo = 0.5;
  double hi = 0.99;
  double tolerance = 1e-4;
  double min_cell = 1e-4;
  int alg6_probe_count = kAlg6ProbeCount;
};

// Smallest rho1 (to tolerance, the certified end of the bracket) at which the
// scheme covers the disk. The upper end steps down by 0.01 until it certifies;
// throws std::runtime_error if no value in the bracket does.
double minimal_rho1(Scheme scheme, const Rho1SearchOptions& options = {});

// Sum_{k>=1} 2 asin(rho^k) >= 2 pi: abutting perimeter arcs close the circle.
bool perimeter_closes(double rho1, double term_threshold = 1e-12);

// Sum_{k>=1} asin(2^(-k/c)), truncated once a term drops below the threshold.
double perimeter_series(double c, double term_threshold = 1e-12);

struct LowerBound {
  double c = 0.0;
  double rho = 0.0;
};

// Root of perimeter_series(c) = pi on [2, 3], and rho = 2^(-1/c).
LowerBound lower_bound_constant(double term_threshold = 1e-12);

}  // namespace marcopolo
