#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "marcopolo/coverage.hpp"
#include "marcopolo/geometry.hpp"

namespace marcopolo {

enum class AlgorithmId { kAlg1 = 1, kAlg2, kAlg3, kAlg4, kAlg5, kAlg6, kAlg7, kAlg8, kHexFamily, kShell };

std::string to_string(AlgorithmId id);
// Accepts "ALG3", "alg3", "3", "HEXFAM", "SHELL".
AlgorithmId parse_algorithm(std::string_view text);
bool is_progressive(AlgorithmId id);

// Where the central hexagon goes in the hexagonal algorithms. kCenterLast
// leaves it as the unexecuted final region; kCenterFirst probes it first and
// omits the last outer hexagon instead.
enum class HexagonOrder { kCenterLast, kCenterFirst };

struct LayerPlacement {
  AlgorithmId algorithm = AlgorithmId::kAlg1;
  std::vector<Probe> probes;  // issue order; the last one is never executed
  std::optional<double> rho1;
  int response_budget = 0;  // HEXFAM only
  bool certified = false;
};

// Minimal certified rho1 values, found by bisection (see minimal_rho1) and frozen.
inline constexpr double kAlg3Rho1 = 0.84388;
inline constexpr double kAlg4Rho1 = 0.82217;
inline constexpr double kAlg5Rho1 = 0.83321;
inline constexpr double kAlg6Rho1 = 0.81575;
inline constexpr int kAlg6ProbeCount = 14;

// Construction rules parameterised by rho1. They return nullopt when the rule
// cannot be laid out at that rho1; coverage is not checked here.
std::vector<Probe> build_alg1(HexagonOrder order = HexagonOrder::kCenterLast);
std::vector<Probe> build_alg2(HexagonOrder order = HexagonOrder::kCenterLast);
std::optional<std::vector<Probe>> build_alg3(double rho1);
std::optional<std::vector<Probe>> build_alg4(double rho1);
std::optional<std::vector<Probe>> build_alg5(double rho1);
std::optional<std::vector<Probe>> build_alg6(double rho1, int probe_count = kAlg6ProbeCount);

// Center distance at which a probe of radius rk covers equal angles of the
// circle of radius r1 and the unit circle, taking the root between the two
// single-circle optima (larger covered angle than the balanced_probe_center
// root). Falls back to the annulus midline when rk cannot bridge the annulus,
// and to the unit-circle optimum sqrt(1 - rk^2) when the inner angle stays
// larger over the whole bracket (large rk).
double equal_rate_distance(double r1, double rk);

// Ring of probes around a central disk of radius r1: consecutive probes are
// advanced by the largest angle that keeps their outer arcs overlapping and
// their inner crossing inside the central disk; surplus angle is spread evenly.
std::optional<std::vector<Probe>> build_ring(double r1, const std::vector<double>& radii,
                                             const std::vector<double>& distances);

struct GenerateOptions {
  HexagonOrder hex_order = HexagonOrder::kCenterLast;
  double min_cell = 1e-4;
};

// Certified layer for ALG1..ALG6. Throws std::runtime_error if certification fails.
LayerPlacement generate_layer(AlgorithmId id, const GenerateOptions& options = {});

// Placement with all rho_k = rho1^k for progressive schemes, otherwise as built.
LayerPlacement make_progressive(AlgorithmId id, double rho1, std::vector<Probe> probes);

int hexfam_layers(int r_max, double n);
// Throws std::invalid_argument unless 1 <= r_max <= ceil(log2 n).
LayerPlacement hexfam_layer(int r_max, double n, bool certify = true);

int ceil_log2(double n);

// Certify a placement in place; returns the report.
CoverageReport certify(LayerPlacement& placement, double min_cell = 1e-4);

}  // namespace marcopolo
