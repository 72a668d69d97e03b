#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "marcopolo/geometry.hpp"
#include "marcopolo/placements.hpp"

namespace marcopolo {

struct World {
  double n = 1.0;
  std::vector<Point2> pois;  // absolute coordinates
  std::vector<bool> active;  // tracking device on/off, one per POI

  static World single(double n, Point2 poi);
  static World many(double n, std::vector<Point2> pois);
};

// Thrown when a simulated run leaves its own invariants (a geometry bug).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Closed-disk query over the active POIs.
bool probe(const World& world, Point2 center, double d);

struct SearchState {
  Point2 area_center;
  double area_radius = 1.0;
  Point2 delta_pos;
};

struct SearchTrace {
  long probes_issued = 0;
  double distance = 0.0;
  long responses = 0;      // positive probes
  long poi_responses = 0;  // active POIs inside positive probes, summed
  std::vector<long> responses_per_poi;
  std::vector<Point2> path;  // Delta's positions, starting point first
  bool success = false;
  int found_poi = -1;  // -1 in adversarial mode
  int layers = 0;
  SearchState final_state;
};

enum class Adversary {
  kNone,           // answer from the world's POIs
  kLastRegion,     // every executed probe negative
  kWorstProbe,     // first positive at the index attaining the probe coefficient
  kWorstDistance,  // first positive at the index attaining the distance bound
};

struct RunOptions {
  Adversary adversary = Adversary::kNone;
  bool record_path = true;
};

// Recursive descent with one placement per layer (last probe never executed).
// Throws InvariantViolation if no active POI remains in the current disk.
SearchTrace run_single(const LayerPlacement& placement, const World& world, const SearchState& start,
                       const RunOptions& options = {});
SearchTrace run_single(const LayerPlacement& placement, const World& world, const RunOptions& options = {});

struct HexfamTrace {
  SearchTrace trace;
  int layers = 0;  // lattice layers L
};

HexfamTrace run_hexfam(int r_max, const World& world);
// Same, with a layer already built by hexfam_layer(r_max, world.n).
HexfamTrace run_hexfam(const LayerPlacement& layer, const World& world);

struct FindAllTrace {
  long probes_total = 0;        // excludes termination probes
  long termination_probes = 0;  // final negative doubling round and the origin check
  long doubling_probes = 0;     // successful doubling rounds only
  double distance_total = 0.0;  // excludes the termination move to the origin
  double termination_distance = 0.0;
  std::vector<int> found_order;
  std::vector<double> gaps;  // e_i: distance between consecutively found POIs
  double gap_sum = 0.0;
  std::vector<SearchTrace> searches;
};

// Memoryless find-all: locate, shut off, double the probe radius around Delta
// until positive, search that disk, repeat; stops after a negative doubling
// probe of radius >= 2n and a negative radius-2n probe at the origin.
FindAllTrace find_all(const LayerPlacement& placement, World world);

struct ShellTrace {
  SearchTrace trace;
  long radial_probes = 0;
  long angular_probes = 0;
};

// Shell baseline: bisect the probe radius at the origin down to a width-1
// annulus, then bisect the annulus angularly with probes centered on its outer
// edge, finishing once the remaining sector fits in a radius-1 disk.
// Assumes exactly one POI.
ShellTrace shell_search(const World& world);

}  // namespace marcopolo
