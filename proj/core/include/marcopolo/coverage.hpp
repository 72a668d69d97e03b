#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "marcopolo/geometry.hpp"

namespace marcopolo {

struct CoverageOptions {
  double min_cell = 1e-4;
  // Return as soon as any part of the disk is known to be uncovered.
  bool stop_at_first_gap = false;
  // Cells that lie wholly outside every probe are refined only where they
  // cross the unit circle; interior ones are kept whole.
  bool refine_boundary_gaps = true;
  // Distance slack for the exact leaf test (circle incidence, interval joins).
  double tolerance = 1e-10;
};

struct UncoveredCell {
  Point2 center;
  double size = 0.0;
};

struct CoverageReport {
  bool certified_covered = false;
  double uncovered_area_upper_bound = 0.0;
  // Uncovered cells grouped by 8-neighbour adjacency, largest total area first.
  std::vector<std::vector<UncoveredCell>> uncovered_regions;
  double min_cell_size_reached = 0.0;
  std::size_t cells_visited = 0;
  std::size_t exact_leaf_tests = 0;
  // A point of the closed unit disk outside every probe, when one was seen.
  std::optional<Point2> witness;
};

// Quadtree certification of "closed unit disk is inside the union of probes".
// A cell is settled when it misses the disk, when cell-and-disk fits in one
// probe, or, at the finest level, when the exact local test (boundary arcs
// and segments covered, every circle-circle vertex locally covered) passes.
// certified_covered is sound; a false result may still be a covered layout
// that is tight at more points than the resolution separates.
CoverageReport certify_coverage(std::span<const Probe> probes, const CoverageOptions& options);
CoverageReport certify_coverage(std::span<const Probe> probes, double min_cell = 1e-4);

// Exact covered test for cell-and-disk, exposed for tests and benchmarks.
bool region_covered_exactly(double x0, double y0, double x1, double y1,
                            std::span<const Probe> probes, double tolerance = 1e-10);

struct ConvexPolygon {
  std::vector<Point2> vertices;  // counterclockwise
  double area = 0.0;
};

std::vector<Point2> convex_hull(std::vector<Point2> points);
double polygon_area(const std::vector<Point2>& polygon);

// Convex hull of the cell corners of each uncovered cluster, largest area first.
std::vector<ConvexPolygon> uncovered_hulls(const CoverageReport& report);

}  // namespace marcopolo
