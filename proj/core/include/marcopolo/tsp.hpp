#pragma once

#include <vector>

#include "marcopolo/geometry.hpp"

namespace marcopolo {

struct TourLength {
  double length = 0.0;
  bool exact = false;  // false: nearest neighbour + 2-opt upper bound
};

inline constexpr int kExactTourLimit = 12;

// Closed tour over the points: Held-Karp for k <= 12, heuristic above.
// Throws std::invalid_argument for fewer than two points.
TourLength tsp_reference(const std::vector<Point2>& points);

}  // namespace marcopolo
