#include "marcopolo/tsp.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace marcopolo {
namespace {

double held_karp(const std::vector<Point2>& p) {
  const int k = static_cast<int>(p.size());
  const int full = 1 << (k - 1);  // subsets of {1..k-1}; city 0 is the start
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(static_cast<std::size_t>(full) * k, inf);
  auto at = [&](int mask, int j) -> double& { return dp[static_cast<std::size_t>(mask) * k + j]; };
  for (int j = 1; j < k; ++j) at(1 << (j - 1), j) = distance(p[0], p[j]);
  for (int mask = 1; mask < full; ++mask) {
    for (int j = 1; j < k; ++j) {
      const double cur = at(mask, j);
      if (!(mask & (1 << (j - 1))) || cur == inf) continue;
      for (int nx = 1; nx < k; ++nx) {
        if (mask & (1 << (nx - 1))) continue;
        double& slot = at(mask | (1 << (nx - 1)), nx);
        slot = std::min(slot, cur + distance(p[j], p[nx]));
      }
    }
  }
  double best = inf;
  for (int j = 1; j < k; ++j) best = std::min(best, at(full - 1, j) + distance(p[j], p[0]));
  return best;
}

double tour_length(const std::vector<Point2>& p, const std::vector<int>& t) {
  double len = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) len += distance(p[t[i]], p[t[(i + 1) % t.size()]]);
  return len;
}

double nn_two_opt(const std::vector<Point2>& p) {
  const int k = static_cast<int>(p.size());
  std::vector<int> tour{0};
  std::vector<bool> used(k, false);
  used[0] = true;
  for (int step = 1; step < k; ++step) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
      if (!used[j] && distance(p[tour.back()], p[j]) < bd) {
        bd = distance(p[tour.back()], p[j]);
        best = j;
      }
    }
    used[best] = true;
    tour.push_back(best);
  }
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i + 1 < k; ++i) {
      for (int j = i + 2; j < k; ++j) {
        const Point2 a = p[tour[i]], b = p[tour[i + 1]], c = p[tour[j]], d = p[tour[(j + 1) % k]];
        if (distance(a, c) + distance(b, d) < distance(a, b) + distance(c, d) - 1e-12) {
          std::reverse(tour.begin() + i + 1, tour.begin() + j + 1);
          improved = true;
        }
      }
    }
  }
  return tour_length(p, tour);
}

}  // namespace

TourLength tsp_reference(const std::vector<Point2>& points) {
  if (points.size() < 2) throw std::invalid_argument("tsp_reference: need at least two points");
  if (points.size() <= static_cast<std::size_t>(kExactTourLimit)) return {held_karp(points), true};
  return {nn_two_opt(points), false};
}

}  // namespace marcopolo
