#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "marcopolo/tsp.hpp"

using namespace marcopolo;

namespace {

// Brute force over all orders with the first point fixed.
double brute_force_tour(const std::vector<Point2>& pts) {
  std::vector<int> order(pts.size() - 1);
  std::iota(order.begin(), order.end(), 1);
  double best = 1e300;
  do {
    double len = distance(pts[0], pts[order.front()]) + distance(pts[order.back()], pts[0]);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) len += distance(pts[order[i]], pts[order[i + 1]]);
    best = std::min(best, len);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace

TEST_CASE("forced geometries") {
  const auto line = tsp_reference({{0, 0}, {1, 0}, {2, 0}});
  CHECK(line.exact);
  CHECK(line.length == doctest::Approx(4.0));
  CHECK(tsp_reference({{0, 0}, {1, 0}, {1, 1}, {0, 1}}).length == doctest::Approx(4.0));
  CHECK(tsp_reference({{0, 0}, {3, 4}}).length == doctest::Approx(10.0));
  CHECK_THROWS_AS(tsp_reference({{0, 0}}), std::invalid_argument);
}

TEST_CASE("exact DP equals brute force") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int t = 0; t < 40; ++t) {
    const int k = 3 + t % 6;
    std::vector<Point2> pts;
    for (int i = 0; i < k; ++i) pts.push_back({u(rng), u(rng)});
    const auto r = tsp_reference(pts);
    CHECK(r.exact);
    CHECK(r.length == doctest::Approx(brute_force_tour(pts)).epsilon(1e-12));
  }
}

TEST_CASE("heuristic beyond the exact limit is a valid upper bound") {
  // Points on a circle: the optimum is the polygon perimeter.
  std::vector<Point2> ring;
  const int k = 20;
  for (int i = 0; i < k; ++i) ring.push_back(polar(10.0, 2.0 * kPi * ((i * 7) % k) / k));
  const auto r = tsp_reference(ring);
  CHECK_FALSE(r.exact);
  const double perimeter = k * 2.0 * 10.0 * std::sin(kPi / k);
  CHECK(r.length >= perimeter - 1e-9);
  CHECK(r.length == doctest::Approx(perimeter).epsilon(1e-9));
}
