#include <algorithm>
#include <random>

#include "doctest.h"
#include "marcopolo/geometry.hpp"

using namespace marcopolo;

namespace {

// Point-in-hexagon oracle: inside iff on the inner side of all six edges.
bool inside_polygon(const std::vector<Point2>& v, Point2 q, double tol) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i], b = v[(i + 1) % v.size()];
    if (cross(b - a, q - a) < -tol * distance(a, b)) return false;
  }
  return true;
}

long binom2(long L) { return L * (L - 1) / 2; }

}  // namespace

TEST_CASE("hex_lattice sizes and sides") {
  auto two = hex_lattice(2, 1.0);
  CHECK(two.size() == 7);
  for (const auto& h : two) CHECK(h.side == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(two.back().center == Point2{0.0, 0.0});

  auto one = hex_lattice(1, 1.0);
  REQUIRE(one.size() == 1);
  CHECK(one[0].side == doctest::Approx(2.0));

  auto four = hex_lattice(4, 1.0);
  CHECK(four.size() == 37);
  CHECK(four[0].side == doctest::Approx(0.2));
}

TEST_CASE("lattice count is the centered hexagonal number") {
  for (int L = 1; L <= 12; ++L) CHECK(hex_lattice(L, 3.0).size() == static_cast<std::size_t>(1 + 6 * binom2(L)));
}

TEST_CASE("lattice covers the disk (sampled)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int L = 1; L <= 8; ++L) {
    for (double r : {1.0, 5.0, 17.0}) {
      const auto hexes = hex_lattice(L, r);
      std::vector<std::vector<Point2>> polys;
      for (const auto& h : hexes) polys.push_back(h.vertices());
      long misses = 0;
      for (int i = 0; i < 100000; ++i) {
        const Point2 q = polar(r * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
        bool hit = false;
        for (const auto& p : polys) {
          if (inside_polygon(p, q, 1e-12)) {
            hit = true;
            break;
          }
        }
        misses += !hit;
      }
      CAPTURE(L);
      CAPTURE(r);
      CHECK(misses == 0);
    }
  }
}

TEST_CASE("hexagon contains agrees with the half-plane oracle") {
  const Hexagon h{{0.3, -0.2}, 0.7};
  const auto v = h.vertices();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 20000; ++i) {
    const Point2 q{u(rng), u(rng)};
    const bool a = inside_polygon(v, q, 0.0);
    const bool b = h.contains(q, 0.0);
    if (a != b) {
      // Only points within rounding of an edge may disagree.
      bool near_edge = false;
      for (std::size_t k = 0; k < v.size(); ++k) {
        const Point2 e0 = v[k], e1 = v[(k + 1) % v.size()];
        if (std::abs(cross(e1 - e0, q - e0)) / distance(e0, e1) < 1e-12) near_edge = true;
      }
      CHECK(near_edge);
    }
  }
}

TEST_CASE("circumscribe puts every vertex on the probe circle") {
  const Hexagon h{{0.0, 0.0}, 0.5};
  const Probe p = circumscribe(h);
  CHECK(p.center == Point2{0.0, 0.0});
  CHECK(p.rho == doctest::Approx(0.5));
  for (const Hexagon& g : {Hexagon{{1.0, 2.0}, 0.3}, Hexagon{{-4.0, 0.5}, 2.5}}) {
    const Probe q = circumscribe(g);
    for (const auto& v : g.vertices()) CHECK(distance(v, q.center) == doctest::Approx(g.side).epsilon(1e-14));
  }
  for (const auto& hx : hex_lattice(2, 1.0)) CHECK(circumscribe(hx).rho == doctest::Approx(0.5));
}

TEST_CASE("chord probes") {
  CHECK(norm(chord_probe(1.0).center) == doctest::Approx(0.0));
  CHECK(chord_center_distance(0.844) == doctest::Approx(std::sqrt(1.0 - 0.844 * 0.844)).epsilon(1e-14));
  CHECK(chord_center_distance(0.844) == doctest::Approx(0.536343).epsilon(1e-6));
  CHECK(chord_half_angle(0.74915) == doctest::Approx(0.846778).epsilon(1e-6));
  CHECK_THROWS_AS(chord_probe(1.2), std::invalid_argument);
  CHECK_THROWS_AS(chord_probe(0.0), std::invalid_argument);

  // Identity |center|^2 + rho^2 = 1, and the chord endpoints sit on both circles.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(1e-3, 1.0), a(0.0, 2.0 * kPi);
  for (int i = 0; i < 10000; ++i) {
    const double rho = u(rng), ang = a(rng);
    const Probe p = chord_probe(rho, ang);
    CHECK(norm2(p.center) + rho * rho == doctest::Approx(1.0).epsilon(1e-12));
    const double half = chord_half_angle(rho);
    CHECK(distance(polar(1.0, ang + half), p.center) == doctest::Approx(rho).epsilon(1e-10));
  }
}

TEST_CASE("balanced probe center") {
  // rk = (1 - r1) / 2: the probe is the annulus-width disk at M, theta = 0.
  auto flat = balanced_probe_center(0.6, 0.2);
  CHECK(flat.theta == doctest::Approx(0.0));
  CHECK(flat.center_distance == doctest::Approx(0.8));

  auto b = balanced_probe_center(0.8125, 0.8125 * 0.8125);
  CHECK(b.theta == doctest::Approx(0.62472).epsilon(2e-5));
  CHECK(b.center_distance == doctest::Approx(1.11728).epsilon(2e-5));

  auto degenerate = balanced_probe_center(1.0, 0.4);
  CHECK(degenerate.theta == doctest::Approx(std::atan(0.4)));

  CHECK_THROWS_AS(balanced_probe_center(0.6, 0.1), std::invalid_argument);
}

TEST_CASE("balanced angle property") {
  // A = (r1, 0) on the inner circle and A' = (1, 0) on the unit circle both lie
  // on the probe circle.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double r1 = 0.5 + 0.45 * u(rng);
    const double lo = (1.0 - r1) / 2.0;
    const double rk = lo + (0.9 - lo) * u(rng);
    const auto b = balanced_probe_center(r1, rk);
    const Point2 c = polar(b.center_distance, b.theta);
    // Circle-circle intersections computed directly (independent of the library).
    auto angle_on = [&](double R) {
      const double d = b.center_distance;
      const double cosv = (R * R + d * d - rk * rk) / (2.0 * R * d);
      return std::acos(std::clamp(cosv, -1.0, 1.0));
    };
    const double inner = angle_on(r1), outer = angle_on(1.0);
    CAPTURE(r1);
    CAPTURE(rk);
    // Both chords begin on the segment from (r1, 0) to (1, 0): the probe passes through them.
    CHECK(distance(c, {r1, 0.0}) == doctest::Approx(rk).epsilon(1e-9));
    CHECK(distance(c, {1.0, 0.0}) == doctest::Approx(rk).epsilon(1e-9));
    // Angle AOP_k and angle A'OP_k; by reflection in OP_k both circles advance by twice this.
    CHECK(std::abs(inner - outer) < 1e-9);
    CHECK(std::abs(inner - b.theta) < 1e-9);
  }
}

TEST_CASE("circle intersections") {
  auto pts = circle_intersections({0.0, 0.0}, 1.0, {1.0, 0.0}, 1.0);
  REQUIRE(pts.size() == 2);
  for (const auto& p : pts) {
    CHECK(norm(p) == doctest::Approx(1.0));
    CHECK(distance(p, {1.0, 0.0}) == doctest::Approx(1.0));
  }
  CHECK(circle_intersections({0.0, 0.0}, 1.0, {3.0, 0.0}, 1.0).empty());
  CHECK(circle_intersections({0.0, 0.0}, 2.0, {0.1, 0.0}, 0.5).empty());
  CHECK(circle_intersections({0.0, 0.0}, 1.0, {0.0, 0.0}, 1.0).empty());
}

TEST_CASE("segment circle parameters") {
  auto t = segment_circle_params({-2.0, 0.0}, {2.0, 0.0}, {0.0, 0.0}, 1.0);
  REQUIRE(t.size() == 2);
  CHECK(t[0] == doctest::Approx(0.25));
  CHECK(t[1] == doctest::Approx(0.75));
  CHECK(segment_circle_params({-2.0, 2.0}, {2.0, 2.0}, {0.0, 0.0}, 1.0).empty());
}
