#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace marcopolo {

inline constexpr double kPi = 3.14159265358979323846;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double norm2(Point2 a) { return a.x * a.x + a.y * a.y; }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 polar(double r, double angle) { return {r * std::cos(angle), r * std::sin(angle)}; }
inline Point2 rotate(Point2 p, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

// Closed disk query in the unit-disk frame; rho is relative to the current search radius.
struct Probe {
  Point2 center;
  double rho = 1.0;

  friend bool operator==(const Probe&, const Probe&) = default;
};

bool contains(const Probe& p, Point2 q, double tol = 0.0);

// Flat-top regular hexagon: two vertices on the horizontal axis through its center.
struct Hexagon {
  Point2 center;
  double side = 1.0;

  std::vector<Point2> vertices() const;
  bool contains(Point2 q, double tol = 1e-12) const;
};

// 1 + 6*C(L,2) hexagons of side 2r/(3L-2), ring by ring outward, each ring
// counterclockwise from the 30 degree direction, center hexagon last.
std::vector<Hexagon> hex_lattice(int layers, double radius);

Probe circumscribe(const Hexagon& hex);

// Probe whose diameter is a chord of the unit circle, centered at the given
// angular position. Throws std::invalid_argument for rho outside (0, 1].
Probe chord_probe(double rho, double angle = 0.0);
double chord_center_distance(double rho);
double chord_half_angle(double rho);

struct BalancedPlacement {
  double theta = 0.0;            // angle between the radial segment A A' and the probe center
  double center_distance = 0.0;  // |O P_k|
};

// Probe of radius rk through the radial segment from (r1, 0) to (1, 0), with
// that segment a chord perpendicular to O-M at the annulus midpoint M.
// Throws std::invalid_argument when rk < (1 - r1) / 2.
BalancedPlacement balanced_probe_center(double r1, double rk);

// Intersection points of two circles; empty when disjoint, nested or coincident.
std::vector<Point2> circle_intersections(Point2 c0, double r0, Point2 c1, double r1);

// Intersections of the circle |p - c| = r with the segment a + t (b - a), t in [0, 1].
std::vector<double> segment_circle_params(Point2 a, Point2 b, Point2 c, double r);

}  // namespace marcopolo
