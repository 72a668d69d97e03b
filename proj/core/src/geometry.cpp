#include "marcopolo/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace marcopolo {

bool contains(const Probe& p, Point2 q, double tol) {
  return distance(p.center, q) <= p.rho + tol;
}

std::vector<Point2> Hexagon::vertices() const {
  std::vector<Point2> v;
  v.reserve(6);
  for (int j = 0; j < 6; ++j) v.push_back(center + polar(side, j * kPi / 3.0));
  return v;
}

bool Hexagon::contains(Point2 q, double tol) const {
  const double h = std::sqrt(3.0) / 2.0 * side;
  const double dx = std::abs(q.x - center.x);
  const double dy = std::abs(q.y - center.y);
  if (dy > h + tol) return false;
  // Slanted edges: sqrt(3) |dx| + |dy| <= sqrt(3) s.
  return std::sqrt(3.0) * dx + dy <= std::sqrt(3.0) * side + 2.0 * tol;
}

std::vector<Hexagon> hex_lattice(int layers, double radius) {
  if (layers < 1) throw std::invalid_argument("hex_lattice: layers must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("hex_lattice: radius must be > 0");
  const double s = 2.0 * radius / (3.0 * layers - 2.0);
  std::vector<Hexagon> out;
  out.reserve(1 + 3 * layers * (layers - 1));
  for (int ring = 1; ring < layers; ++ring) {
    std::vector<std::pair<double, Hexagon>> cells;
    for (int q = -ring; q <= ring; ++q) {
      for (int r = -ring; r <= ring; ++r) {
        const int d = std::max({std::abs(q), std::abs(r), std::abs(q + r)});
        if (d != ring) continue;
        const Point2 c{1.5 * s * q, std::sqrt(3.0) * s * (r + 0.5 * q)};
        double a = std::atan2(c.y, c.x) - kPi / 6.0 + 1e-9;
        a = std::fmod(a + 4.0 * kPi, 2.0 * kPi);
        cells.push_back({a, Hexagon{c, s}});
      }
    }
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [a, h] : cells) out.push_back(h);
  }
  out.push_back(Hexagon{{0.0, 0.0}, s});
  return out;
}

Probe circumscribe(const Hexagon& hex) { return Probe{hex.center, hex.side}; }

double chord_center_distance(double rho) {
  if (!(rho > 0.0) || rho > 1.0) throw std::invalid_argument("chord probe radius must lie in (0, 1]");
  return std::sqrt(std::max(0.0, 1.0 - rho * rho));
}

double chord_half_angle(double rho) {
  if (!(rho > 0.0) || rho > 1.0) throw std::invalid_argument("chord probe radius must lie in (0, 1]");
  return std::asin(rho);
}

Probe chord_probe(double rho, double angle) {
  return Probe{polar(chord_center_distance(rho), angle), rho};
}

BalancedPlacement balanced_probe_center(double r1, double rk) {
  if (!(r1 > 0.0) || r1 > 1.0) throw std::invalid_argument("balanced_probe_center: r1 must lie in (0, 1]");
  const double half = (1.0 - r1) / 2.0;
  if (rk < half) {
    throw std::invalid_argument("balanced_probe_center: probe too small to bridge the annulus (rk=" +
                                std::to_string(rk) + ")");
  }
  const double om = 1.0 - half;
  const double pm = std::sqrt(std::max(0.0, rk * rk - half * half));
  return {std::atan2(pm, om), std::hypot(om, pm)};
}

std::vector<Point2> circle_intersections(Point2 c0, double r0, Point2 c1, double r1) {
  const Point2 d = c1 - c0;
  const double dd = norm(d);
  if (dd == 0.0 || dd > r0 + r1 || dd < std::abs(r0 - r1)) return {};
  const double a = (dd * dd + r0 * r0 - r1 * r1) / (2.0 * dd);
  const double h2 = r0 * r0 - a * a;
  const Point2 u = (1.0 / dd) * d;
  const Point2 base = c0 + a * u;
  if (h2 <= 0.0) return {base};
  const double h = std::sqrt(h2);
  const Point2 perp{-u.y, u.x};
  return {base + h * perp, base - h * perp};
}

std::vector<double> segment_circle_params(Point2 a, Point2 b, Point2 c, double r) {
  const Point2 d = b - a;
  const Point2 f = a - c;
  const double A = dot(d, d);
  const double B = 2.0 * dot(f, d);
  const double C = dot(f, f) - r * r;
  std::vector<double> ts;
  if (A == 0.0) return ts;
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return ts;
  const double sq = std::sqrt(disc);
  // Numerically stable roots.
  const double q = -0.5 * (B + std::copysign(sq, B));
  double t0 = q / A;
  double t1 = (q != 0.0) ? C / q : t0;
  if (t0 > t1) std::swap(t0, t1);
  for (double t : {t0, t1}) {
    if (t >= 0.0 && t <= 1.0) ts.push_back(t);
  }
  return ts;
}

}  // namespace marcopolo
