#include "marcopolo/coverage.hpp"

#include <algorithm>
#include <numeric>

namespace marcopolo {
namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kAngleMargin = 1e-9;

struct Interval {
  double lo, hi;
};

// True when [0, length] lies inside the union of closed intervals (slack eps).
bool covers_span(std::vector<Interval>& iv, double length, double eps) {
  std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double reach = 0.0;
  for (const auto& i : iv) {
    if (i.lo > reach + eps) break;
    reach = std::max(reach, i.hi);
    if (reach >= length - eps) return true;
  }
  return reach >= length - eps;
}

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

struct Box {
  double x0, y0, x1, y1;
  bool inside(Point2 p, double tol) const {
    return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol && p.y <= y1 + tol;
  }
};

double box_distance2(const Box& b, Point2 p) {
  const double dx = std::max({b.x0 - p.x, 0.0, p.x - b.x1});
  const double dy = std::max({b.y0 - p.y, 0.0, p.y - b.y1});
  return dx * dx + dy * dy;
}

// Angles where the unit circle meets the box boundary.
std::vector<double> circle_box_angles(const Box& b) {
  std::vector<double> out;
  for (double x : {b.x0, b.x1}) {
    if (std::abs(x) > 1.0) continue;
    const double h = std::sqrt(std::max(0.0, 1.0 - x * x));
    for (double y : {h, -h}) {
      if (y >= b.y0 && y <= b.y1) out.push_back(wrap_angle(std::atan2(y, x)));
    }
  }
  for (double y : {b.y0, b.y1}) {
    if (std::abs(y) > 1.0) continue;
    const double w = std::sqrt(std::max(0.0, 1.0 - y * y));
    for (double x : {w, -w}) {
      if (x >= b.x0 && x <= b.x1) out.push_back(wrap_angle(std::atan2(y, x)));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double c) { return std::abs(a - c) < 1e-15; }),
            out.end());
  return out;
}

// Arcs [lo, hi] (hi > lo, unwrapped) of the unit circle lying inside the box.
std::vector<Interval> circle_arcs_in_box(const Box& b) {
  std::vector<Interval> arcs;
  const auto ang = circle_box_angles(b);
  if (ang.empty()) {
    if (b.inside({1.0, 0.0}, 0.0)) arcs.push_back({0.0, kTwoPi});
    return arcs;
  }
  const std::size_t n = ang.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = ang[i];
    const double hi = (i + 1 < n) ? ang[i + 1] : ang[0] + kTwoPi;
    if (hi - lo < 1e-15) continue;
    const double mid = 0.5 * (lo + hi);
    if (b.inside(polar(1.0, mid), 0.0)) arcs.push_back({lo, hi});
  }
  return arcs;
}

// Farthest distance from c to a point of box-and-unit-disk, or -1 if that set is empty.
double farthest_in_clipped_box(const Box& b, Point2 c) {
  double best = -1.0;
  const Point2 corners[4] = {{b.x0, b.y0}, {b.x1, b.y0}, {b.x1, b.y1}, {b.x0, b.y1}};
  bool all_inside = true;
  for (const auto& p : corners) {
    if (norm2(p) <= 1.0) {
      best = std::max(best, distance(p, c));
    } else {
      all_inside = false;
    }
  }
  if (all_inside) return best;
  for (double a : circle_box_angles(b)) best = std::max(best, distance(polar(1.0, a), c));
  const double nc = norm(c);
  if (nc > 0.0) {
    const Point2 far = (-1.0 / nc) * c;
    if (b.inside(far, 0.0)) best = std::max(best, 1.0 + nc);
  } else if (best >= 0.0) {
    best = std::max(best, 1.0);
  }
  return best;
}

// Closed arc cone [lo, hi] of directions, or the full circle.
struct Cone {
  bool full = true;
  double lo = 0.0, hi = 0.0;
  bool empty = false;
};

Cone tangent_cone(const std::vector<Point2>& inward_normals) {
  Cone cone;
  if (inward_normals.empty()) return cone;
  cone.full = false;
  const double a0 = std::atan2(inward_normals[0].y, inward_normals[0].x);
  cone.lo = a0 - kPi / 2.0;
  cone.hi = a0 + kPi / 2.0;
  for (std::size_t i = 1; i < inward_normals.size(); ++i) {
    double a = std::atan2(inward_normals[i].y, inward_normals[i].x);
    while (a - a0 > kPi) a -= kTwoPi;
    while (a - a0 < -kPi) a += kTwoPi;
    cone.lo = std::max(cone.lo, a - kPi / 2.0);
    cone.hi = std::min(cone.hi, a + kPi / 2.0);
  }
  if (cone.hi < cone.lo) cone.empty = true;
  return cone;
}

// Does the union of open half-planes of directions toward each center cover the cone?
bool directions_cover_cone(const Cone& cone, Point2 w, const std::vector<Point2>& centers) {
  if (cone.empty) return true;
  const double start = cone.full ? 0.0 : cone.lo;
  const double length = cone.full ? kTwoPi : cone.hi - cone.lo;
  std::vector<Interval> iv;
  for (const auto& c : centers) {
    const double a = std::atan2(c.y - w.y, c.x - w.x);
    const double lo = wrap_angle(a - kPi / 2.0 + kAngleMargin - start);
    const double len = kPi - 2.0 * kAngleMargin;
    iv.push_back({lo, lo + len});
    iv.push_back({lo - kTwoPi, lo - kTwoPi + len});
  }
  // Open intervals: 0 must sit strictly inside one, then overlaps must be strict.
  std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double reach = -1.0;
  for (const auto& i : iv) {
    if (i.lo < 0.0 && i.hi > 0.0) reach = std::max(reach, i.hi);
  }
  if (reach <= 0.0) return false;
  for (const auto& i : iv) {
    if (i.lo >= reach) break;
    reach = std::max(reach, i.hi);
  }
  return reach > length;
}

}  // namespace

bool region_covered_exactly(double x0, double y0, double x1, double y1, std::span<const Probe> probes,
                            double tolerance) {
  const Box box{x0, y0, x1, y1};
  // Boundary: the four edges clipped to the disk.
  const Point2 corners[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  for (int e = 0; e < 4; ++e) {
    const Point2 a = corners[e];
    const Point2 b = corners[(e + 1) % 4];
    const Point2 d = b - a;
    const double len = norm(d);
    if (len == 0.0) continue;
    // Part of the edge inside the closed unit disk.
    const double A = dot(d, d), B = 2.0 * dot(a, d), C = dot(a, a) - 1.0;
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) continue;
    const double sq = std::sqrt(disc);
    const double t_lo = std::max(0.0, (-B - sq) / (2.0 * A));
    const double t_hi = std::min(1.0, (-B + sq) / (2.0 * A));
    if (t_hi < t_lo) continue;
    std::vector<Interval> iv;
    for (const auto& p : probes) {
      const Point2 f = a - p.center;
      const double r = p.rho + tolerance;
      const double pb = 2.0 * dot(f, d), pc = dot(f, f) - r * r;
      const double pdisc = pb * pb - 4.0 * A * pc;
      if (pdisc < 0.0) continue;
      const double psq = std::sqrt(pdisc);
      const double s0 = (-pb - psq) / (2.0 * A), s1 = (-pb + psq) / (2.0 * A);
      if (s1 < t_lo || s0 > t_hi) continue;
      iv.push_back({(std::max(s0, t_lo) - t_lo) * len, (std::min(s1, t_hi) - t_lo) * len});
    }
    if (!covers_span(iv, (t_hi - t_lo) * len, tolerance)) return false;
  }
  // Boundary: arcs of the unit circle inside the box.
  for (const auto& arc : circle_arcs_in_box(box)) {
    std::vector<Interval> iv;
    bool full = false;
    for (const auto& p : probes) {
      const double nc = norm(p.center);
      const double r = p.rho + tolerance;
      if (nc < 1e-15) {
        if (r >= 1.0) full = true;
        continue;
      }
      const double cb = (1.0 + nc * nc - r * r) / (2.0 * nc);
      if (cb <= -1.0) {
        full = true;
        continue;
      }
      if (cb >= 1.0) continue;
      const double beta = std::acos(cb);
      const double lo = wrap_angle(std::atan2(p.center.y, p.center.x) - beta - arc.lo);
      iv.push_back({lo, lo + 2.0 * beta});
      iv.push_back({lo - kTwoPi, lo - kTwoPi + 2.0 * beta});
    }
    if (full) continue;
    if (!covers_span(iv, arc.hi - arc.lo, tolerance)) return false;
  }
  // Interior: every circle-circle vertex inside the region is locally covered.
  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (std::size_t j = i + 1; j < probes.size(); ++j) {
      const Probe& pi = probes[i];
      const Probe& pj = probes[j];
      if (pi.center == pj.center) continue;
      for (const Point2 w : circle_intersections(pi.center, pi.rho, pj.center, pj.rho)) {
        if (!box.inside(w, tolerance) || norm(w) > 1.0 + tolerance) continue;
        bool interior = false;
        std::vector<Point2> through;
        for (const auto& p : probes) {
          const double dd = distance(w, p.center);
          if (dd < p.rho - tolerance) {
            interior = true;
            break;
          }
          if (dd <= p.rho + tolerance) through.push_back(p.center);
        }
        if (interior) continue;
        std::vector<Point2> normals;
        if (w.x - x0 <= tolerance) normals.push_back({1.0, 0.0});
        if (x1 - w.x <= tolerance) normals.push_back({-1.0, 0.0});
        if (w.y - y0 <= tolerance) normals.push_back({0.0, 1.0});
        if (y1 - w.y <= tolerance) normals.push_back({0.0, -1.0});
        if (norm(w) >= 1.0 - tolerance) normals.push_back((-1.0) * w);
        if (!directions_cover_cone(tangent_cone(normals), w, through)) return false;
      }
    }
  }
  return true;
}

namespace {

class Certifier {
 public:
  Certifier(std::span<const Probe> probes, const CoverageOptions& opt) : probes_(probes), opt_(opt) {}

  CoverageReport run() {
    report_.min_cell_size_reached = 2.0;
    std::vector<int> all(probes_.size());
    std::iota(all.begin(), all.end(), 0);
    visit(Box{-1.0, -1.0, 1.0, 1.0}, all);
    report_.certified_covered = cells_.empty() && !report_.witness;
    if (report_.certified_covered) {
      report_.uncovered_area_upper_bound = 0.0;
    } else {
      double area = 0.0;
      for (const auto& c : cells_) area += c.size * c.size;
      report_.uncovered_area_upper_bound = area;
      if (cells_.empty() && report_.witness) {
        cells_.push_back({*report_.witness, 0.0});
      }
      cluster();
    }
    return std::move(report_);
  }

 private:
  void record(const Box& b, std::optional<Point2> witness) {
    cells_.push_back({{0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)}, b.x1 - b.x0});
    if (witness && !report_.witness) report_.witness = witness;
    if (opt_.stop_at_first_gap) stop_ = true;
  }

  void visit(const Box& b, const std::vector<int>& parent) {
    if (stop_) return;
    ++report_.cells_visited;
    const double size = b.x1 - b.x0;
    report_.min_cell_size_reached = std::min(report_.min_cell_size_reached, size);
    if (box_distance2(b, {0.0, 0.0}) > 1.0) return;

    std::vector<int> local;
    local.reserve(parent.size());
    for (int idx : parent) {
      const Probe& p = probes_[idx];
      if (box_distance2(b, p.center) <= p.rho * p.rho) local.push_back(idx);
    }
    const Point2 mid{0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)};
    if (local.empty()) {
      // Whole cell misses every probe; its point nearest O is a witness.
      const Point2 wit{std::clamp(0.0, b.x0, b.x1), std::clamp(0.0, b.y0, b.y1)};
      const bool crosses = std::hypot(std::max(std::abs(b.x0), std::abs(b.x1)),
                                      std::max(std::abs(b.y0), std::abs(b.y1))) > 1.0;
      if (opt_.refine_boundary_gaps && !opt_.stop_at_first_gap && crosses && size > opt_.min_cell) {
        split(b, local);
        return;
      }
      record(b, wit);
      return;
    }
    for (int idx : local) {
      const Probe& p = probes_[idx];
      const double far = farthest_in_clipped_box(b, p.center);
      if (far <= p.rho) return;
    }
    if (opt_.stop_at_first_gap && norm(mid) <= 1.0) {
      bool hit = false;
      for (int idx : local) {
        if (contains(probes_[idx], mid)) {
          hit = true;
          break;
        }
      }
      if (!hit) {
        record(b, mid);
        return;
      }
    }
    if (size <= opt_.min_cell) {
      ++report_.exact_leaf_tests;
      std::vector<Probe> subset;
      subset.reserve(local.size());
      for (int idx : local) subset.push_back(probes_[idx]);
      if (!region_covered_exactly(b.x0, b.y0, b.x1, b.y1, subset, opt_.tolerance)) record(b, std::nullopt);
      return;
    }
    split(b, local);
  }

  void split(const Box& b, const std::vector<int>& local) {
    const double mx = 0.5 * (b.x0 + b.x1), my = 0.5 * (b.y0 + b.y1);
    visit(Box{b.x0, b.y0, mx, my}, local);
    visit(Box{mx, b.y0, b.x1, my}, local);
    visit(Box{b.x0, my, mx, b.y1}, local);
    visit(Box{mx, my, b.x1, b.y1}, local);
  }

  void cluster() {
    const std::size_t n = cells_.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto xmin = [&](std::size_t i) { return cells_[i].center.x - 0.5 * cells_[i].size; };
    auto xmax = [&](std::size_t i) { return cells_[i].center.x + 0.5 * cells_[i].size; };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xmin(a) < xmin(b); });
    const double eps = 1e-12;
    std::vector<std::size_t> active;
    for (std::size_t oi : order) {
      const auto& c = cells_[oi];
      const double x0 = xmin(oi);
      std::erase_if(active, [&](std::size_t a) { return xmax(a) < x0 - eps; });
      for (std::size_t a : active) {
        const auto& o = cells_[a];
        const double gap = std::abs(o.center.y - c.center.y) - 0.5 * (o.size + c.size);
        if (gap <= eps) parent[find(a)] = find(oi);
      }
      active.push_back(oi);
    }
    std::vector<std::vector<UncoveredCell>> groups;
    std::vector<long> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = find(i);
      if (slot[r] < 0) {
        slot[r] = static_cast<long>(groups.size());
        groups.emplace_back();
      }
      groups[slot[r]].push_back(cells_[i]);
    }
    auto area = [](const std::vector<UncoveredCell>& g) {
      double a = 0.0;
      for (const auto& c : g) a += c.size * c.size;
      return a;
    };
    std::stable_sort(groups.begin(), groups.end(),
                     [&](const auto& a, const auto& b) { return area(a) > area(b); });
    report_.uncovered_regions = std::move(groups);
  }

  std::span<const Probe> probes_;
  CoverageOptions opt_;
  CoverageReport report_;
  std::vector<UncoveredCell> cells_;
  bool stop_ = false;
};

}  // namespace

CoverageReport certify_coverage(std::span<const Probe> probes, const CoverageOptions& options) {
  if (probes.empty()) throw std::invalid_argument("certify_coverage: empty placement");
  if (!(options.min_cell > 0.0)) throw std::invalid_argument("certify_coverage: min_cell must be > 0");
  return Certifier(probes, options).run();
}

CoverageReport certify_coverage(std::span<const Probe> probes, double min_cell) {
  CoverageOptions opt;
  opt.min_cell = min_cell;
  return certify_coverage(probes, opt);
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

double polygon_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * std::abs(a);
}

std::vector<ConvexPolygon> uncovered_hulls(const CoverageReport& report) {
  std::vector<ConvexPolygon> out;
  for (const auto& group : report.uncovered_regions) {
    std::vector<Point2> pts;
    pts.reserve(4 * group.size());
    for (const auto& c : group) {
      const double h = 0.5 * c.size;
      pts.push_back({c.center.x - h, c.center.y - h});
      pts.push_back({c.center.x + h, c.center.y - h});
      pts.push_back({c.center.x + h, c.center.y + h});
      pts.push_back({c.center.x - h, c.center.y + h});
    }
    ConvexPolygon poly;
    poly.vertices = convex_hull(std::move(pts));
    poly.area = polygon_area(poly.vertices);
    out.push_back(std::move(poly));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.area > b.area; });
  return out;
}

}  // namespace marcopolo
