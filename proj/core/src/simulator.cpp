#include "marcopolo/simulator.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "marcopolo/verifier.hpp"

namespace marcopolo {

World World::single(double n, Point2 poi) { return many(n, {poi}); }

World World::many(double n, std::vector<Point2> pois) {
  World w;
  w.n = n;
  w.active.assign(pois.size(), true);
  w.pois = std::move(pois);
  return w;
}

bool probe(const World& world, Point2 center, double d) {
  for (std::size_t i = 0; i < world.pois.size(); ++i) {
    if (world.active[i] && distance(world.pois[i], center) <= d) return true;
  }
  return false;
}

namespace {

double containment_slack(double radius) { return 1e-9 * std::max(1.0, radius); }

class Runner {
 public:
  Runner(const World& world, const RunOptions& opt, SearchTrace& trace) : world_(world), opt_(opt), trace_(trace) {
    trace_.responses_per_poi.assign(world.pois.size(), 0);
  }

  void move_to(Point2 p) {
    trace_.distance += distance(delta_, p);
    delta_ = p;
    if (opt_.record_path) trace_.path.push_back(p);
  }

  bool issue(Point2 center, double d, bool adversarial_answer) {
    ++trace_.probes_issued;
    bool hit = false;
    if (opt_.adversary != Adversary::kNone) {
      hit = adversarial_answer;
    } else {
      for (std::size_t i = 0; i < world_.pois.size(); ++i) {
        if (world_.active[i] && distance(world_.pois[i], center) <= d) {
          hit = true;
          ++trace_.responses_per_poi[i];
          ++trace_.poi_responses;
        }
      }
    }
    if (hit) ++trace_.responses;
    return hit;
  }

  void check_contains(Point2 c, double r) const {
    if (opt_.adversary != Adversary::kNone) return;
    for (std::size_t i = 0; i < world_.pois.size(); ++i) {
      if (world_.active[i] && distance(world_.pois[i], c) <= r + containment_slack(r)) return;
    }
    throw InvariantViolation("containment: no active POI inside disk of radius " + std::to_string(r));
  }

  Point2 delta_ = {0.0, 0.0};

 private:
  const World& world_;
  const RunOptions& opt_;
  SearchTrace& trace_;
};

int adversary_index(const LayerPlacement& placement, Adversary mode) {
  const int m = static_cast<int>(placement.probes.size());
  int idx = m;
  if (mode == Adversary::kWorstProbe) {
    probe_coefficient(placement.probes, &idx);
  } else if (mode == Adversary::kWorstDistance) {
    distance_bound(placement.probes, &idx);
  }
  return idx;  // 1-based; m means "all executed probes negative"
}

}  // namespace

SearchTrace run_single(const LayerPlacement& placement, const World& world, const SearchState& start,
                       const RunOptions& options) {
  const auto& probes = placement.probes;
  if (probes.size() < 2) throw std::invalid_argument("run_single: placement needs at least two probes");
  SearchTrace trace;
  Runner run(world, options, trace);
  run.delta_ = start.delta_pos;
  if (options.record_path) trace.path.push_back(start.delta_pos);
  Point2 c = start.area_center;
  double r = start.area_radius;
  run.check_contains(c, r);
  const int m = static_cast<int>(probes.size());
  const int forced = adversary_index(placement, options.adversary);

  while (r > 1.0) {
    ++trace.layers;
    const Point2 first = probes.front().center;
    const Point2 rel = run.delta_ - c;
    double rot = 0.0;
    if (norm(first) > 1e-12 && norm(rel) > 1e-12 * r) rot = std::atan2(rel.y, rel.x) - std::atan2(first.y, first.x);
    int hit = m;
    for (int k = 1; k < m; ++k) {
      const Probe& p = probes[k - 1];
      const Point2 target = c + r * rotate(p.center, rot);
      run.move_to(target);
      if (run.issue(target, p.rho * r, k == forced)) {
        hit = k;
        break;
      }
    }
    const Probe& chosen = probes[hit - 1];
    c = c + r * rotate(chosen.center, rot);
    r *= chosen.rho;
    run.check_contains(c, r);
  }
  run.move_to(c);
  trace.final_state = {c, r, run.delta_};
  if (options.adversary != Adversary::kNone) {
    trace.success = true;
    return trace;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < world.pois.size(); ++i) {
    if (!world.active[i]) continue;
    const double d = distance(world.pois[i], run.delta_);
    if (d < best) {
      best = d;
      trace.found_poi = static_cast<int>(i);
    }
  }
  trace.success = best <= 1.0 + 1e-9;
  if (!trace.success) throw InvariantViolation("run_single ended farther than 1 from every active POI");
  return trace;
}

SearchTrace run_single(const LayerPlacement& placement, const World& world, const RunOptions& options) {
  return run_single(placement, world, SearchState{{0.0, 0.0}, world.n, {0.0, 0.0}}, options);
}

HexfamTrace run_hexfam(int r_max, const World& world) { return run_hexfam(hexfam_layer(r_max, world.n), world); }

HexfamTrace run_hexfam(const LayerPlacement& layer, const World& world) {
  if (layer.algorithm != AlgorithmId::kHexFamily) throw std::invalid_argument("run_hexfam: not a HEXFAM layer");
  HexfamTrace out;
  out.layers = hexfam_layers(layer.response_budget, world.n);
  out.trace = run_single(layer, world);
  return out;
}

FindAllTrace find_all(const LayerPlacement& placement, World world) {
  FindAllTrace out;
  RunOptions opt;
  opt.record_path = false;
  const double n = world.n;
  auto record = [&](const SearchTrace& t) {
    out.probes_total += t.probes_issued;
    out.distance_total += t.distance;
    if (!out.found_order.empty()) {
      const double e = distance(world.pois[out.found_order.back()], world.pois[t.found_poi]);
      out.gaps.push_back(e);
      out.gap_sum += e;
    }
    out.found_order.push_back(t.found_poi);
    world.active[t.found_poi] = false;
    out.searches.push_back(t);
  };
  SearchTrace t = run_single(placement, world, opt);
  record(t);
  Point2 delta = t.final_state.delta_pos;
  while (true) {
    long round = 0;
    double radius = 1.0;
    bool hit = false;
    while (!hit && radius < 2.0 * n) {
      radius *= 2.0;
      ++round;
      hit = probe(world, delta, radius);
    }
    if (hit) {
      out.probes_total += round;
      out.doubling_probes += round;
      t = run_single(placement, world, SearchState{delta, radius, delta}, opt);
      record(t);
      delta = t.final_state.delta_pos;
      continue;
    }
    out.termination_probes += round;
    // Completion check from the original origin.
    out.termination_distance += norm(delta);
    delta = {0.0, 0.0};
    ++out.termination_probes;
    if (!probe(world, delta, 2.0 * n)) break;
    t = run_single(placement, world, SearchState{{0.0, 0.0}, n, delta}, opt);
    record(t);
    delta = t.final_state.delta_pos;
  }
  return out;
}

namespace {

struct Sector {
  double lo = 0.0, hi = 0.0;     // radial bounds
  double a0 = 0.0, a1 = 2 * kPi;  // angular bounds (a1 > a0)
};

// Half-angle of the circle of radius t covered by a disk of radius rho centered at distance R.
double half_angle_at(double t, double R, double rho) {
  if (t <= 0.0) return kPi;
  const double c = (t * t + R * R - rho * rho) / (2.0 * t * R);
  if (c <= -1.0) return kPi;
  if (c >= 1.0) return -1.0;  // circle missed
  return std::acos(c);
}

// Smallest and largest covered half-angle over radii in [lo, hi].
std::pair<double, double> covered_range(double lo, double hi, double R, double rho) {
  double mn = std::min(half_angle_at(std::max(lo, 1e-300), R, rho), half_angle_at(hi, R, rho));
  double mx = std::max(half_angle_at(std::max(lo, 1e-300), R, rho), half_angle_at(hi, R, rho));
  const double t_star = std::sqrt(std::max(0.0, R * R - rho * rho));
  if (t_star > lo && t_star < hi) mx = std::max(mx, half_angle_at(t_star, R, rho));
  return {mn, mx};
}

double sector_radius_from(const Sector& s, Point2 p) {
  double best = 0.0;
  const int samples = 64;
  for (int i = 0; i <= samples; ++i) {
    const double a = s.a0 + (s.a1 - s.a0) * i / samples;
    best = std::max({best, distance(p, polar(s.hi, a)), distance(p, polar(s.lo, a))});
  }
  return best;
}

}  // namespace

ShellTrace shell_search(const World& world) {
  ShellTrace out;
  SearchTrace& tr = out.trace;
  tr.responses_per_poi.assign(world.pois.size(), 0);
  tr.path.push_back({0.0, 0.0});
  Point2 delta{0.0, 0.0};
  auto ask = [&](Point2 c, double d) {
    ++tr.probes_issued;
    const bool hit = probe(world, c, d);
    if (hit) {
      ++tr.responses;
      for (std::size_t i = 0; i < world.pois.size(); ++i) {
        if (world.active[i] && distance(world.pois[i], c) <= d) {
          ++tr.responses_per_poi[i];
          ++tr.poi_responses;
        }
      }
    }
    return hit;
  };
  auto move = [&](Point2 p) {
    tr.distance += distance(delta, p);
    delta = p;
    tr.path.push_back(p);
  };
  Sector s{0.0, world.n, 0.0, 2.0 * kPi};
  // Phase 1: radial bisection at the origin.
  while (s.hi - s.lo > 1.0) {
    const double mid = 0.5 * (s.lo + s.hi);
    ++out.radial_probes;
    if (ask({0.0, 0.0}, mid)) {
      s.hi = mid;
    } else {
      s.lo = mid;
    }
  }
  // Phase 2: angular bisection from the outer edge.
  auto mid_point = [](const Sector& q) { return polar(0.5 * (q.lo + q.hi), 0.5 * (q.a0 + q.a1)); };
  bool full_circle = true;
  while (s.hi > 1.0 && sector_radius_from(s, mid_point(s)) > 1.0) {
    const double span = s.a1 - s.a0;
    double center_angle, rho;
    if (full_circle) {
      // Any one probe covers at most a third of the ring.
      center_angle = s.a0;
      rho = s.hi;
    } else {
      const double want = span / 4.0;  // half-angle that must be covered at every radius
      center_angle = s.a0 + want;
      // Slightly more, so a POI exactly on the edge a0 is strictly inside the probe.
      const double need = want + 1e-6 * span;
      double lo = 0.0, hi = 2.0 * s.hi;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (lo + hi);
        if (covered_range(s.lo, s.hi, s.hi, m).first >= need) {
          hi = m;
        } else {
          lo = m;
        }
      }
      rho = hi;
    }
    const Point2 q = polar(s.hi, center_angle);
    move(q);
    ++out.angular_probes;
    const auto [mn, mx] = covered_range(s.lo, s.hi, s.hi, rho);
    if (ask(q, rho)) {
      if (full_circle) {
        s.a0 = center_angle - mx;
        s.a1 = center_angle + mx;
      } else {
        s.a1 = std::min(s.a1, center_angle + mx);
      }
    } else {
      if (full_circle) {
        s.a0 = center_angle + mn;
        s.a1 = center_angle + 2.0 * kPi - mn;
      } else {
        s.a0 = center_angle + mn;
      }
    }
    full_circle = false;
  }
  const Point2 target = (s.hi <= 1.0) ? Point2{0.0, 0.0} : mid_point(s);
  move(target);
  tr.final_state = {target, 1.0, delta};
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < world.pois.size(); ++i) {
    const double d = distance(world.pois[i], delta);
    if (world.active[i] && d < best) {
      best = d;
      tr.found_poi = static_cast<int>(i);
    }
  }
  tr.success = best <= 1.0 + 1e-9;
  return out;
}

}  // namespace marcopolo
