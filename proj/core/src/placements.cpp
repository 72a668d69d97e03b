#include "marcopolo/placements.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace marcopolo {

std::string to_string(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::kHexFamily:
      return "HEXFAM";
    case AlgorithmId::kShell:
      return "SHELL";
    default:
      return "ALG" + std::to_string(static_cast<int>(id));
  }
}

AlgorithmId parse_algorithm(std::string_view text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (t == "HEXFAM") return AlgorithmId::kHexFamily;
  if (t == "SHELL") return AlgorithmId::kShell;
  if (t.rfind("ALG", 0) == 0) t = t.substr(3);
  if (t.size() == 1 && t[0] >= '1' && t[0] <= '8') return static_cast<AlgorithmId>(t[0] - '0');
  throw std::invalid_argument("unknown algorithm id: " + std::string(text));
}

bool is_progressive(AlgorithmId id) {
  const int v = static_cast<int>(id);
  return v >= 3 && v <= 8;
}

int ceil_log2(double n) {
  if (n <= 1.0) return 0;
  return static_cast<int>(std::ceil(std::log2(n) - 1e-12));
}

std::vector<Probe> build_alg1(HexagonOrder order) {
  const auto hexes = hex_lattice(2, 1.0);
  std::vector<Probe> ring;
  for (std::size_t i = 0; i + 1 < hexes.size(); ++i) ring.push_back(circumscribe(hexes[i]));
  const Probe center = circumscribe(hexes.back());
  std::vector<Probe> out;
  if (order == HexagonOrder::kCenterFirst) out.push_back(center);
  out.insert(out.end(), ring.begin(), ring.end());
  if (order == HexagonOrder::kCenterLast) out.push_back(center);
  return out;
}

std::vector<Probe> build_alg2(HexagonOrder order) {
  const double big = 1.0 / std::sqrt(2.0);
  const auto hexes = hex_lattice(2, 1.0);
  // Ring order starts at 30 degrees, so the lower hexagons are entries 3, 4, 5.
  const Probe center = circumscribe(hexes.back());
  std::vector<Probe> out;
  if (order == HexagonOrder::kCenterFirst) out.push_back(center);
  out.push_back({{0.5, 0.5}, big});
  out.push_back({{-0.5, 0.5}, big});
  for (int i = 3; i < 6; ++i) out.push_back(circumscribe(hexes[i]));
  if (order == HexagonOrder::kCenterLast) out.push_back(center);
  return out;
}

namespace {

std::vector<double> schedule(double rho1, int first, int last) {
  std::vector<double> r;
  for (int k = first; k <= last; ++k) r.push_back(std::pow(rho1, k));
  return r;
}

bool valid_rho1(double rho1) { return rho1 > 0.0 && rho1 < 1.0; }

// Chord probes whose perimeter arcs abut in the given cyclic order, the first at angle 0.
std::vector<Probe> abutting_chords(const std::vector<double>& radii, const std::vector<int>& cyclic_order) {
  std::vector<double> angle(radii.size(), 0.0);
  double a = 0.0;
  for (std::size_t i = 0; i < cyclic_order.size(); ++i) {
    const int k = cyclic_order[i];
    if (i > 0) a += chord_half_angle(radii[cyclic_order[i - 1]]) + chord_half_angle(radii[k]);
    angle[k] = a;
  }
  std::vector<Probe> out;
  for (std::size_t k = 0; k < radii.size(); ++k) out.push_back(chord_probe(radii[k], angle[k]));
  return out;
}

// Half-angle of the circle of radius R covered by a disk of radius rho at distance d.
double covered_half_angle(double d, double rho, double R) {
  if (d < 1e-15) return rho >= R ? kPi : 0.0;
  const double c = (R * R + d * d - rho * rho) / (2.0 * R * d);
  if (c <= -1.0) return kPi;
  if (c >= 1.0) return 0.0;
  return std::acos(c);
}

bool step_ok(double da, double ra, double db, double rb, double step, double r1) {
  if (step > covered_half_angle(da, ra, 1.0) + covered_half_angle(db, rb, 1.0) + 1e-15) return false;
  const Point2 ca{da, 0.0};
  const Point2 cb = polar(db, step);
  const auto pts = circle_intersections(ca, ra, cb, rb);
  if (pts.empty()) return distance(ca, cb) < std::abs(ra - rb);
  double inner = norm(pts[0]);
  for (const auto& p : pts) inner = std::min(inner, norm(p));
  return inner <= r1;
}

double max_step(double da, double ra, double db, double rb, double r1) {
  if (!step_ok(da, ra, db, rb, 1e-9, r1)) return 0.0;
  double lo = 0.0, hi = kPi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (step_ok(da, ra, db, rb, mid, r1)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

std::optional<std::vector<Probe>> build_alg3(double rho1) {
  if (!valid_rho1(rho1)) return std::nullopt;
  return abutting_chords(schedule(rho1, 1, 5), {0, 1, 2, 3, 4});
}

std::optional<std::vector<Probe>> build_alg4(double rho1) {
  if (!valid_rho1(rho1)) return std::nullopt;
  return abutting_chords(schedule(rho1, 1, 5), {0, 3, 1, 2, 4});
}

std::optional<std::vector<Probe>> build_ring(double r1, const std::vector<double>& radii,
                                             const std::vector<double>& distances) {
  const std::size_t n = radii.size();
  if (n == 0 || distances.size() != n) return std::nullopt;
  std::vector<double> steps(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1) % n;
    steps[j] = max_step(distances[j], radii[j], distances[k], radii[k], r1);
    total += steps[j];
  }
  if (total < 2.0 * kPi) return std::nullopt;
  const double slack = (total - 2.0 * kPi) / static_cast<double>(n);
  std::vector<Probe> out;
  out.push_back({{0.0, 0.0}, r1});
  double a = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out.push_back({polar(distances[j], a), radii[j]});
    a += steps[j] - slack;
  }
  return out;
}

std::optional<std::vector<Probe>> build_alg5(double rho1) {
  if (!valid_rho1(rho1)) return std::nullopt;
  const auto radii = schedule(rho1, 2, 8);
  std::vector<double> dist;
  for (double r : radii) dist.push_back(chord_center_distance(r));
  return build_ring(rho1, radii, dist);
}

double equal_rate_distance(double r1, double rk) {
  if (rk < (1.0 - r1) / 2.0) return (1.0 + r1) / 2.0;
  double lo = std::sqrt(std::max(0.0, r1 * r1 - rk * rk));
  double hi = std::sqrt(std::max(0.0, 1.0 - rk * rk));
  if (hi <= lo) return hi;
  // Outer coverage grows and inner coverage shrinks with d on [lo, hi].
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (covered_half_angle(mid, rk, 1.0) < covered_half_angle(mid, rk, r1)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<std::vector<Probe>> build_alg6(double rho1, int probe_count) {
  if (!valid_rho1(rho1) || probe_count < 3) return std::nullopt;
  const auto radii = schedule(rho1, 2, probe_count);
  std::vector<double> dist;
  for (double r : radii) dist.push_back(equal_rate_distance(rho1, r));
  return build_ring(rho1, radii, dist);
}

LayerPlacement make_progressive(AlgorithmId id, double rho1, std::vector<Probe> probes) {
  LayerPlacement p;
  p.algorithm = id;
  p.rho1 = rho1;
  for (std::size_t k = 0; k < probes.size(); ++k) probes[k].rho = std::pow(rho1, static_cast<int>(k) + 1);
  p.probes = std::move(probes);
  return p;
}

CoverageReport certify(LayerPlacement& placement, double min_cell) {
  auto report = certify_coverage(placement.probes, min_cell);
  placement.certified = report.certified_covered;
  return report;
}

LayerPlacement generate_layer(AlgorithmId id, const GenerateOptions& options) {
  LayerPlacement p;
  p.algorithm = id;
  switch (id) {
    case AlgorithmId::kAlg1:
      p.probes = build_alg1(options.hex_order);
      break;
    case AlgorithmId::kAlg2:
      p.probes = build_alg2(options.hex_order);
      break;
    case AlgorithmId::kAlg3:
      p.probes = *build_alg3(kAlg3Rho1);
      p.rho1 = kAlg3Rho1;
      break;
    case AlgorithmId::kAlg4:
      p.probes = *build_alg4(kAlg4Rho1);
      p.rho1 = kAlg4Rho1;
      break;
    case AlgorithmId::kAlg5: {
      auto probes = build_alg5(kAlg5Rho1);
      if (!probes) throw std::runtime_error("ALG5 ring does not close at the frozen rho1");
      p.probes = *probes;
      p.rho1 = kAlg5Rho1;
      break;
    }
    case AlgorithmId::kAlg6: {
      auto probes = build_alg6(kAlg6Rho1, kAlg6ProbeCount);
      if (!probes) throw std::runtime_error("ALG6 ring does not close at the frozen rho1");
      p.probes = *probes;
      p.rho1 = kAlg6Rho1;
      break;
    }
    default:
      throw std::invalid_argument("generate_layer: " + to_string(id) + " is not a constructed algorithm");
  }
  const auto report = certify(p, options.min_cell);
  if (!report.certified_covered) {
    throw std::runtime_error("generate_layer: " + to_string(id) + " failed coverage certification");
  }
  return p;
}

int hexfam_layers(int r_max, double n) {
  return static_cast<int>(std::ceil((2.0 * std::pow(n, 1.0 / r_max) + 2.0) / 3.0 - 1e-12));
}

LayerPlacement hexfam_layer(int r_max, double n, bool certify_now) {
  if (r_max < 1 || r_max > ceil_log2(n)) {
    throw std::invalid_argument("hexfam_layer: R_max must lie in [1, ceil(log2 n)]");
  }
  const int layers = hexfam_layers(r_max, n);
  LayerPlacement p;
  p.algorithm = AlgorithmId::kHexFamily;
  p.response_budget = r_max;
  for (const auto& h : hex_lattice(layers, 1.0)) p.probes.push_back(circumscribe(h));
  if (certify_now) {
    CoverageOptions opt;
    opt.min_cell = 1e-3;
    p.certified = certify_coverage(p.probes, opt).certified_covered;
    if (!p.certified) throw std::runtime_error("hexfam_layer: lattice failed coverage certification");
  }
  return p;
}

}  // namespace marcopolo
