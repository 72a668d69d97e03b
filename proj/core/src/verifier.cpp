#include "marcopolo/verifier.hpp"

#include <stdexcept>

namespace marcopolo {

double probe_coefficient(std::span<const Probe> probes, int* worst_index) {
  if (probes.empty()) throw std::invalid_argument("probe_coefficient: empty placement");
  const std::size_t m = probes.size();
  double c = 0.0;
  int worst = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    const double rho = probes[k - 1].rho;
    if (rho >= 1.0) throw std::domain_error("probe_coefficient: rho = 1 gives an unbounded coefficient");
    const double charged = (k < m) ? static_cast<double>(k) : static_cast<double>(m - 1);
    const double ck = charged / -std::log2(rho);
    if (ck > c) {
      c = ck;
      worst = static_cast<int>(k);
    }
  }
  if (worst_index) *worst_index = worst;
  return c;
}

double distance_bound(std::span<const Probe> probes, int* worst_index) {
  if (probes.empty()) throw std::invalid_argument("distance_bound: empty placement");
  double d = 0.0;
  Point2 cur{0.0, 0.0};
  double b = 0.0;
  int worst = 0;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const Probe& p = probes[k];
    if (p.rho >= 1.0) throw std::domain_error("distance_bound: rho = 1 gives an unbounded distance");
    d += distance(p.center, cur);
    if (k + 1 == probes.size()) {
      const double d1 = norm(probes.front().center);
      d -= 2.0 * d1 * p.rho;
    }
    const double bk = d / (1.0 - p.rho);
    if (bk > b) {
      b = bk;
      worst = static_cast<int>(k) + 1;
    }
    cur = p.center;
  }
  if (worst_index) *worst_index = worst;
  return b;
}

bool distance_shortcut_valid(std::span<const Probe> probes) {
  if (probes.size() < 2) return true;
  const Probe& last = probes.back();
  const Probe& prev = probes[probes.size() - 2];
  return distance(prev.center, last.center) >= norm(probes.front().center) * last.rho;
}

double response_bound(std::span<const Probe> probes, int* worst_index) {
  if (probes.empty()) throw std::invalid_argument("response_bound: empty placement");
  std::size_t best = 0;
  for (std::size_t k = 1; k < probes.size(); ++k) {
    if (probes[k].rho > probes[best].rho) best = k;
  }
  const double rho = probes[best].rho;
  if (rho >= 1.0) throw std::domain_error("response_bound: rho_max = 1 gives an unbounded response count");
  if (worst_index) *worst_index = static_cast<int>(best) + 1;
  return -1.0 / std::log2(rho);
}

BoundsReport analyze(std::span<const Probe> probes) {
  BoundsReport r;
  r.c_probes = probe_coefficient(probes, &r.worst_probe_index);
  r.b_distance = distance_bound(probes, &r.worst_distance_index);
  r.c_responses = response_bound(probes, &r.worst_response_index);
  r.shortcut_valid = distance_shortcut_valid(probes);
  return r;
}

RunLimits run_limits(const BoundsReport& b, std::size_t probe_count, double n) {
  const double logn = ceil_log2(n);
  RunLimits r;
  r.probes = std::ceil(b.c_probes * logn - 1e-9) + static_cast<double>(probe_count) - 2.0;
  r.distance = b.b_distance * n + 1e-6;
  r.responses = std::ceil(b.c_responses * logn - 1e-9);
  return r;
}

double perimeter_series(double c, double term_threshold) {
  double sum = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const double t = std::asin(std::exp2(-k / c));
    sum += t;
    if (t < term_threshold) break;
  }
  return sum;
}

bool perimeter_closes(double rho1, double term_threshold) {
  double sum = 0.0;
  double r = rho1;
  for (int k = 1; k < 100000 && r >= term_threshold; ++k, r *= rho1) sum += 2.0 * std::asin(r);
  return sum >= 2.0 * kPi;
}

LowerBound lower_bound_constant(double term_threshold) {
  double lo = 2.0, hi = 3.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (perimeter_series(mid, term_threshold) < kPi) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double c = 0.5 * (lo + hi);
  return {c, std::exp2(-1.0 / c)};
}

namespace {

bool scheme_covers(Scheme scheme, double rho1, const Rho1SearchOptions& opt) {
  std::optional<std::vector<Probe>> probes;
  switch (scheme) {
    case Scheme::kPerimeterOnly:
      return perimeter_closes(rho1);
    case Scheme::kAlg3:
      probes = build_alg3(rho1);
      break;
    case Scheme::kAlg4:
      probes = build_alg4(rho1);
      break;
    case Scheme::kAlg5:
      probes = build_alg5(rho1);
      break;
    case Scheme::kAlg6:
      probes = build_alg6(rho1, opt.alg6_probe_count);
      break;
  }
  if (!probes) return false;
  CoverageOptions copt;
  copt.min_cell = opt.min_cell;
  copt.stop_at_first_gap = true;
  return certify_coverage(*probes, copt).certified_covered;
}

}  // namespace

double minimal_rho1(Scheme scheme, const Rho1SearchOptions& opt) {
  double lo = opt.lo, hi = opt.hi;
  // Ring schemes degenerate as rho1 -> 1, so walk the upper bracket down to a certifying value.
  while (!scheme_covers(scheme, hi, opt)) {
    hi -= 0.01;
    if (hi <= lo) throw std::runtime_error("minimal_rho1: scheme never certifies");
  }
  while (hi - lo > opt.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (scheme_covers(scheme, mid, opt)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace marcopolo
