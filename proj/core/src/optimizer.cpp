#include "marcopolo/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

#include "marcopolo/verifier.hpp"

namespace marcopolo {

void OptimizerConfig::validate() const {
  if (population < 8) throw std::invalid_argument("optimizer: population must be >= 8");
  if (generations < 0) throw std::invalid_argument("optimizer: generations must be >= 0");
  if (!(mutation_factor > 0.0 && mutation_factor < 2.0)) throw std::invalid_argument("optimizer: F must lie in (0, 2)");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw std::invalid_argument("optimizer: CR must lie in [0, 1]");
  if (!(rho1_bounds.first > 0.0 && rho1_bounds.first < rho1_bounds.second && rho1_bounds.second < 1.0)) {
    throw std::invalid_argument("optimizer: rho1 bounds must satisfy 0 < lo < hi < 1");
  }
  if (greedy_max_probes < 7) throw std::invalid_argument("optimizer: greedy_max_probes must exceed the six initial probes");
}

namespace {

void require_schedule(const LayerPlacement& p) {
  if (!p.rho1) throw std::invalid_argument("greedy_fill: placement has no rho1");
  for (std::size_t k = 0; k < p.probes.size(); ++k) {
    const double want = std::pow(*p.rho1, static_cast<double>(k + 1));
    if (std::abs(p.probes[k].rho - want) > 1e-12 * want) {
      throw std::invalid_argument("greedy_fill: radii do not follow rho1^k");
    }
  }
}

// Points on the hull boundary: the vertices, plus extra points on edges longer
// than the spacing, thinned evenly to at most `cap`.
std::vector<Point2> hull_points(const std::vector<Point2>& hull, double spacing, std::size_t cap) {
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2 a = hull[i];
    const Point2 b = hull[(i + 1) % hull.size()];
    pts.push_back(a);
    const int extra = static_cast<int>(std::floor(distance(a, b) / spacing));
    for (int j = 1; j <= extra; ++j) pts.push_back(a + (static_cast<double>(j) / (extra + 1)) * (b - a));
  }
  if (pts.size() <= cap) return pts;
  std::vector<Point2> thin;
  for (std::size_t i = 0; i < cap; ++i) thin.push_back(pts[i * pts.size() / cap]);
  return thin;
}

// Uncovered area of one cell, inside the unit disk, removed by a disk of
// radius rho at c. Cells not wholly inside both are sampled on a grid fine
// enough for the probe size.
double removed_area(const UncoveredCell& cell, Point2 c, double rho) {
  const double h = 0.5 * cell.size;
  const double dx = std::abs(cell.center.x - c.x), dy = std::abs(cell.center.y - c.y);
  const double area = cell.size * cell.size;
  if (std::hypot(std::max(0.0, dx - h), std::max(0.0, dy - h)) > rho) return 0.0;
  const bool in_disk = std::hypot(std::abs(cell.center.x) + h, std::abs(cell.center.y) + h) <= 1.0;
  if (in_disk && std::hypot(dx + h, dy + h) <= rho) return area;
  const int n = std::clamp(static_cast<int>(std::ceil(8.0 * cell.size / rho)), 4, 16);
  const double step = cell.size / n;
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point2 q{cell.center.x - h + (i + 0.5) * step, cell.center.y - h + (j + 0.5) * step};
      if (distance(q, c) <= rho && norm2(q) <= 1.0) ++inside;
    }
  }
  return area * inside / (n * n);
}

// Radius of a disk inside the unit disk and outside every probe, centered at
// the uncovered cell center farthest from the probes; a lower bound on the
// largest gap's inradius.
double gap_inradius(const CoverageReport& report, const std::vector<Probe>& probes) {
  double best = 0.0;
  for (const auto& group : report.uncovered_regions) {
    for (const auto& cell : group) {
      double r = 1.0 - norm(cell.center);
      for (const auto& p : probes) r = std::min(r, distance(cell.center, p.center) - p.rho);
      best = std::max(best, r);
    }
  }
  return best;
}

}  // namespace

GreedyResult greedy_fill(const LayerPlacement& initial, const GreedyOptions& options) {
  require_schedule(initial);
  GreedyResult out;
  out.placement = initial;
  auto& probes = out.placement.probes;
  const double rho1 = *initial.rho1;
  while (true) {
    const double next = std::pow(rho1, static_cast<double>(probes.size() + 1));
    CoverageOptions copt;
    copt.min_cell = std::min(options.min_cell, next / 4.0);
    const auto report = certify_coverage(probes, copt);
    out.uncovered_area = report.uncovered_area_upper_bound;
    out.uncovered_history.push_back(report.uncovered_area_upper_bound);
    if (report.certified_covered) {
      out.covered = true;
      out.placement.certified = true;
      return out;
    }
    if (static_cast<int>(probes.size()) >= options.max_probes) return out;
    if (report.uncovered_regions.empty()) return out;
    // Largest region by uncovered cell area.
    std::vector<Point2> corners;
    for (const auto& cell : report.uncovered_regions.front()) {
      const double h = 0.5 * cell.size;
      for (const double sx : {-h, h}) {
        for (const double sy : {-h, h}) {
          // Corners outside the search disk are pulled back onto its boundary.
          const Point2 q{cell.center.x + sx, cell.center.y + sy};
          corners.push_back(norm(q) > 1.0 ? (1.0 / norm(q)) * q : q);
        }
      }
    }
    const auto target = convex_hull(std::move(corners));
    // All later probes together hold less area than a disk of this radius.
    if (next / std::sqrt(1.0 - rho1 * rho1) < gap_inradius(report, probes)) {
      out.infeasible = true;
      return out;
    }
    const auto pts = hull_points(target, next, 16);
    // Every candidate lies within `next` of a hull point, so only nearby cells can score.
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const auto& q : pts) {
      x0 = std::min(x0, q.x), y0 = std::min(y0, q.y), x1 = std::max(x1, q.x), y1 = std::max(y1, q.y);
    }
    const double reach = 2.0 * next;
    std::vector<UncoveredCell> nearby;
    for (const auto& group : report.uncovered_regions) {
      for (const auto& cell : group) {
        const double h = 0.5 * cell.size;
        if (cell.center.x + h < x0 - reach || cell.center.x - h > x1 + reach) continue;
        if (cell.center.y + h < y0 - reach || cell.center.y - h > y1 + reach) continue;
        nearby.push_back(cell);
      }
    }
    double best_score = 0.0;
    Point2 best{};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double d = distance(pts[i], pts[j]);
        if (d < 1e-12 || d > 2.0 * next) continue;
        const Point2 mid = 0.5 * (pts[i] + pts[j]);
        const Point2 u = (1.0 / d) * (pts[j] - pts[i]);
        const Point2 perp{-u.y, u.x};
        const double h = std::sqrt(std::max(0.0, next * next - 0.25 * d * d));
        for (const double sgn : {1.0, -1.0}) {
          const Point2 c = mid + (sgn * h) * perp;
          double score = 0.0;
          for (const auto& cell : nearby) score += removed_area(cell, c, next);
          if (score > best_score) {
            best_score = score;
            best = c;
          }
        }
      }
    }
    if (best_score <= 0.0) {
      out.infeasible = true;
      return out;
    }
    probes.push_back({best, next});
  }
}

GreedyResult alg7_layer(double rho1, const GreedyOptions& options) {
  auto probes = build_alg4(rho1);
  if (!probes) throw std::invalid_argument("alg7_layer: ALG4 cannot be laid out at this rho1");
  probes->pop_back();
  LayerPlacement p;
  p.algorithm = AlgorithmId::kAlg7;
  p.rho1 = rho1;
  p.probes = *probes;
  return greedy_fill(p, options);
}

LayerPlacement reproduce_alg7(const Alg7Search& search) {
  std::optional<LayerPlacement> best;
  for (int i = 0;; ++i) {
    const double rho1 = search.hi - i * search.step;
    if (rho1 < search.lo - 1e-12) break;
    if (!build_alg4(rho1)) continue;
    auto r = alg7_layer(rho1, search.greedy);
    if (!r.covered) continue;
    if (certify(r.placement, search.final_min_cell).certified_covered) best = r.placement;
  }
  if (!best) throw std::runtime_error("reproduce_alg7: no rho1 on the grid certifies");
  return *best;
}

std::vector<Probe> decode_initial(const std::vector<double>& x) {
  if (x.size() != kEvolveDimensions) throw std::invalid_argument("decode_initial: expected 13 values");
  std::vector<Probe> probes;
  for (int k = 1; k <= 6; ++k) {
    probes.push_back({polar(x[2 * k], x[2 * k - 1]), std::pow(x[0], static_cast<double>(k))});
  }
  return probes;
}

double evolve_fitness(const std::vector<double>& x, const GreedyOptions& greedy, GreedyResult* out) {
  LayerPlacement p;
  p.algorithm = AlgorithmId::kAlg8;
  p.rho1 = x[0];
  p.probes = decode_initial(x);
  auto r = greedy_fill(p, greedy);
  const double c = probe_coefficient(r.placement.probes);
  const double f = r.covered ? c : 100.0 + c + r.uncovered_area;
  if (out) *out = std::move(r);
  return f;
}

namespace {

unsigned optimizer_workers(const OptimizerConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  if (const char* env = std::getenv("MARCOPOLO_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

// Fitness of every vector; each slot is written by exactly one worker. A
// vector whose coefficient alone already exceeds its cutoff cannot win
// selection, so it is scored +inf without running the greedy fill.
std::vector<double> evaluate_all(const std::vector<std::vector<double>>& xs, const std::vector<double>& cutoff,
                                 const GreedyOptions& greedy, unsigned workers, long& evaluations) {
  std::vector<double> f(xs.size());
  std::vector<char> ran(xs.size(), 0);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < xs.size(); i = next++) {
      if (-1.0 / std::log2(xs[i][0]) > cutoff[i]) {
        f[i] = std::numeric_limits<double>::infinity();
        continue;
      }
      f[i] = evolve_fitness(xs[i], greedy);
      ran[i] = 1;
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  evaluations += std::count(ran.begin(), ran.end(), 1);
  return f;
}

std::vector<double> encode(const LayerPlacement& p) {
  std::vector<double> x(kEvolveDimensions);
  x[0] = *p.rho1;
  for (int k = 1; k <= 6; ++k) {
    const Point2 c = p.probes[k - 1].center;
    double a = std::atan2(c.y, c.x);
    if (a < 0.0) a += 2.0 * kPi;
    x[2 * k - 1] = a;
    x[2 * k] = norm(c);
  }
  return x;
}

}  // namespace

EvolveResult evolve_initial(const OptimizerConfig& config) {
  config.validate();
  const unsigned workers = optimizer_workers(config);
  GreedyOptions greedy;
  greedy.max_probes = config.greedy_max_probes;
  greedy.min_cell = config.search_min_cell;
  const auto [rlo, rhi] = config.rho1_bounds;

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto clamp_into = [&](std::vector<double>& x) {
    x[0] = std::clamp(x[0], rlo, rhi);
    for (int k = 1; k <= 6; ++k) {
      x[2 * k - 1] = std::fmod(x[2 * k - 1], 2.0 * kPi);
      if (x[2 * k - 1] < 0.0) x[2 * k - 1] += 2.0 * kPi;
      x[2 * k] = std::clamp(x[2 * k], 0.0, 1.0);
    }
  };

  const int np = config.population;
  std::vector<std::vector<double>> pop(np, std::vector<double>(kEvolveDimensions));
  for (auto& x : pop) {
    x[0] = rlo + (rhi - rlo) * u01(rng);
    for (int k = 1; k <= 6; ++k) {
      x[2 * k - 1] = 2.0 * kPi * u01(rng);
      x[2 * k] = u01(rng);
    }
  }
  if (config.seed_with_alg7) {
    Alg7Search s;
    s.greedy = greedy;
    try {
      auto alg7 = reproduce_alg7(s);
      if (alg7.probes.size() >= 6) {
        pop[0] = encode(alg7);
        clamp_into(pop[0]);
      }
    } catch (const std::runtime_error&) {
      // No baseline on the grid; start from the random population alone.
    }
  }

  EvolveResult result;
  const double none = std::numeric_limits<double>::infinity();
  auto fit = evaluate_all(pop, std::vector<double>(np, none), greedy, workers, result.evaluations);
  auto best_of = [&] { return static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin()); };
  result.best_fitness.push_back(fit[best_of()]);
  if (config.progress) config.progress(0, result.best_fitness.back());

  std::uniform_int_distribution<int> pick(0, np - 1);
  std::uniform_int_distribution<int> pick_dim(0, kEvolveDimensions - 1);
  for (int g = 0; g < config.generations; ++g) {
    std::vector<std::vector<double>> trials(np);
    for (int i = 0; i < np; ++i) {
      int a, b, c;
      do a = pick(rng); while (a == i);
      do b = pick(rng); while (b == i || b == a);
      do c = pick(rng); while (c == i || c == a || c == b);
      const int jr = pick_dim(rng);
      auto t = pop[i];
      for (int j = 0; j < kEvolveDimensions; ++j) {
        if (j == jr || u01(rng) < config.crossover_rate) {
          t[j] = pop[a][j] + config.mutation_factor * (pop[b][j] - pop[c][j]);
        }
      }
      clamp_into(t);
      trials[i] = std::move(t);
    }
    const auto tf = evaluate_all(trials, fit, greedy, workers, result.evaluations);
    for (int i = 0; i < np; ++i) {
      if (tf[i] <= fit[i]) {
        pop[i] = std::move(trials[i]);
        fit[i] = tf[i];
      }
    }
    result.best_fitness.push_back(fit[best_of()]);
    if (config.progress) config.progress(g + 1, result.best_fitness.back());
  }

  // Best individual that survives fine certification, in fitness order.
  std::vector<std::size_t> order(np);
  for (int i = 0; i < np; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return fit[x] < fit[y]; });
  LayerPlacement best_effort;
  for (std::size_t i : order) {
    GreedyResult r;
    const double f = evolve_fitness(pop[i], greedy, &r);
    if (best_effort.probes.empty()) best_effort = r.placement;
    if (!r.covered) break;
    if (certify(r.placement, config.final_min_cell).certified_covered) {
      result.placement = std::move(r.placement);
      result.fitness = f;
      return result;
    }
  }
  throw OptimizerError("evolve_initial: no certified individual", best_effort);
}

}  // namespace marcopolo
