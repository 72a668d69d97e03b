#include <random>

#include "doctest.h"
#include "marcopolo/coverage.hpp"
#include "marcopolo/optimizer.hpp"
#include "marcopolo/verifier.hpp"

using namespace marcopolo;

namespace {

// Independent check of the schedule rho_k = rho1^k.
bool follows_schedule(const LayerPlacement& p) {
  for (std::size_t k = 0; k < p.probes.size(); ++k) {
    const double want = std::pow(*p.rho1, static_cast<double>(k + 1));
    if (std::abs(p.probes[k].rho - want) > 1e-12 * want) return false;
  }
  return true;
}

// Monte Carlo coverage oracle: no sampled point of the unit disk escapes every probe.
bool sampled_covered(const std::vector<Probe>& probes, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < samples;) {
    const Point2 q{u(rng), u(rng)};
    if (norm2(q) > 1.0) continue;
    ++i;
    bool hit = false;
    for (const auto& p : probes) hit = hit || distance(q, p.center) <= p.rho;
    if (!hit) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("greedy leaves a covered layout unchanged") {
  LayerPlacement p;
  p.algorithm = AlgorithmId::kAlg7;
  p.rho1 = 0.9;
  p.probes = {{{0.0, 0.0}, 0.9}, {{0.0, 0.0}, 0.81}};
  // Not covered yet: the greedy must add probes.
  const auto grown = greedy_fill(p);
  CHECK(grown.placement.probes.size() > 2);

  auto done = grown;
  if (done.covered) {
    const auto again = greedy_fill(done.placement);
    CHECK(again.covered);
    CHECK(again.placement.probes.size() == done.placement.probes.size());
    CHECK(again.uncovered_history.size() == 1);
  }
}

TEST_CASE("greedy rejects layouts off the schedule") {
  LayerPlacement p;
  p.algorithm = AlgorithmId::kAlg7;
  p.rho1 = 0.8;
  p.probes = {{{0.0, 0.0}, 0.8}, {{0.1, 0.0}, 0.5}};
  CHECK_THROWS_AS(greedy_fill(p), std::invalid_argument);
  p.rho1.reset();
  CHECK_THROWS_AS(greedy_fill(p), std::invalid_argument);
}

TEST_CASE("greedy layers follow the schedule and shrink the uncovered area") {
  for (double rho1 : {0.80, 0.81, 0.82}) {
    CAPTURE(rho1);
    const auto r = alg7_layer(rho1);
    CHECK(follows_schedule(r.placement));
    for (std::size_t i = 1; i < r.uncovered_history.size(); ++i) {
      CHECK(r.uncovered_history[i] <= r.uncovered_history[i - 1] + 1e-12);
    }
    if (r.covered) {
      CHECK(certify_coverage(r.placement.probes, 1e-4).certified_covered);
      CHECK(sampled_covered(r.placement.probes, 200000, 7));
    } else {
      CHECK(r.uncovered_area > 0.0);
    }
  }
}

TEST_CASE("ALG7 reproduction beats the target coefficient") {
  const auto p = reproduce_alg7();
  CHECK(p.algorithm == AlgorithmId::kAlg7);
  CHECK(p.certified);
  CHECK(follows_schedule(p));
  CHECK(probe_coefficient(p.probes) <= 3.10);
  CHECK(certify_coverage(p.probes, 1e-6).certified_covered);
  CHECK(sampled_covered(p.probes, 1000000, 11));
}

TEST_CASE("decode_initial places probes on the schedule") {
  std::vector<double> x(kEvolveDimensions, 0.5);
  x[0] = 0.8;
  const auto probes = decode_initial(x);
  REQUIRE(probes.size() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(probes[k].rho == doctest::Approx(std::pow(0.8, k + 1)));
    CHECK(norm(probes[k].center) == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(decode_initial(std::vector<double>(5, 0.1)), std::invalid_argument);
}

TEST_CASE("fitness grades uncovered layouts above covered ones") {
  std::vector<double> x(kEvolveDimensions, 0.0);
  x[0] = 0.80;
  GreedyOptions tiny;
  tiny.max_probes = 7;
  GreedyResult out;
  const double f = evolve_fitness(x, tiny, &out);
  if (!out.covered) {
    CHECK(f == doctest::Approx(100.0 + probe_coefficient(out.placement.probes) + out.uncovered_area));
  } else {
    CHECK(f == doctest::Approx(probe_coefficient(out.placement.probes)));
  }
}

TEST_CASE("differential evolution is reproducible") {
  OptimizerConfig cfg;
  cfg.population = 8;
  cfg.generations = 2;
  cfg.seed_with_alg7 = false;
  cfg.seed = 4;
  auto history = [&] {
    std::vector<double> seen;
    cfg.progress = [&](int, double best) { seen.push_back(best); };
    try {
      evolve_initial(cfg);
    } catch (const OptimizerError&) {
      // A tiny budget may not certify; the trajectory is still deterministic.
    }
    return seen;
  };
  const auto a = history();
  const auto b = history();
  REQUIRE(a.size() == 3);
  CHECK(a == b);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i] <= a[i - 1]);
}

TEST_CASE("zero generations returns the seeded baseline") {
  OptimizerConfig cfg;
  cfg.population = 8;
  cfg.generations = 0;
  const auto r = evolve_initial(cfg);
  CHECK(r.best_fitness.size() == 1);
  CHECK(r.placement.certified);
  CHECK(r.placement.algorithm == AlgorithmId::kAlg8);
  CHECK(follows_schedule(r.placement));
  CHECK(r.fitness == doctest::Approx(probe_coefficient(r.placement.probes)));
  CHECK(certify_coverage(r.placement.probes, 1e-6).certified_covered);
}

TEST_CASE("optimizer config validation") {
  OptimizerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.population = 4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.mutation_factor = 2.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.crossover_rate = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.generations = -1;
  CHECK_THROWS_AS(evolve_initial(cfg), std::invalid_argument);
}
