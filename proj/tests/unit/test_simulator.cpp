#include <random>

#include "doctest.h"
#include "marcopolo/experiments.hpp"
#include "marcopolo/simulator.hpp"
#include "marcopolo/verifier.hpp"

using namespace marcopolo;

namespace {

LayerPlacement alg1_center_last() {
  GenerateOptions g;
  g.hex_order = HexagonOrder::kCenterLast;
  return generate_layer(AlgorithmId::kAlg1, g);
}

}  // namespace

TEST_CASE("probe is a closed disk over active POIs") {
  World w = World::single(10.0, {3.0, 4.0});
  CHECK(probe(w, {0.0, 0.0}, 5.0));
  CHECK_FALSE(probe(w, {0.0, 0.0}, 4.999));
  w.active[0] = false;
  CHECK_FALSE(probe(w, {0.0, 0.0}, 100.0));
}

TEST_CASE("trivial radius needs no probes") {
  const auto t = run_single(alg1_center_last(), World::single(1.0, {0.3, 0.2}));
  CHECK(t.probes_issued == 0);
  CHECK(t.distance == 0.0);
  CHECK(t.success);
}

TEST_CASE("ALG1 n=2 POI at origin") {
  const auto t = run_single(alg1_center_last(), World::single(2.0, {0.0, 0.0}));
  CHECK(t.probes_issued == 6);
  CHECK(t.responses == 0);
  CHECK(t.layers == 1);
  CHECK(t.success);
  CHECK(norm(t.final_state.area_center) == doctest::Approx(0.0));
  CHECK(t.final_state.area_radius == doctest::Approx(1.0));
}

TEST_CASE("path legs add up to the distance") {
  const auto p = generate_layer(AlgorithmId::kAlg4);
  const auto t = run_single(p, World::single(1000.0, {-300.0, 420.0}));
  double legs = 0.0;
  for (std::size_t i = 1; i < t.path.size(); ++i) legs += distance(t.path[i - 1], t.path[i]);
  CHECK(legs == doctest::Approx(t.distance));
  CHECK(t.path.front() == Point2{0.0, 0.0});
  CHECK(distance(t.path.back(), {-300.0, 420.0}) <= 1.0);
  CHECK(t.responses <= t.probes_issued);
}

TEST_CASE("bound conformance and containment on random POIs") {
  const double n = 1 << 16;
  for (auto id : {AlgorithmId::kAlg1, AlgorithmId::kAlg2, AlgorithmId::kAlg3, AlgorithmId::kAlg4, AlgorithmId::kAlg5,
                  AlgorithmId::kAlg6}) {
    const auto p = generate_layer(id);
    const auto lim = run_limits(analyze(p.probes), p.probes.size(), n);
    std::mt19937_64 rng(static_cast<int>(id));
    RunOptions opt;
    opt.record_path = false;
    for (int i = 0; i < 3000; ++i) {
      const Point2 poi = sample_poi(rng, n);
      // run_single throws InvariantViolation if containment ever fails.
      const auto t = run_single(p, World::single(n, poi), opt);
      CHECK(t.success);
      CHECK(t.probes_issued <= lim.probes);
      CHECK(t.distance <= lim.distance);
      CHECK(t.responses <= lim.responses);
    }
  }
}

TEST_CASE("boundary POIs are found") {
  const auto p = generate_layer(AlgorithmId::kAlg3);
  const double n = 4096.0;
  for (int i = 0; i < 64; ++i) {
    const Point2 poi = polar(n, 2.0 * kPi * i / 64);
    CHECK(run_single(p, World::single(n, poi)).success);
  }
}

TEST_CASE("adversarial modes reach the worst index every layer") {
  const auto p = generate_layer(AlgorithmId::kAlg3);
  const double n = 1 << 20;
  const int L = ceil_log2(n);
  RunOptions opt;
  opt.adversary = Adversary::kLastRegion;
  const auto last = run_single(p, World::single(n, {0.0, 0.0}), opt);
  CHECK(last.responses == 0);
  CHECK(last.probes_issued == static_cast<long>(last.layers) * 4);
  opt.adversary = Adversary::kWorstProbe;
  const auto worst = run_single(p, World::single(n, {0.0, 0.0}), opt);
  CHECK(worst.probes_issued <= run_limits(analyze(p.probes), p.probes.size(), n).probes);
  CHECK(worst.probes_issued >= L);
}

TEST_CASE("runs are deterministic") {
  const auto p = generate_layer(AlgorithmId::kAlg6);
  const World w = World::single(5000.0, {1234.5, -2222.0});
  const auto a = run_single(p, w);
  const auto b = run_single(p, w);
  CHECK(a.probes_issued == b.probes_issued);
  CHECK(a.distance == b.distance);
  CHECK(a.path.size() == b.path.size());
}

TEST_CASE("hexagonal family respects its budgets") {
  std::mt19937_64 rng(8);
  for (int r = 1; r <= 3; ++r) {
    for (double n : {4.0, 16.0, 64.0}) {
      if (r > ceil_log2(n)) continue;
      const int L = hexfam_layers(r, n);
      const auto layer = hexfam_layer(r, n);
      for (int i = 0; i < 200; ++i) {
        const auto h = run_hexfam(layer, World::single(n, sample_poi(rng, n)));
        CHECK(h.layers == L);
        CHECK(h.trace.success);
        CHECK(h.trace.responses <= r);
        CHECK(h.trace.probes_issued <= 6L * r * (L * (L - 1) / 2));
      }
    }
  }
}

TEST_CASE("run_hexfam entry points agree") {
  const World w = World::single(16.0, {5.0, -7.0});
  const auto a = run_hexfam(2, w);
  const auto b = run_hexfam(hexfam_layer(2, 16.0), w);
  CHECK(a.trace.probes_issued == b.trace.probes_issued);
  CHECK(a.trace.distance == b.trace.distance);
  CHECK_THROWS_AS(run_hexfam(generate_layer(AlgorithmId::kAlg3), w), std::invalid_argument);
}

TEST_CASE("find_all: two POIs five apart") {
  const auto p = alg1_center_last();
  const auto out = find_all(p, World::many(8.0, {{0.0, 0.0}, {5.0, 0.0}}));
  REQUIRE(out.found_order.size() == 2);
  CHECK(out.found_order[0] != out.found_order[1]);
  REQUIRE(out.gaps.size() == 1);
  CHECK(out.gaps[0] == doctest::Approx(5.0));
  CHECK(out.doubling_probes == 3);
  CHECK(out.searches[1].final_state.area_radius <= 1.0);
}

TEST_CASE("find_all with one POI adds only termination probes") {
  const auto p = generate_layer(AlgorithmId::kAlg4);
  const World w = World::single(1024.0, {100.0, -700.0});
  const auto single = run_single(p, w);
  const auto all = find_all(p, w);
  CHECK(all.found_order.size() == 1);
  CHECK(all.probes_total == single.probes_issued);
  CHECK(all.distance_total == doctest::Approx(single.distance));
  CHECK(all.termination_probes > 0);
  CHECK(all.gap_sum == 0.0);
}

TEST_CASE("find_all finds every POI exactly once") {
  const auto p = generate_layer(AlgorithmId::kAlg3);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const int k = 2 + t % 7;
    std::vector<Point2> pois;
    for (int i = 0; i < k; ++i) pois.push_back(sample_poi(rng, 1024.0));
    const auto out = find_all(p, World::many(1024.0, pois));
    std::vector<int> seen(k, 0);
    for (int i : out.found_order) ++seen[i];
    for (int s : seen) CHECK(s == 1);
    double sum = 0.0;
    for (double e : out.gaps) sum += e;
    CHECK(sum == doctest::Approx(out.gap_sum));
  }
}

TEST_CASE("shell baseline") {
  const double n = 1 << 20;
  const auto s = shell_search(World::single(n, {n / 2, 0.0}));
  CHECK(s.trace.success);
  CHECK(s.radial_probes == 20);
  CHECK(s.trace.probes_issued == s.radial_probes + s.angular_probes);
  // Golden value for this implementation.
  CHECK(s.trace.probes_issued == 41);
  CHECK(shell_search(World::single(1.0, {0.5, 0.5})).trace.probes_issued == 0);
  // A POI on the outer boundary is still localized.
  CHECK(shell_search(World::single(n, polar(n, 1.0))).trace.success);
}

TEST_CASE("shell baseline localizes POIs on probe edges") {
  // Radii n/2^j and angles k pi/6 land exactly on radial and angular probe boundaries.
  const double n = 1 << 16;
  for (int j = 1; j <= 4; ++j) {
    for (int k = 0; k < 12; ++k) {
      const Point2 poi = polar(std::ldexp(n, -j), kPi * k / 6.0);
      const auto s = shell_search(World::single(n, poi));
      CAPTURE(j);
      CAPTURE(k);
      CHECK(s.trace.success);
      CHECK(distance(s.trace.final_state.area_center, poi) <= 1.0);
    }
  }
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    const Point2 poi = sample_poi(rng, n);
    CHECK(shell_search(World::single(n, poi)).trace.success);
  }
}
