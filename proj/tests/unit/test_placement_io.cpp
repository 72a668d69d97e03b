#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "marcopolo/placement_io.hpp"

using namespace marcopolo;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("marcopolo_test_" + name);
}

}  // namespace

TEST_CASE("round trip is lossless") {
  for (auto id : {AlgorithmId::kAlg1, AlgorithmId::kAlg2, AlgorithmId::kAlg6}) {
    PlacementFile f;
    f.placement = generate_layer(id);
    const auto path = temp_file(to_string(id) + ".json");
    save_placement(path, f);
    const auto back = load_placement(path);
    CHECK(back.placement.algorithm == id);
    CHECK(back.placement.probes == f.placement.probes);
    CHECK(back.placement.rho1 == f.placement.rho1);
    CHECK(back.placement.certified);
    CHECK(back.provenance.kind == "constructed");
    CHECK(back.schema_version == kPlacementSchemaVersion);
    std::filesystem::remove(path);
  }
}

TEST_CASE("tampered radius is rejected") {
  PlacementFile f;
  f.placement = generate_layer(AlgorithmId::kAlg1);
  auto j = nlohmann::json::parse(to_json(f));
  j["probes"][6]["rho"] = 0.4;
  CHECK_THROWS_AS(from_json(j.dump()), PlacementError);
  LoadOptions lax;
  lax.allow_uncertified = true;
  const auto loaded = from_json(j.dump(), lax);
  CHECK_FALSE(loaded.placement.certified);
}

TEST_CASE("schedule and schema checks") {
  PlacementFile f;
  f.placement = generate_layer(AlgorithmId::kAlg3);
  auto j = nlohmann::json::parse(to_json(f));
  auto broken = j;
  broken["probes"][2]["rho"] = broken["probes"][2]["rho"].get<double>() * (1.0 + 1e-9);
  CHECK_THROWS_AS(from_json(broken.dump()), PlacementError);
  auto future = j;
  future["schema_version"] = kPlacementSchemaVersion + 1;
  CHECK_THROWS_AS(from_json(future.dump()), PlacementError);
  CHECK_THROWS_AS(from_json("{not json"), PlacementError);
  CHECK_THROWS(load_placement(temp_file("missing.json")));
}
