#include "marcopolo/placement_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#ifndef MARCOPOLO_VERSION
#define MARCOPOLO_VERSION "0.0.0"
#endif

namespace marcopolo {

using nlohmann::json;

std::string tool_version() { return MARCOPOLO_VERSION; }

std::string to_json(const PlacementFile& file) {
  const LayerPlacement& p = file.placement;
  json j;
  j["schema_version"] = file.schema_version;
  j["algorithm_id"] = to_string(p.algorithm);
  if (p.algorithm == AlgorithmId::kHexFamily) j["response_budget"] = p.response_budget;
  j["rho1"] = p.rho1 ? json(*p.rho1) : json(nullptr);
  json probes = json::array();
  for (const auto& q : p.probes) probes.push_back({{"x", q.center.x}, {"y", q.center.y}, {"rho", q.rho}});
  j["probes"] = probes;
  j["provenance"] = {{"kind", file.provenance.kind},
                     {"seed", file.provenance.seed},
                     {"tool_version", file.provenance.tool_version}};
  return j.dump(2) + "\n";
}

PlacementFile from_json(std::string_view text, const LoadOptions& options) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw PlacementError(std::string("placement file is not valid JSON: ") + e.what());
  }
  PlacementFile f;
  try {
    f.schema_version = j.at("schema_version").get<int>();
    if (f.schema_version != kPlacementSchemaVersion) {
      throw PlacementError("unsupported placement schema_version " + std::to_string(f.schema_version));
    }
    LayerPlacement& p = f.placement;
    p.algorithm = parse_algorithm(j.at("algorithm_id").get<std::string>());
    if (j.contains("response_budget")) p.response_budget = j["response_budget"].get<int>();
    if (j.contains("rho1") && !j["rho1"].is_null()) p.rho1 = j["rho1"].get<double>();
    for (const auto& q : j.at("probes")) {
      const Probe probe{{q.at("x").get<double>(), q.at("y").get<double>()}, q.at("rho").get<double>()};
      if (!(probe.rho > 0.0) || probe.rho > 1.0 || !std::isfinite(probe.center.x) || !std::isfinite(probe.center.y)) {
        throw PlacementError("probe radius outside (0, 1] or non-finite center");
      }
      p.probes.push_back(probe);
    }
    if (p.probes.size() < 2) throw PlacementError("placement needs at least two probes");
    const auto& prov = j.at("provenance");
    f.provenance.kind = prov.at("kind").get<std::string>();
    f.provenance.seed = prov.value("seed", std::uint64_t{0});
    f.provenance.tool_version = prov.value("tool_version", std::string{});
  } catch (const json::exception& e) {
    throw PlacementError(std::string("placement file schema mismatch: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw PlacementError(e.what());
  }
  LayerPlacement& p = f.placement;
  if (p.rho1 && is_progressive(p.algorithm)) {
    for (std::size_t k = 0; k < p.probes.size(); ++k) {
      const double want = std::pow(*p.rho1, static_cast<int>(k) + 1);
      if (std::abs(p.probes[k].rho - want) > 1e-12 * want) {
        throw PlacementError("probe " + std::to_string(k + 1) + " breaks the rho1^k schedule");
      }
    }
  }
  const auto report = certify(p, options.min_cell);
  if (!report.certified_covered && !options.allow_uncertified) {
    throw PlacementError("placement does not certify coverage of the unit disk");
  }
  return f;
}

void save_placement(const std::filesystem::path& path, const PlacementFile& file) {
  std::ofstream out(path);
  if (!out) throw PlacementError("cannot write " + path.string());
  out << to_json(file);
  if (!out) throw PlacementError("write failed for " + path.string());
}

PlacementFile load_placement(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw PlacementError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str(), options);
}

}  // namespace marcopolo
