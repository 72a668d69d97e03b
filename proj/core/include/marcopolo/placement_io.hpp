#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "marcopolo/placements.hpp"

namespace marcopolo {

inline constexpr int kPlacementSchemaVersion = 1;

std::string tool_version();

struct Provenance {
  std::string kind = "constructed";  // "constructed" or "optimized"
  std::uint64_t seed = 0;
  std::string tool_version = marcopolo::tool_version();
};

struct PlacementFile {
  int schema_version = kPlacementSchemaVersion;
  LayerPlacement placement;
  Provenance provenance;
};

class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadOptions {
  bool allow_uncertified = false;
  double min_cell = 1e-4;
};

std::string to_json(const PlacementFile& file);
// Parses and re-certifies; throws PlacementError on schema mismatch or, unless
// allowed, on a placement that does not certify.
PlacementFile from_json(std::string_view text, const LoadOptions& options = {});

void save_placement(const std::filesystem::path& path, const PlacementFile& file);
PlacementFile load_placement(const std::filesystem::path& path, const LoadOptions& options = {});

}  // namespace marcopolo
