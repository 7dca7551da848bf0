#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hubloc/demand.hpp"
#include "hubloc/hub_optimizer.hpp"
#include "hubloc/planar_frame.hpp"
#include "hubloc/road_graph.hpp"

namespace hubloc {

void to_json(nlohmann::json& j, const IterationStats& s);
void from_json(const nlohmann::json& j, IterationStats& s);
void to_json(nlohmann::json& j, const OptimizationReport& r);
void from_json(const nlohmann::json& j, OptimizationReport& r);

}  // namespace hubloc

namespace hubloc::io {

inline constexpr const char* kToolVersion = "0.3.0";

/// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(std::string_view bytes);

struct InputFile {
  std::string role;  // edges | deliveries | population | hubs
  std::string path;
  std::string sha256;

  friend bool operator==(const InputFile&, const InputFile&) = default;
};

/// Everything needed to reproduce a run.
struct RunManifest {
  std::vector<InputFile> inputs;
  double alpha = 1.0;
  std::string norm = "max";
  double grid_res_m = 1000.0;
  double cutoff_m = 10.0;
  int max_iter = 10;
  double max_snap_m = kDefaultMaxSnapM;
  std::vector<std::string> excluded_classes;
  std::string snap_policy = "strict";
  std::string tool_version = kToolVersion;

  /// Adds an entry digesting the current bytes of `path`.
  void add_input(const std::string& role, const std::filesystem::path& path);

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

/// The report document written as report.json.
struct ReportDocument {
  RunManifest manifest;
  std::vector<DemandPoint> demand;
  std::size_t dropped_records = 0;
  std::size_t dropped_cells = 0;
  std::size_t unbinned_records = 0;
  OptimizationReport report;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

void to_json(nlohmann::json& j, const ReportDocument& d);
void from_json(const nlohmann::json& j, ReportDocument& d);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const nlohmann::json& j);

/// Point per final hub.
nlohmann::json hubs_geojson(const RoadGraph& g, const OptimizationReport& r);

/// Hull per cluster per iteration, computed in `frame` and unprojected.
/// Clusters with one distinct location become Points, collinear ones
/// LineStrings, the rest closed Polygons.
nlohmann::json clusters_geojson(const PlanarFrame& frame, std::span<const DemandPoint> demand,
                                const OptimizationReport& r);

/// Structural GeoJSON check: geometry types, coordinate ranges in lon-lat
/// order, closed rings with at least four positions. Returns the problems
/// found.
std::vector<std::string> validate_geojson(const nlohmann::json& doc);

}  // namespace hubloc::io
