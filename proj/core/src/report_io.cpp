#include "hubloc/report_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <memory>

#include "hubloc/csv_io.hpp"
#include "hubloc/error.hpp"
#include "hubloc/hull.hpp"

namespace hubloc {

namespace {

nlohmann::json encode_assignment(const std::vector<std::size_t>& a) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t c : a) {
    if (c == kUnassigned) {
      out.push_back(-1);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::size_t> decode_assignment(const nlohmann::json& j) {
  std::vector<std::size_t> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    const long long c = v.get<long long>();
    out.push_back(c < 0 ? kUnassigned : static_cast<std::size_t>(c));
  }
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const IterationStats& s) {
  j = nlohmann::json{{"iteration", s.iteration},
           {"objective_m", s.objective_m},
           {"hubs", s.hubs},
           {"centroid_moves_m", s.centroid_moves_m},
           {"candidates_per_cluster", s.candidates_per_cluster},
           {"candidates_evaluated", s.candidates_evaluated},
           {"candidate_nodes", s.candidate_nodes},
           {"assignment", encode_assignment(s.assignment)}};
}

void from_json(const nlohmann::json& j, IterationStats& s) {
  s.iteration = j.at("iteration").get<int>();
  s.objective_m = j.at("objective_m").get<double>();
  s.hubs = j.at("hubs").get<std::vector<NodeId>>();
  s.centroid_moves_m = j.at("centroid_moves_m").get<std::vector<double>>();
  s.candidates_per_cluster = j.at("candidates_per_cluster").get<std::vector<std::size_t>>();
  s.candidates_evaluated = j.at("candidates_evaluated").get<std::size_t>();
  s.candidate_nodes = j.at("candidate_nodes").get<std::vector<std::vector<NodeId>>>();
  s.assignment = decode_assignment(j.at("assignment"));
}

void to_json(nlohmann::json& j, const OptimizationReport& r) {
  nlohmann::json hubs = nlohmann::json::array();
  for (const auto& h : r.final_hubs) {
    hubs.push_back({{"cluster", h.cluster}, {"node", h.node}, {"lon", h.pos.lon}, {"lat", h.pos.lat}});
  }
  j = nlohmann::json{{"stop_reason", std::string(to_string(r.stop_reason))},
           {"baseline_objective_m", r.baseline_objective_m},
           {"final_objective_m", r.iterations.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.final_objective_m())},
           {"iterations", r.iterations},
           {"final_hubs", std::move(hubs)},
           {"final_assignment", encode_assignment(r.final_assignment)},
           {"dropped_demand", r.dropped_demand},
           {"repaired_clusters", r.repaired_clusters}};
}

void from_json(const nlohmann::json& j, OptimizationReport& r) {
  const auto reason = j.at("stop_reason").get<std::string>();
  if (reason == "CutoffMet") {
    r.stop_reason = StopReason::CutoffMet;
  } else if (reason == "MaxIterations") {
    r.stop_reason = StopReason::MaxIterations;
  } else {
    throw InputError("unknown stop_reason '" + reason + "'");
  }
  r.baseline_objective_m = j.at("baseline_objective_m").get<double>();
  r.iterations = j.at("iterations").get<std::vector<IterationStats>>();
  r.final_hubs.clear();
  for (const auto& h : j.at("final_hubs")) {
    r.final_hubs.push_back({h.at("cluster").get<std::size_t>(), h.at("node").get<NodeId>(),
                            {h.at("lon").get<double>(), h.at("lat").get<double>()}});
  }
  r.final_assignment = decode_assignment(j.at("final_assignment"));
  r.dropped_demand = j.at("dropped_demand").get<std::vector<std::size_t>>();
  r.repaired_clusters = j.at("repaired_clusters").get<std::size_t>();
}

}  // namespace hubloc

namespace hubloc::io {

using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

void RunManifest::add_input(const std::string& role, const std::filesystem::path& path) {
  inputs.push_back({role, path.string(), sha256_hex(read_file(path))});
}

void to_json(json& j, const RunManifest& m) {
  json inputs = json::array();
  for (const auto& f : m.inputs) inputs.push_back({{"role", f.role}, {"path", f.path}, {"sha256", f.sha256}});
  j = json{{"tool_version", m.tool_version},
           {"inputs", std::move(inputs)},
           {"config",
            {{"alpha", m.alpha},
             {"norm", m.norm},
             {"grid_res_m", m.grid_res_m},
             {"cutoff_m", m.cutoff_m},
             {"max_iter", m.max_iter},
             {"max_snap_m", m.max_snap_m},
             {"excluded_classes", m.excluded_classes},
             {"snap_policy", m.snap_policy}}}};
}

void from_json(const json& j, RunManifest& m) {
  m.tool_version = j.at("tool_version").get<std::string>();
  m.inputs.clear();
  for (const auto& f : j.at("inputs")) {
    m.inputs.push_back({f.at("role").get<std::string>(), f.at("path").get<std::string>(),
                        f.at("sha256").get<std::string>()});
  }
  const auto& c = j.at("config");
  m.alpha = c.at("alpha").get<double>();
  m.norm = c.at("norm").get<std::string>();
  m.grid_res_m = c.at("grid_res_m").get<double>();
  m.cutoff_m = c.at("cutoff_m").get<double>();
  m.max_iter = c.at("max_iter").get<int>();
  m.max_snap_m = c.at("max_snap_m").get<double>();
  m.excluded_classes = c.at("excluded_classes").get<std::vector<std::string>>();
  m.snap_policy = c.at("snap_policy").get<std::string>();
}

void to_json(json& j, const ReportDocument& d) {
  json demand = json::array();
  for (const auto& p : d.demand) {
    demand.push_back({{"id", p.id}, {"lon", p.pos.lon}, {"lat", p.pos.lat}, {"node", p.node},
                      {"count", p.count}, {"weight", p.weight}});
  }
  j = json{{"manifest", d.manifest},
           {"demand", std::move(demand)},
           {"dropped_records", d.dropped_records},
           {"dropped_cells", d.dropped_cells},
           {"unbinned_records", d.unbinned_records}};
  j.update(json(d.report));
}

void from_json(const json& j, ReportDocument& d) {
  d.manifest = j.at("manifest").get<RunManifest>();
  d.demand.clear();
  for (const auto& p : j.at("demand")) {
    d.demand.push_back({p.at("id").get<std::size_t>(),
                        {p.at("lon").get<double>(), p.at("lat").get<double>()},
                        p.at("node").get<NodeId>(),
                        p.at("count").get<long long>(),
                        p.at("weight").get<double>()});
  }
  d.dropped_records = j.at("dropped_records").get<std::size_t>();
  d.dropped_cells = j.at("dropped_cells").get<std::size_t>();
  d.unbinned_records = j.at("unbinned_records").get<std::size_t>();
  d.report = j.get<OptimizationReport>();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

json position(const GeoPoint& p) { return json::array({p.lon, p.lat}); }

json feature(json geometry, json properties) {
  return json{{"type", "Feature"}, {"geometry", std::move(geometry)}, {"properties", std::move(properties)}};
}

json collection(json features) {
  return json{{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

}  // namespace

json hubs_geojson(const RoadGraph& g, const OptimizationReport& r) {
  json features = json::array();
  for (const auto& h : r.final_hubs) {
    features.push_back(feature({{"type", "Point"}, {"coordinates", position(g.node(h.node).pos)}},
                               {{"cluster", h.cluster}, {"node", h.node}}));
  }
  return collection(std::move(features));
}

json clusters_geojson(const PlanarFrame& frame, std::span<const DemandPoint> demand,
                      const OptimizationReport& r) {
  json features = json::array();
  for (const auto& it : r.iterations) {
    const std::size_t k = it.hubs.size();
    std::vector<std::vector<PlanarPoint>> members(k);
    std::vector<long long> deliveries(k, 0);
    for (std::size_t i = 0; i < it.assignment.size(); ++i) {
      const std::size_t c = it.assignment[i];
      if (c == kUnassigned) continue;
      members[c].push_back(frame.project(demand[i].pos));
      deliveries[c] += demand[i].count;
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (members[c].empty()) continue;
      const auto hull = convex_hull(members[c]);
      json coords = json::array();
      for (const auto& q : hull) coords.push_back(position(frame.unproject(q)));
      json geometry;
      if (hull.size() == 1) {
        geometry = {{"type", "Point"}, {"coordinates", coords.front()}};
      } else if (hull.size() == 2) {
        geometry = {{"type", "LineString"}, {"coordinates", std::move(coords)}};
      } else {
        coords.push_back(coords.front());
        geometry = {{"type", "Polygon"}, {"coordinates", json::array({std::move(coords)})}};
      }
      features.push_back(feature(std::move(geometry), {{"iteration", it.iteration},
                                                       {"cluster", c},
                                                       {"hub_node", it.hubs[c]},
                                                       {"members", members[c].size()},
                                                       {"deliveries", deliveries[c]}}));
    }
  }
  return collection(std::move(features));
}

namespace {

void check_position(const json& p, const std::string& where, std::vector<std::string>& problems) {
  if (!p.is_array() || p.size() < 2 || !p[0].is_number() || !p[1].is_number()) {
    problems.push_back(where + ": position must be an array [lon, lat]");
    return;
  }
  const double lon = p[0].get<double>(), lat = p[1].get<double>();
  if (!(lon >= -180.0 && lon <= 180.0) || !(lat >= -90.0 && lat <= 90.0)) {
    problems.push_back(where + ": position out of lon-lat range");
  }
}

void check_line(const json& line, std::size_t min_size, const std::string& where,
                std::vector<std::string>& problems) {
  if (!line.is_array() || line.size() < min_size) {
    problems.push_back(where + ": needs at least " + std::to_string(min_size) + " positions");
    return;
  }
  for (std::size_t k = 0; k < line.size(); ++k) check_position(line[k], where + "[" + std::to_string(k) + "]", problems);
}

void check_geometry(const json& g, const std::string& where, std::vector<std::string>& problems) {
  if (!g.is_object() || !g.contains("type") || !g.contains("coordinates")) {
    problems.push_back(where + ": geometry needs type and coordinates");
    return;
  }
  const std::string type = g["type"].is_string() ? g["type"].get<std::string>() : "";
  const json& c = g["coordinates"];
  if (type == "Point") {
    check_position(c, where, problems);
  } else if (type == "LineString" || type == "MultiPoint") {
    check_line(c, type == "LineString" ? 2 : 1, where, problems);
  } else if (type == "Polygon") {
    if (!c.is_array() || c.empty()) {
      problems.push_back(where + ": polygon needs at least one ring");
      return;
    }
    for (std::size_t r = 0; r < c.size(); ++r) {
      const std::string ring = where + ".ring" + std::to_string(r);
      check_line(c[r], 4, ring, problems);
      if (c[r].is_array() && c[r].size() >= 4 && c[r].front() != c[r].back()) {
        problems.push_back(ring + ": ring is not closed");
      }
    }
  } else {
    problems.push_back(where + ": unsupported geometry type '" + type + "'");
  }
}

}  // namespace

std::vector<std::string> validate_geojson(const json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array()) {
    problems.push_back("document must be a FeatureCollection with a features array");
    return problems;
  }
  for (std::size_t k = 0; k < doc["features"].size(); ++k) {
    const json& f = doc["features"][k];
    const std::string where = "features[" + std::to_string(k) + "]";
    if (!f.is_object() || f.value("type", "") != "Feature") {
      problems.push_back(where + ": not a Feature");
      continue;
    }
    if (!f.contains("properties") || !(f["properties"].is_object() || f["properties"].is_null())) {
      problems.push_back(where + ": properties must be an object or null");
    }
    if (!f.contains("geometry")) {
      problems.push_back(where + ": missing geometry");
      continue;
    }
    check_geometry(f["geometry"], where, problems);
  }
  return problems;
}

}  // namespace hubloc::io
