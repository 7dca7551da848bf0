#include "hubloc/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "hubloc/csv_io.hpp"
#include "hubloc/demand.hpp"
#include "hubloc/error.hpp"
#include "hubloc/hub_optimizer.hpp"
#include "hubloc/median_solver.hpp"
#include "hubloc/report_io.hpp"
#include "hubloc/synthetic.hpp"

namespace hubloc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Options shared by the commands that build demand from files.
struct DemandOptions {
  std::string edges;
  std::string deliveries;
  std::string hubs;
  std::string population;
  double alpha = 1.0;
  std::string norm = "max";
  double cell_size_m = 1000.0;
  double max_snap_m = kDefaultMaxSnapM;
  std::string snap_policy = "strict";
  std::string exclude_classes = "motorway,metro";
};

struct OptimizeOptions {
  DemandOptions demand;
  double grid_res_m = kDefaultGridResM;
  double cutoff_m = 10.0;
  int max_iter = 10;
  int restarts = 0;
  std::uint64_t seed = 1;
  std::string out_dir = "hubloc-out";
};

void add_demand_options(CLI::App& cmd, DemandOptions& o) {
  cmd.add_option("--edges", o.edges, "Road edge CSV")->required();
  cmd.add_option("--deliveries", o.deliveries, "Delivery CSV (lon,lat[,timestamp])")->required();
  cmd.add_option("--hubs", o.hubs, "Hub CSV (lon,lat)")->required();
  cmd.add_option("--population", o.population, "Population cell CSV (lon,lat,ppp)");
  cmd.add_option("--alpha", o.alpha, "Weight of normalized deliveries vs population")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--norm", o.norm, "Normalization scheme")
      ->capture_default_str()->check(CLI::IsMember({"max", "sum"}));
  cmd.add_option("--cell-size-m", o.cell_size_m, "Population cell size")
      ->capture_default_str()->check(CLI::PositiveNumber);
  cmd.add_option("--max-snap-m", o.max_snap_m, "Largest distance a point may be snapped")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd.add_option("--snap-policy", o.snap_policy, "strict aborts on unsnappable input, lenient drops it")
      ->capture_default_str()->check(CLI::IsMember({"strict", "lenient"}));
  cmd.add_option("--exclude-classes", o.exclude_classes, "Comma separated road classes to drop")
      ->capture_default_str();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::set<RoadClass> parse_classes(const std::vector<std::string>& names) {
  std::set<RoadClass> out;
  for (const auto& n : names) {
    const auto c = parse_road_class(n);
    if (!c) throw InputError("unknown road class '" + n + "' in --exclude-classes");
    out.insert(*c);
  }
  return out;
}

SnapPolicy parse_policy(const std::string& s) {
  return s == "lenient" ? SnapPolicy::Lenient : SnapPolicy::Strict;
}

// Inputs loaded and turned into demand, shared by optimize and baseline.
struct Prepared {
  RoadGraph graph;
  DemandSet demand;
  PlanarFrame frame{GeoPoint{}};
  std::vector<GeoPoint> hubs;
  io::RunManifest manifest;
};

Prepared prepare(const DemandOptions& o) {
  Prepared p;
  const auto excluded = split_list(o.exclude_classes);
  p.graph = load_road_graph(io::read_edges(o.edges), parse_classes(excluded));
  if (p.graph.empty()) throw InputError("road network is empty after excluding classes");
  const auto records = io::read_deliveries(o.deliveries);
  p.hubs = io::read_points(o.hubs);
  if (p.hubs.empty()) throw InputError(o.hubs + ": no hubs listed");

  p.manifest.add_input("edges", o.edges);
  p.manifest.add_input("deliveries", o.deliveries);
  p.manifest.add_input("hubs", o.hubs);
  p.manifest.alpha = o.alpha;
  p.manifest.norm = o.norm;
  p.manifest.max_snap_m = o.max_snap_m;
  p.manifest.excluded_classes = excluded;
  p.manifest.snap_policy = o.snap_policy;

  const SnapPolicy policy = parse_policy(o.snap_policy);
  if (o.population.empty()) {
    if (o.alpha != 1.0) throw InputError("--alpha other than 1 needs --population");
    if (records.empty()) throw InputError(o.deliveries + ": no deliveries listed");
    std::vector<GeoPoint> pts;
    pts.reserve(records.size());
    for (const auto& r : records) pts.push_back(r.pos);
    p.frame = PlanarFrame::centered_on(pts);
    p.demand = build_phase1_demand(p.graph, records, o.max_snap_m, policy);
  } else {
    p.manifest.add_input("population", o.population);
    const auto cells = io::read_population(o.population);
    if (cells.empty()) throw InputError(o.population + ": no population cells listed");
    std::vector<GeoPoint> pts;
    pts.reserve(cells.size());
    for (const auto& c : cells) pts.push_back(c.center);
    p.frame = PlanarFrame::centered_on(pts);
    Phase2Options opt;
    opt.max_snap_m = o.max_snap_m;
    opt.policy = policy;
    opt.norm = o.norm == "sum" ? NormScheme::Sum : NormScheme::Max;
    opt.cell_size_m = o.cell_size_m;
    p.demand = build_phase2_demand(p.graph, p.frame, records, cells, WeightBlend(o.alpha), opt);
  }
  if (p.demand.points.empty()) throw InputError("no demand point could be placed on the network");
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw Error("cannot write " + path.string());
}

// Fills a sibling staging directory and moves it into place only when every
// file was written.
template <typename Fill>
void write_directory_atomically(const fs::path& target, Fill&& fill) {
  fs::path staging = target;
  staging += ".partial";
  fs::remove_all(staging);
  fs::create_directories(staging);
  try {
    fill(staging);
    if (fs::exists(target)) fs::remove_all(target);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::rename(staging, target);
  } catch (...) {
    std::error_code ignored;
    fs::remove_all(staging, ignored);
    throw;
  }
}

void write_file_atomically(const fs::path& target, const std::string& text) {
  fs::path staging = target;
  staging += ".partial";
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  write_text(staging, text);
  fs::rename(staging, target);
}

std::vector<GeoPoint> random_hubs(const DemandSet& demand, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(demand.points.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<GeoPoint> out;
  for (std::size_t m = 0; m < k; ++m) {
    std::uniform_int_distribution<std::size_t> pick(m, idx.size() - 1);
    std::swap(idx[m], idx[pick(rng)]);
    out.push_back(demand.points[idx[m]].pos);
  }
  return out;
}

int cmd_optimize(const OptimizeOptions& o, std::ostream& out) {
  Prepared p = prepare(o.demand);
  OptimizerConfig cfg;
  cfg.max_iter = o.max_iter;
  cfg.cutoff_m = o.cutoff_m;
  cfg.grid_res_m = o.grid_res_m;
  cfg.max_snap_m = o.demand.max_snap_m;
  cfg.snap_policy = parse_policy(o.demand.snap_policy);
  p.manifest.grid_res_m = o.grid_res_m;
  p.manifest.cutoff_m = o.cutoff_m;
  p.manifest.max_iter = o.max_iter;

  OptimizationReport report = run(p.graph, p.frame, p.demand.points, p.hubs, cfg);
  if (o.restarts > 0) {
    std::mt19937_64 rng(o.seed);
    const double baseline = report.baseline_objective_m;
    for (int r = 0; r < o.restarts; ++r) {
      OptimizationReport alt =
          run(p.graph, p.frame, p.demand.points, random_hubs(p.demand, p.hubs.size(), rng), cfg);
      if (alt.final_objective_m() < report.final_objective_m()) report = std::move(alt);
    }
    report.baseline_objective_m = baseline;
  }

  io::ReportDocument doc{p.manifest, p.demand.points, p.demand.dropped_records,
                         p.demand.dropped_cells, p.demand.unbinned_records, report};

  write_directory_atomically(o.out_dir, [&](const fs::path& dir) {
    write_text(dir / "report.json", io::dump(json(doc)));

    std::ostringstream obj;
    obj << "iteration,objective_m\n";
    for (const auto& it : report.iterations) obj << it.iteration << ',' << io::format_double(it.objective_m) << '\n';
    write_text(dir / "objective.csv", obj.str());

    write_text(dir / "hubs.geojson", io::dump(io::hubs_geojson(p.graph, report)));
    write_text(dir / "clusters.geojson", io::dump(io::clusters_geojson(p.frame, p.demand.points, report)));

    std::ostringstream asg;
    asg << "demand_id,lon,lat,node,count,weight,cluster,hub_node\n";
    for (const auto& d : p.demand.points) {
      const std::size_t c = report.final_assignment[d.id];
      asg << d.id << ',' << io::format_double(d.pos.lon) << ',' << io::format_double(d.pos.lat) << ','
          << d.node << ',' << d.count << ',' << io::format_double(d.weight) << ',';
      if (c == kUnassigned) {
        asg << ",\n";
      } else {
        asg << c << ',' << report.iterations.back().hubs[c] << '\n';
      }
    }
    write_text(dir / "assignment.csv", asg.str());
  });

  out << "baseline " << io::format_double(report.baseline_objective_m) << " m, optimized "
      << io::format_double(report.final_objective_m()) << " m after " << report.iterations.size()
      << " iteration(s), " << to_string(report.stop_reason) << "\n";
  return 0;
}

int cmd_baseline(const DemandOptions& o, const std::string& out_dir, std::ostream& out) {
  Prepared p = prepare(o);
  OptimizerConfig cfg;
  cfg.max_snap_m = o.max_snap_m;
  cfg.snap_policy = parse_policy(o.snap_policy);
  const auto hubs = snap_hubs(p.graph, p.hubs, cfg.max_snap_m);
  const Assignment a = assign_to_nearest_hub(p.graph, p.demand.points, hubs, cfg.snap_policy);
  const double value = objective(a.clusters, a.distance_m, unit_weights(p.demand.points));

  json clusters = json::array();
  for (const auto& c : a.clusters) {
    long long deliveries = 0;
    for (std::size_t i : c.members) deliveries += p.demand.points[i].count;
    const GeoPoint pos = p.graph.node(c.centroid_node).pos;
    clusters.push_back({{"cluster", c.index}, {"node", c.centroid_node}, {"lon", pos.lon}, {"lat", pos.lat},
                        {"members", c.members.size()}, {"deliveries", deliveries}});
  }
  json doc{{"manifest", p.manifest},
           {"objective_m", value},
           {"clusters", std::move(clusters)},
           {"dropped_demand", a.dropped},
           {"dropped_records", p.demand.dropped_records}};
  write_file_atomically(fs::path(out_dir) / "baseline.json", io::dump(doc));
  out << "baseline " << io::format_double(value) << " m per delivery\n";
  return 0;
}

struct OdOptions {
  std::string edges, origins, destinations, out, exclude_classes = "motorway,metro";
  double max_snap_m = kDefaultMaxSnapM;
};

int cmd_odmatrix(const OdOptions& o, std::ostream& out) {
  const RoadGraph g = load_road_graph(io::read_edges(o.edges), parse_classes(split_list(o.exclude_classes)));
  if (g.empty()) throw InputError("road network is empty after excluding classes");
  const auto origins = snap_hubs(g, io::read_points(o.origins), o.max_snap_m);
  const auto destinations = snap_hubs(g, io::read_points(o.destinations), o.max_snap_m);
  const DistanceMatrix m = od_matrix(g, origins, destinations);
  std::ostringstream csv;
  io::write_distance_matrix(csv, m);
  if (o.out.empty()) {
    out << csv.str();
  } else {
    write_file_atomically(o.out, csv.str());
  }
  return 0;
}

struct SolveOptions {
  std::string problem, out, method = "auto";
  std::uint64_t seed = 1;
  std::uint64_t subset_cap = kDefaultSubsetCap;
};

int cmd_solve(const SolveOptions& o, std::ostream& out) {
  json j;
  try {
    j = json::parse(io::read_file(o.problem));
  } catch (const json::parse_error& e) {
    throw InputError(o.problem + ": " + e.what());
  }
  const MedianProblem prob = median_problem_from_json(j);
  MedianSolution sol;
  if (o.method == "exact") {
    sol = solve_pmedian_exact(prob, o.subset_cap);
  } else if (o.method == "interchange") {
    sol = solve_pmedian_interchange(prob, o.seed);
  } else if (o.method == "one") {
    sol = solve_1median(prob);
  } else {
    sol = solve_pmedian(prob, o.seed, o.subset_cap);
  }
  const Verification v = verify_solution(prob, sol);
  if (!v.ok) throw Error("solver produced an invalid solution: " + v.reasons.front());
  const std::string text = io::dump(json(sol));
  if (o.out.empty()) {
    out << text;
  } else {
    write_file_atomically(o.out, text);
  }
  return 0;
}

struct SynthOptions {
  std::string out_dir = "hubloc-synth";
  std::string kind = "lattice";
  std::uint64_t seed = 7;
  std::size_t size = 20;
  std::size_t deliveries_per_cluster = 700;
  double displace_m = 1500.0;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  std::vector<EdgeRecord> edges;
  double extent = 0.0;
  if (o.kind == "lattice") {
    synth::LatticeSpec spec;
    spec.rows = spec.cols = o.size;
    edges = synth::lattice_edges(spec, o.seed);
    extent = static_cast<double>(o.size - 1) * spec.spacing_m;
  } else {
    synth::RandomPlanarSpec spec;
    spec.nodes = o.size * o.size;
    edges = synth::random_planar_edges(spec, o.seed);
    extent = spec.extent_m;
  }
  const GeoPoint sw = synth::kDefaultOrigin;
  const GeoPoint ne = synth::offset(sw, extent, extent);
  const std::vector<synth::GaussianCluster> clusters{
      {synth::offset(sw, 0.25 * extent, 0.25 * extent), 0.08 * extent, o.deliveries_per_cluster},
      {synth::offset(sw, 0.75 * extent, 0.35 * extent), 0.08 * extent, o.deliveries_per_cluster},
      {synth::offset(sw, 0.45 * extent, 0.8 * extent), 0.08 * extent, o.deliveries_per_cluster}};
  const auto deliveries = synth::gaussian_deliveries(clusters, sw, ne, 50.0, o.seed + 1);
  std::vector<GeoPoint> hubs;
  for (const auto& c : clusters) hubs.push_back(synth::offset(c.center, o.displace_m, -o.displace_m));
  const auto population = synth::population_grid(sw, ne, 1000.0, o.seed + 2);

  write_directory_atomically(o.out_dir, [&](const fs::path& dir) {
    std::ostringstream e, d, h, p;
    io::write_edges(e, edges);
    io::write_deliveries(d, deliveries);
    io::write_points(h, hubs);
    io::write_population(p, population);
    write_text(dir / "edges.csv", e.str());
    write_text(dir / "deliveries.csv", d.str());
    write_text(dir / "hubs.csv", h.str());
    write_text(dir / "population.csv", p.str());
  });
  out << "wrote " << edges.size() << " edges, " << deliveries.size() << " deliveries, " << hubs.size()
      << " hubs and " << population.size() << " population cells to " << o.out_dir << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Logistics hub placement on road networks"};
  app.name(args.empty() ? "hubloc" : args.front());
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kToolVersion));

  OptimizeOptions opt;
  auto* optimize = app.add_subcommand("optimize", "Network K-Means with 1-median centroid updates");
  add_demand_options(*optimize, opt.demand);
  optimize->add_option("--grid-res-m", opt.grid_res_m, "Candidate grid resolution")
      ->capture_default_str()->check(CLI::PositiveNumber);
  optimize->add_option("--cutoff-m", opt.cutoff_m, "Stop when every centroid moves less than this")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  optimize->add_option("--max-iter", opt.max_iter, "Iteration cap")
      ->capture_default_str()->check(CLI::PositiveNumber);
  optimize->add_option("--restarts", opt.restarts, "Extra runs from random demand points; best kept")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  optimize->add_option("--seed", opt.seed, "Seed for --restarts")->capture_default_str();
  optimize->add_option("--out-dir", opt.out_dir, "Output directory")->capture_default_str();

  DemandOptions base;
  std::string base_out = ".";
  auto* baseline = app.add_subcommand("baseline", "Objective of serving demand from the given hubs");
  add_demand_options(*baseline, base);
  baseline->add_option("--out-dir", base_out, "Directory for baseline.json")->capture_default_str();

  OdOptions od;
  auto* odm = app.add_subcommand("odmatrix", "Origin-destination road distance matrix");
  odm->add_option("--edges", od.edges, "Road edge CSV")->required();
  odm->add_option("--origins", od.origins, "Origin CSV (lon,lat)")->required();
  odm->add_option("--destinations", od.destinations, "Destination CSV (lon,lat)")->required();
  odm->add_option("--out", od.out, "Output CSV (stdout when omitted)");
  odm->add_option("--max-snap-m", od.max_snap_m, "Largest snap distance")->capture_default_str();
  odm->add_option("--exclude-classes", od.exclude_classes, "Road classes to drop")->capture_default_str();

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "Solve a p-median problem given as JSON");
  solve->add_option("--problem", so.problem, "Problem JSON (weights, distances, p)")->required();
  solve->add_option("--out", so.out, "Solution JSON (stdout when omitted)");
  solve->add_option("--method", so.method, "Solver")
      ->capture_default_str()->check(CLI::IsMember({"auto", "one", "exact", "interchange"}));
  solve->add_option("--seed", so.seed, "Seed for the interchange heuristic")->capture_default_str();
  solve->add_option("--subset-cap", so.subset_cap, "Largest subset count for exact search")
      ->capture_default_str();

  SynthOptions sy;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic input set");
  synth_cmd->add_option("--out-dir", sy.out_dir, "Output directory")->capture_default_str();
  synth_cmd->add_option("--kind", sy.kind, "Network kind")
      ->capture_default_str()->check(CLI::IsMember({"lattice", "planar"}));
  synth_cmd->add_option("--seed", sy.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--size", sy.size, "Lattice side (planar: sqrt of node count)")
      ->capture_default_str()->check(CLI::Range(2, 200));
  synth_cmd->add_option("--deliveries-per-cluster", sy.deliveries_per_cluster, "Deliveries per demand cluster")
      ->capture_default_str();
  synth_cmd->add_option("--displace-m", sy.displace_m, "Offset of the initial hubs from cluster centers")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*optimize) return cmd_optimize(opt, out);
    if (*baseline) return cmd_baseline(base, base_out, out);
    if (*odm) return cmd_odmatrix(od, out);
    if (*solve) return cmd_solve(so, out);
    if (*synth_cmd) return cmd_synth(sy, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace hubloc::cli
