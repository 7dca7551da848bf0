// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hubloc/commands.hpp"
#include "hubloc/csv_io.hpp"
#include "hubloc/hub_optimizer.hpp"
#include "hubloc/median_solver.hpp"
#include "hubloc/road_graph.hpp"
#include "hubloc/synthetic.hpp"
#include "support/test_support.hpp"

namespace {

using namespace hubloc;
namespace fs = std::filesystem;
namespace ht = hubloc::testing;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- 1

Outcome shortest_paths() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240101);
  std::size_t mismatches = 0, graphs = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    const std::size_t extra = rng() % (2 * n + 1);
    const auto edges = ht::random_edges(n, extra, rng, 0.4);
    const auto g = ht::graph_from(edges);
    const auto fw = ht::floyd_warshall(n, edges);
    std::vector<NodeId> all(n);
    for (NodeId v = 0; v < n; ++v) all[v] = v;
    const auto od = od_matrix(g, all, all);
    for (NodeId s = 0; s < n; ++s) {
      const auto d = sssp(g, s);
      for (std::size_t t = 0; t < n; ++t) {
        if (d[t] != fw[s][t] || od.at(s, t) != fw[s][t]) ++mismatches;
      }
    }
    ++graphs;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0,
          std::to_string(graphs) + " graphs, " + std::to_string(mismatches) + " mismatched pairs, " +
              std::to_string(secs) + " s"};
}

// ---- 2

Outcome one_median() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240102);
  std::size_t wrong = 0, scale_wrong = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t I = 1 + rng() % 50, J = 1 + rng() % 30;
    const auto prob = ht::random_problem(I, J, 1, rng);
    const auto [best, cost] = ht::brute_force_1median(prob);
    const auto sol = solve_1median(prob);
    if (sol.open != std::vector<std::size_t>{best} || sol.cost != cost) ++wrong;
    auto w = prob.weights();
    for (auto& x : w) x *= 10;
    const auto scaled = solve_1median(MedianProblem(w, J, prob.distances(), 1));
    if (scaled.open != sol.open) ++scale_wrong;
  }
  const double secs = seconds_since(t0);
  return {wrong == 0 && scale_wrong == 0 && secs < 5.0,
          "200 instances, " + std::to_string(wrong) + " differ from exhaustive scan, " +
              std::to_string(scale_wrong) + " change under x10 weights, " + std::to_string(secs) + " s"};
}

// ---- 3

Outcome p_median() {
  std::mt19937_64 rng(20240103);
  std::size_t p1_wrong = 0, within = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto prob = ht::random_problem(1 + rng() % 40, 1 + rng() % 30, 1, rng);
    if (!(solve_pmedian_exact(prob) == solve_1median(prob))) ++p1_wrong;
  }
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t J = 3 + rng() % 10;
    const std::size_t p = 1 + rng() % std::min<std::size_t>(3, J);
    const auto prob = ht::random_problem(5 + rng() % 30, J, p, rng, 0.0);
    const double exact = solve_pmedian_exact(prob).cost;
    const double heur = solve_pmedian_interchange(prob, trial).cost;
    if (heur <= 1.05 * exact) ++within;
  }
  return {p1_wrong == 0 && within >= 95,
          "exact p=1 mismatches " + std::to_string(p1_wrong) + "/100, interchange within 5% on " +
              std::to_string(within) + "/100"};
}

// ---- 4 and 5 share one suite of runs

struct SuiteRun {
  RoadGraph g;
  PlanarFrame frame{synth::kDefaultOrigin};
  std::vector<DemandPoint> demand;
  OptimizerConfig cfg;
  OptimizationReport report;
};

SuiteRun make_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const bool lattice = seed % 2 == 0;
  const std::size_t k = 2 + seed % 3;
  double extent = 0.0;
  std::vector<EdgeRecord> edges;
  if (lattice) {
    synth::LatticeSpec spec;
    spec.rows = spec.cols = 10 + rng() % 8;
    extent = spec.spacing_m * static_cast<double>(spec.rows - 1);
    edges = synth::lattice_edges(spec, seed);
  } else {
    synth::RandomPlanarSpec spec;
    spec.nodes = 50 + rng() % 60;
    extent = spec.extent_m;
    edges = synth::random_planar_edges(spec, seed);
  }
  SuiteRun r{load_road_graph(edges, {}), PlanarFrame(synth::kDefaultOrigin), {}, {}, {}};
  const GeoPoint sw = synth::kDefaultOrigin;
  const GeoPoint ne = synth::offset(sw, extent, extent);
  std::uniform_real_distribution<double> coord(0.1 * extent, 0.9 * extent);
  std::vector<synth::GaussianCluster> clusters;
  std::vector<GeoPoint> hubs;
  for (std::size_t j = 0; j < k; ++j) {
    clusters.push_back({synth::offset(sw, coord(rng), coord(rng)), 0.08 * extent, 100 + rng() % 200});
    hubs.push_back(synth::offset(sw, coord(rng), coord(rng)));
  }
  const auto recs = synth::gaussian_deliveries(clusters, sw, ne, 50.0, seed);
  r.demand = build_phase1_demand(r.g, recs).points;
  r.report = run(r.g, r.frame, r.demand, hubs, r.cfg);
  return r;
}

std::vector<SuiteRun>& suite() {
  static std::vector<SuiteRun> runs = [] {
    std::vector<SuiteRun> out;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) out.push_back(make_instance(seed));
    return out;
  }();
  return runs;
}

Outcome monotonicity() {
  std::size_t increases = 0, lattice = 0;
  for (std::size_t k = 0; k < suite().size(); ++k) {
    const auto& it = suite()[k].report.iterations;
    for (std::size_t t = 1; t < it.size(); ++t) {
      if (it[t].objective_m > it[t - 1].objective_m) ++increases;
    }
    if ((k + 1) % 2 == 0) ++lattice;
  }
  return {increases == 0, std::to_string(suite().size()) + " runs (" + std::to_string(lattice) +
                              " lattice), " + std::to_string(increases) + " increases"};
}

// Rebuilds the final cluster's 1-median problem over its candidate grid and
// checks that the reported hub solves it.
bool final_hub_optimal(const SuiteRun& r, std::size_t cluster) {
  const auto& last = r.report.iterations.back();
  ClusterState c{cluster, last.hubs[cluster], {}};
  for (std::size_t i = 0; i < r.report.final_assignment.size(); ++i) {
    if (r.report.final_assignment[i] == cluster) c.members.push_back(i);
  }
  const auto w = unit_weights(r.demand);
  const CentroidUpdate up = update_centroid(r.g, r.frame, c, r.demand, w, r.cfg);
  if (up.node != r.report.final_hubs[cluster].node) return false;

  const auto sites = up.candidates.nodes();
  std::vector<NodeId> targets;
  std::vector<double> weights;
  for (std::size_t i : c.members) {
    targets.push_back(r.demand[i].node);
    weights.push_back(w[i]);
  }
  std::vector<double> d(targets.size() * sites.size());
  for (std::size_t j = 0; j < sites.size(); ++j) {
    const auto from = sssp(r.g, sites[j]);
    for (std::size_t i = 0; i < targets.size(); ++i) d[i * sites.size() + j] = from[targets[i]];
  }
  const MedianProblem prob(weights, sites.size(), d, 1);
  const std::size_t at = static_cast<std::size_t>(
      std::find(sites.begin(), sites.end(), up.node) - sites.begin());
  const MedianSolution sol = evaluate_open_set(prob, {at});
  return verify_solution(prob, sol).ok && sol.cost == solve_1median(prob).cost;
}

Outcome convergence() {
  std::size_t bad_stop = 0, cutoff = 0, not_optimal = 0;
  for (const auto& r : suite()) {
    const auto& rep = r.report;
    if (rep.iterations.empty() || rep.iterations.size() > 10) ++bad_stop;
    if (rep.stop_reason == StopReason::MaxIterations && rep.iterations.size() != 10) ++bad_stop;
    if (rep.stop_reason != StopReason::CutoffMet) continue;
    ++cutoff;
    for (std::size_t j = 0; j < rep.final_hubs.size(); ++j) {
      if (!final_hub_optimal(r, j)) ++not_optimal;
    }
  }
  return {bad_stop == 0 && not_optimal == 0,
          std::to_string(cutoff) + "/" + std::to_string(suite().size()) + " CutoffMet, " +
              std::to_string(bad_stop) + " bad stops, " + std::to_string(not_optimal) +
              " centroids failing verification"};
}

// ---- 6

Outcome lahore_analogue() {
  const auto t0 = Clock::now();
  std::size_t not_worse = 0, better = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed * 7919);
    synth::LatticeSpec spec;  // 20 x 20, 500 m, 10% one-way
    const RoadGraph g = load_road_graph(synth::lattice_edges(spec, seed), {});
    const GeoPoint sw = spec.origin;
    const double extent = spec.spacing_m * 19;
    const GeoPoint ne = synth::offset(sw, extent, extent);
    std::uniform_real_distribution<double> coord(0.2 * extent, 0.8 * extent);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    std::vector<synth::GaussianCluster> clusters;
    std::vector<GeoPoint> hubs;
    for (int j = 0; j < 3; ++j) {
      const double x = coord(rng), y = coord(rng), a = angle(rng);
      clusters.push_back({synth::offset(sw, x, y), 700.0, 667});
      hubs.push_back(synth::offset(sw, x + 1500.0 * std::cos(a), y + 1500.0 * std::sin(a)));
    }
    const auto recs = synth::gaussian_deliveries(clusters, sw, ne, 50.0, seed);
    const auto demand = build_phase1_demand(g, recs).points;
    const auto rep = run(g, PlanarFrame(sw), demand, hubs, {});
    if (rep.final_objective_m() <= rep.baseline_objective_m) ++not_worse;
    if (rep.final_objective_m() < rep.baseline_objective_m) ++better;
  }
  const double secs = seconds_since(t0);
  return {not_worse == 20 && better >= 18 && secs < 60.0,
          "not worse on " + std::to_string(not_worse) + "/20, strictly better on " +
              std::to_string(better) + "/20, " + std::to_string(secs) + " s"};
}

// ---- 7

bool same_points_except_weight(const std::vector<DemandPoint>& a, const std::vector<DemandPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].id != b[i].id || !(a[i].pos == b[i].pos) || a[i].node != b[i].node ||
        a[i].count != b[i].count) {
      return false;
    }
  }
  return true;
}

Outcome blend_endpoints() {
  std::size_t alpha1_bad = 0, alpha0_bad = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    synth::LatticeSpec spec;
    spec.rows = spec.cols = 14;
    const RoadGraph g = load_road_graph(synth::lattice_edges(spec, seed), {});
    const GeoPoint sw = spec.origin;
    const double extent = spec.spacing_m * 13;
    const GeoPoint ne = synth::offset(sw, extent, extent);
    const PlanarFrame frame(sw);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.2 * extent, 0.8 * extent);
    std::vector<synth::GaussianCluster> clusters;
    std::vector<GeoPoint> hubs;
    for (int j = 0; j < 3; ++j) {
      clusters.push_back({synth::offset(sw, coord(rng), coord(rng)), 900.0, 300});
      hubs.push_back(synth::offset(sw, coord(rng), coord(rng)));
    }
    const auto recs = synth::gaussian_deliveries(clusters, sw, ne, 25.0, seed);

    // 1 km cells holding at least one delivery, in (lat, lon) order
    auto cells = synth::population_grid(sw, ne, 1000.0, seed);
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
      return a.center.lat < b.center.lat || (a.center.lat == b.center.lat && a.center.lon < b.center.lon);
    });
    {
      const auto bins = bin_to_cells(frame, recs, cells);
      std::vector<char> used(cells.size(), 0);
      for (const auto& b : bins) {
        if (b) used[*b] = 1;
      }
      std::vector<PopulationCell> kept;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (used[c]) kept.push_back(cells[c]);
      }
      cells = std::move(kept);
    }
    const auto bins = bin_to_cells(frame, recs, cells);
    std::vector<DeliveryRecord> binned;
    for (const auto& b : bins) {
      if (b) binned.push_back({cells[*b].center, std::nullopt});
    }

    const auto p1 = build_phase1_demand(g, binned).points;
    const auto p2 = build_phase2_demand(g, frame, recs, cells, WeightBlend(1.0)).points;
    const auto r1 = run(g, frame, p1, hubs, {});
    const auto r2 = run(g, frame, p2, hubs, {});
    if (!same_points_except_weight(p1, p2) || !(r1 == r2)) ++alpha1_bad;

    // permute which cells the deliveries fall in: counts move, ppp stays
    std::vector<GeoPoint> centers;
    for (const auto& c : cells) centers.push_back(c.center);
    std::vector<std::size_t> perm(cells.size());
    for (std::size_t c = 0; c < perm.size(); ++c) perm[c] = c;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<DeliveryRecord> permuted;
    for (const auto& b : bins) {
      if (b) permuted.push_back({centers[perm[*b]], std::nullopt});
    }
    const auto a0 = build_phase2_demand(g, frame, recs, cells, WeightBlend(0.0)).points;
    const auto b0 = build_phase2_demand(g, frame, permuted, cells, WeightBlend(0.0)).points;
    const auto ra = run(g, frame, a0, hubs, {});
    const auto rb = run(g, frame, b0, hubs, {});
    if (!(ra == rb)) ++alpha0_bad;
  }
  return {alpha1_bad == 0 && alpha0_bad == 0,
          "alpha=1 vs phase 1 differs on " + std::to_string(alpha1_bad) +
              "/5, alpha=0 changes under permuted counts on " + std::to_string(alpha0_bad) + "/5"};
}

// ---- 8

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("hubloc-acceptance-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  auto cli = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    args.insert(args.begin(), "hubloc");
    const int code = cli::run(args, out, err);
    if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
    return code;
  };
  Outcome o;
  if (cli({"synth", "--out-dir", dir.string(), "--seed", "8"}) != 0) {
    o = {false, "synth failed"};
  } else {
    std::vector<std::string> base{"optimize",
                                  "--edges", (dir / "edges.csv").string(),
                                  "--deliveries", (dir / "deliveries.csv").string(),
                                  "--hubs", (dir / "hubs.csv").string(),
                                  "--population", (dir / "population.csv").string(),
                                  "--alpha", "0.5"};
    auto a = base, b = base;
    a.insert(a.end(), {"--out-dir", (dir / "a").string()});
    b.insert(b.end(), {"--out-dir", (dir / "b").string()});
    if (cli(a) != 0 || cli(b) != 0) {
      o = {false, "optimize failed"};
    } else {
      const std::string ra = io::read_file(dir / "a" / "report.json");
      const std::string rb = io::read_file(dir / "b" / "report.json");
      o = {ra == rb, std::to_string(ra.size()) + " bytes, " + (ra == rb ? "identical" : "different")};
    }
  }
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"shortest paths equal Floyd-Warshall", shortest_paths},
      {"1-median equals exhaustive scan", one_median},
      {"p-median exact and interchange cross-check", p_median},
      {"objective non-increasing", monotonicity},
      {"convergence and final centroid optimality", convergence},
      {"20x20 lattice optimized vs baseline", lahore_analogue},
      {"blend endpoints", blend_endpoints},
      {"byte-identical report.json", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
