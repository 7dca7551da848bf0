#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hubloc/error.hpp"
#include "hubloc/hub_optimizer.hpp"
#include "hubloc/synthetic.hpp"
#include "support/test_support.hpp"

namespace hubloc {
namespace {

using testing::demand_at;
using testing::SimpleEdge;

// 0 - 1 - 2 - 3 - 4 along a parallel, 100 m apart, two-way.
RoadGraph line5() {
  std::vector<GeoPoint> pos;
  for (int i = 0; i < 5; ++i) pos.push_back(synth::offset({74.0, 31.0}, 100.0 * i, 0.0));
  return testing::graph_from(
      {{0, 1, 100, true}, {1, 2, 100, true}, {2, 3, 100, true}, {3, 4, 100, true}}, pos);
}

std::vector<DemandPoint> unit_demand(const RoadGraph& g, std::vector<NodeId> nodes) {
  std::vector<DemandPoint> out;
  for (NodeId v : nodes) out.push_back(demand_at(out.size(), g, v, 1, 1.0));
  return out;
}

struct LatticeCase {
  RoadGraph g;
  std::vector<DemandPoint> demand;
  std::vector<GeoPoint> hubs;
};

LatticeCase lattice_case(std::uint64_t seed, std::size_t k) {
  synth::LatticeSpec spec;
  spec.rows = spec.cols = 12;
  LatticeCase c{load_road_graph(synth::lattice_edges(spec, seed), {}), {}, {}};
  const GeoPoint sw = spec.origin;
  const GeoPoint ne = synth::offset(sw, 5500, 5500);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(800.0, 4700.0);
  std::vector<synth::GaussianCluster> clusters;
  for (std::size_t j = 0; j < k; ++j) {
    clusters.push_back({synth::offset(sw, coord(rng), coord(rng)), 600.0, 150});
    c.hubs.push_back(synth::offset(sw, coord(rng), coord(rng)));
  }
  const auto recs = synth::gaussian_deliveries(clusters, sw, ne, 100.0, seed);
  c.demand = build_phase1_demand(c.g, recs).points;
  return c;
}

TEST(OptimizerConfig, Defaults) {
  const OptimizerConfig cfg;
  EXPECT_EQ(cfg.max_iter, 10);
  EXPECT_EQ(cfg.cutoff_m, 10.0);
  EXPECT_EQ(cfg.grid_res_m, 1000.0);
  EXPECT_NO_THROW(cfg.validate());
  OptimizerConfig bad;
  bad.grid_res_m = 0.0;
  EXPECT_THROW(bad.validate(), InputError);
}

TEST(Assignment, SingleHubTakesEverything) {
  const auto g = line5();
  const auto demand = unit_demand(g, {0, 2, 4});
  const std::vector<NodeId> hubs{1};
  const auto a = assign_to_nearest_hub(g, demand, hubs);
  ASSERT_EQ(a.clusters.size(), 1u);
  EXPECT_EQ(a.clusters[0].members, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(a.distance_m, (std::vector<double>{100, 100, 300}));
  EXPECT_TRUE(a.dropped.empty());
}

TEST(Assignment, DemandOnHubAndTies) {
  const auto g = line5();
  const auto demand = unit_demand(g, {0, 1, 2, 4});
  const std::vector<NodeId> hubs{0, 2};
  const auto a = assign_to_nearest_hub(g, demand, hubs);
  EXPECT_EQ(a.cluster_of, (std::vector<std::size_t>{0, 0, 1, 1}));
  EXPECT_EQ(a.distance_m[0], 0.0);
  EXPECT_EQ(a.distance_m[2], 0.0);
  EXPECT_EQ(a.distance_m[1], 100.0);
}

TEST(Assignment, HubToDemandDirection) {
  // one-way 0 -> 1 -> 2 chain plus a long way back 2 -> 0
  const auto g = testing::graph_from({{0, 1, 10, false}, {1, 2, 10, false}, {2, 0, 1000, false}});
  const auto demand = unit_demand(g, {0, 2});
  const std::vector<NodeId> hubs{1};
  const auto a = assign_to_nearest_hub(g, demand, hubs);
  EXPECT_EQ(a.distance_m, (std::vector<double>{1010, 10}));
}

TEST(Assignment, UnreachableStrictAndLenient) {
  const auto g = testing::graph_from({{0, 1, 10, false}, {1, 2, 10, true}});
  const auto demand = unit_demand(g, {0, 2});
  const std::vector<NodeId> hubs{1};
  EXPECT_THROW(assign_to_nearest_hub(g, demand, hubs, SnapPolicy::Strict), Error);
  const auto a = assign_to_nearest_hub(g, demand, hubs, SnapPolicy::Lenient);
  EXPECT_EQ(a.dropped, std::vector<std::size_t>{0});
  EXPECT_EQ(a.cluster_of[0], kUnassigned);
  EXPECT_EQ(a.clusters[0].members, std::vector<std::size_t>{1});
}

TEST(Objective, WeightedMean) {
  const std::vector<ClusterState> clusters{{0, 0, {0}}, {1, 0, {1}}};
  const std::vector<double> d{100, 300};
  EXPECT_EQ(objective(clusters, d, std::vector<double>{3, 1}), 150.0);
  EXPECT_EQ(objective(clusters, d, std::vector<double>{1, 1}), 200.0);
  EXPECT_EQ(objective(clusters, d, std::vector<double>{2, 0}), 100.0);
  EXPECT_THROW(objective(clusters, d, std::vector<double>{0, 0}), Error);
}

TEST(Objective, ScaleInvariantUnderUnitWeights) {
  const auto g = line5();
  auto demand = unit_demand(g, {0, 3, 4});
  demand[0].weight = 3;
  demand[1].weight = 6;
  demand[2].weight = 9;
  auto scaled = demand;
  for (auto& p : scaled) p.weight *= 7;
  EXPECT_EQ(unit_weights(demand), unit_weights(scaled));
  EXPECT_EQ(unit_weights(demand).back(), 1.0);
  demand[2].weight = -1;
  EXPECT_THROW(unit_weights(demand), InputError);
}

TEST(UpdateCentroid, SinglePointStaysPut) {
  const auto g = line5();
  const auto demand = unit_demand(g, {3});
  const PlanarFrame f({74.0, 31.0});
  const auto up = update_centroid(g, f, {0, 3, {0}}, demand, std::vector<double>{1}, {});
  EXPECT_EQ(up.node, 3u);
  EXPECT_EQ(up.solution.cost, 0.0);
}

TEST(UpdateCentroid, MovesToMedianOfLine) {
  const auto g = line5();
  const auto demand = unit_demand(g, {0, 1, 2, 3, 4});
  const PlanarFrame f({74.0, 31.0});
  OptimizerConfig cfg;
  cfg.grid_res_m = 80.0;
  const auto up = update_centroid(g, f, {0, 0, {0, 1, 2, 3, 4}}, demand,
                                  std::vector<double>(5, 1.0), cfg);
  EXPECT_EQ(up.node, 2u);
  EXPECT_EQ(up.solution.cost, 600.0);
}

TEST(UpdateCentroid, KeepsIncumbentOnTie) {
  const auto g = line5();
  const auto demand = unit_demand(g, {1, 2});
  const PlanarFrame f({74.0, 31.0});
  OptimizerConfig cfg;
  cfg.grid_res_m = 80.0;
  // nodes 1 and 2 both cost 100; a smaller-index winner must not displace 2
  const auto up = update_centroid(g, f, {0, 2, {0, 1}}, demand, std::vector<double>{1, 1}, cfg);
  EXPECT_EQ(up.node, 2u);
}

TEST(UpdateCentroid, MatchesShortestPathOracle) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 25;
    const auto edges = testing::random_edges(n, 30, rng, 1.0);
    const auto g = testing::graph_from(edges);
    const auto fw = testing::floyd_warshall(n, edges);
    std::vector<DemandPoint> demand;
    std::vector<double> w;
    ClusterState cluster{0, static_cast<NodeId>(rng() % n), {}};
    for (std::size_t i = 0; i < 10; ++i) {
      demand.push_back(demand_at(i, g, static_cast<NodeId>(rng() % n), 1, 1.0));
      w.push_back(static_cast<double>(rng() % 6));
      cluster.members.push_back(i);
    }
    w[0] = 1.0;
    const PlanarFrame f = PlanarFrame::centered_on(std::vector<GeoPoint>{g.node(0).pos});
    OptimizerConfig cfg;
    cfg.grid_res_m = 250.0;
    const auto up = update_centroid(g, f, cluster, demand, w, cfg);

    auto cost_at = [&](NodeId c) {
      double s = 0.0;
      for (std::size_t i = 0; i < demand.size(); ++i) s += w[i] * fw[c][demand[i].node];
      return s;
    };
    double best = testing::kInf;
    for (NodeId c : up.candidates.nodes()) best = std::min(best, cost_at(c));
    EXPECT_EQ(up.solution.cost, best);
    EXPECT_EQ(cost_at(up.node), best);
    EXPECT_LE(best, cost_at(cluster.centroid_node));
  }
}

TEST(UpdateCentroid, EmptyClusterThrows) {
  const auto g = line5();
  const auto demand = unit_demand(g, {1});
  EXPECT_THROW(update_centroid(g, PlanarFrame({74, 31}), {0, 0, {}}, demand,
                               std::vector<double>{1}, {}),
               Error);
}

TEST(CentroidDisplacement, GreatCircle) {
  std::vector<GeoPoint> pos{{74.0, 31.0}, {74.0, 32.0}};
  const auto g = testing::graph_from({{0, 1, 1, true}}, pos);
  EXPECT_NEAR(centroid_displacement(0, 1, g), 111194.93, 0.01);
  EXPECT_EQ(centroid_displacement(1, 1, g), 0.0);
}

TEST(Run, AlreadyOptimalStopsAfterOneIteration) {
  const auto g = line5();
  const auto demand = unit_demand(g, {1, 2, 3});
  const std::vector<GeoPoint> hubs{g.node(2).pos};
  OptimizerConfig cfg;
  cfg.grid_res_m = 100.0;
  const auto r = run(g, PlanarFrame({74, 31}), demand, hubs, cfg);
  ASSERT_EQ(r.iterations.size(), 1u);
  EXPECT_EQ(r.stop_reason, StopReason::CutoffMet);
  EXPECT_EQ(r.iterations[0].centroid_moves_m, std::vector<double>{0.0});
  EXPECT_EQ(r.final_hubs[0].node, 2u);
  EXPECT_EQ(r.baseline_objective_m, r.final_objective_m());
}

TEST(Run, MaxIterationsHonoured) {
  const auto g = line5();
  const auto demand = unit_demand(g, {3, 4});
  const std::vector<GeoPoint> hubs{g.node(0).pos};
  OptimizerConfig cfg;
  cfg.grid_res_m = 80.0;
  cfg.max_iter = 1;
  const auto r = run(g, PlanarFrame({74, 31}), demand, hubs, cfg);
  ASSERT_EQ(r.iterations.size(), 1u);
  EXPECT_EQ(r.stop_reason, StopReason::MaxIterations);
  EXPECT_EQ(r.iterations[0].objective_m, 350.0);
  EXPECT_EQ(r.final_hubs[0].node, 3u);
}

TEST(Run, LatticeInvariants) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto c = lattice_case(seed, 2 + seed % 3);
    const auto frame = PlanarFrame(synth::kDefaultOrigin);
    OptimizerConfig cfg;
    const auto r = run(c.g, frame, c.demand, c.hubs, cfg);
    ASSERT_FALSE(r.iterations.empty());
    ASSERT_LE(r.iterations.size(), static_cast<std::size_t>(cfg.max_iter));
    EXPECT_LE(r.iterations.front().objective_m, r.baseline_objective_m);
    for (std::size_t t = 1; t < r.iterations.size(); ++t) {
      EXPECT_LE(r.iterations[t].objective_m, r.iterations[t - 1].objective_m);
    }
    EXPECT_EQ(r.final_hubs.size(), c.hubs.size());
    EXPECT_EQ(r.final_assignment.size(), c.demand.size());
    if (r.stop_reason == StopReason::CutoffMet) {
      // final hubs are fixed points of the update
      const auto a = assign_to_nearest_hub(c.g, c.demand, r.iterations.back().hubs);
      const auto w = unit_weights(c.demand);
      for (const auto& cl : a.clusters) {
        const auto up = update_centroid(c.g, frame, cl, c.demand, w, cfg);
        EXPECT_EQ(up.node, r.final_hubs[cl.index].node);
      }
      std::vector<GeoPoint> final_pos;
      for (const auto& h : r.final_hubs) final_pos.push_back(h.pos);
      EXPECT_EQ(baseline_report(c.g, c.demand, final_pos, cfg), r.final_objective_m());
    }
  }
}

TEST(Run, Deterministic) {
  const auto c = lattice_case(9, 3);
  const auto frame = PlanarFrame(synth::kDefaultOrigin);
  EXPECT_EQ(run(c.g, frame, c.demand, c.hubs, {}), run(c.g, frame, c.demand, c.hubs, {}));
}

TEST(Run, EmptyClusterIsReseeded) {
  const auto g = line5();
  const auto demand = unit_demand(g, {0, 1, 4});
  // both hubs snap to node 0, so cluster 1 starts empty
  const std::vector<GeoPoint> hubs{g.node(0).pos, g.node(0).pos};
  OptimizerConfig cfg;
  cfg.grid_res_m = 100.0;
  const auto r = run(g, PlanarFrame({74, 31}), demand, hubs, cfg);
  EXPECT_GE(r.repaired_clusters, 1u);
  EXPECT_EQ(r.iterations.front().hubs[1], 4u);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_NE(std::find(r.final_assignment.begin(), r.final_assignment.end(), j),
              r.final_assignment.end());
  }
}

TEST(Run, RejectsBadInput) {
  const auto g = line5();
  const auto demand = unit_demand(g, {1});
  const std::vector<GeoPoint> two{g.node(0).pos, g.node(4).pos};
  EXPECT_THROW(run(g, PlanarFrame({74, 31}), demand, two, {}), InputError);
  EXPECT_THROW(run(g, PlanarFrame({74, 31}), demand, std::vector<GeoPoint>{}, {}), InputError);
  OptimizerConfig bad;
  bad.max_iter = 0;
  EXPECT_THROW(run(g, PlanarFrame({74, 31}), demand, std::vector<GeoPoint>{g.node(0).pos}, bad),
               InputError);
  EXPECT_THROW(run(g, PlanarFrame({74, 31}), demand, std::vector<GeoPoint>{{80.0, 31.0}}, {}),
               SnapTooFar);
}

TEST(Baseline, HandComputed) {
  const auto g = line5();
  auto demand = unit_demand(g, {1, 2});
  const std::vector<GeoPoint> hubs{g.node(0).pos};
  EXPECT_EQ(baseline_report(g, demand, hubs, {}), 150.0);
  demand[1].weight = 3;
  EXPECT_EQ(baseline_report(g, demand, hubs, {}), 175.0);
}

}  // namespace
}  // namespace hubloc
