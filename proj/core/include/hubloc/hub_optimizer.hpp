#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hubloc/candidate_grid.hpp"
#include "hubloc/demand.hpp"
#include "hubloc/median_solver.hpp"
#include "hubloc/planar_frame.hpp"
#include "hubloc/road_graph.hpp"

namespace hubloc {

struct OptimizerConfig {
  int max_iter = 10;
  double cutoff_m = 10.0;
  double grid_res_m = kDefaultGridResM;
  double max_snap_m = kDefaultMaxSnapM;
  SnapPolicy snap_policy = SnapPolicy::Strict;

  void validate() const;
};

struct ClusterState {
  std::size_t index = 0;
  NodeId centroid_node = 0;
  std::vector<std::size_t> members;  // ascending demand indices

  friend bool operator==(const ClusterState&, const ClusterState&) = default;
};

inline constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

/// Clusters plus the road distance from each demand point to its hub.
struct Assignment {
  std::vector<ClusterState> clusters;
  std::vector<std::size_t> cluster_of;  // kUnassigned for dropped points
  std::vector<double> distance_m;       // hub -> demand, kUnreachable for dropped
  std::vector<std::size_t> dropped;     // lenient mode: unreachable from every hub
};

/// Joins each demand point to the hub with the smallest hub -> demand road
/// distance, lowest cluster index on ties.
Assignment assign_to_nearest_hub(const RoadGraph& g, std::span<const DemandPoint> demand,
                                 std::span<const NodeId> hubs,
                                 SnapPolicy policy = SnapPolicy::Strict);

/// Weighted mean hub -> demand distance over assigned points, using the given
/// per-demand weights (counts for phase 1, h_i otherwise).
double objective(std::span<const ClusterState> clusters, std::span<const double> distance_m,
                 std::span<const double> weights);

/// Weights used inside the optimizer: each demand weight divided by the
/// largest one. Makes results independent of the unit of the weights.
std::vector<double> unit_weights(std::span<const DemandPoint> demand);

struct CentroidUpdate {
  NodeId node = 0;
  CandidateSet candidates;
  MedianSolution solution;  // indices refer to candidates.sites
};

/// 1-median over the cluster's candidate grid (incumbent included). When the
/// best candidate only ties with the incumbent, the incumbent is kept.
CentroidUpdate update_centroid(const RoadGraph& g, const PlanarFrame& frame,
                               const ClusterState& cluster, std::span<const DemandPoint> demand,
                               std::span<const double> weights, const OptimizerConfig& cfg);

/// Great-circle distance between two nodes.
double centroid_displacement(NodeId old_node, NodeId new_node, const RoadGraph& g);

enum class StopReason { CutoffMet, MaxIterations };
std::string_view to_string(StopReason r);

struct IterationStats {
  int iteration = 0;
  double objective_m = 0.0;
  std::vector<NodeId> hubs;                      // centroids used for this assignment
  std::vector<std::size_t> assignment;           // demand -> cluster
  std::vector<double> centroid_moves_m;          // per cluster, after the update
  std::vector<std::size_t> candidates_per_cluster;
  std::vector<std::vector<NodeId>> candidate_nodes;
  std::size_t candidates_evaluated = 0;

  friend bool operator==(const IterationStats&, const IterationStats&) = default;
};

struct FinalHub {
  std::size_t cluster = 0;
  NodeId node = 0;
  GeoPoint pos;

  friend bool operator==(const FinalHub&, const FinalHub&) = default;
};

struct OptimizationReport {
  double baseline_objective_m = 0.0;
  std::vector<IterationStats> iterations;
  std::vector<FinalHub> final_hubs;
  std::vector<std::size_t> final_assignment;  // demand -> cluster
  std::vector<std::size_t> dropped_demand;
  std::size_t repaired_clusters = 0;
  StopReason stop_reason = StopReason::MaxIterations;

  double final_objective_m() const { return iterations.back().objective_m; }

  friend bool operator==(const OptimizationReport&, const OptimizationReport&) = default;
};

/// Network K-Means: assign, record the objective, move every centroid to the
/// 1-median of its cluster, repeat until the largest move is below cutoff_m
/// or max_iter iterations have run.
OptimizationReport run(const RoadGraph& g, const PlanarFrame& frame,
                       std::span<const DemandPoint> demand,
                       std::span<const GeoPoint> initial_hub_points, const OptimizerConfig& cfg);

/// Objective of assigning demand to the given hubs, without optimizing.
double baseline_report(const RoadGraph& g, std::span<const DemandPoint> demand,
                       std::span<const GeoPoint> existing_hub_points, const OptimizerConfig& cfg);

/// Snaps hub points strictly; hubs must always land on the network.
std::vector<NodeId> snap_hubs(const RoadGraph& g, std::span<const GeoPoint> hub_points,
                              double max_snap_m);

}  // namespace hubloc
