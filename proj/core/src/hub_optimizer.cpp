#include "hubloc/hub_optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "hubloc/error.hpp"
#include "hubloc/exact_sum.hpp"

namespace hubloc {

void OptimizerConfig::validate() const {
  if (max_iter < 1) throw InputError("max_iter must be at least 1");
  if (!(cutoff_m >= 0.0) || !std::isfinite(cutoff_m)) throw InputError("cutoff_m must be >= 0");
  if (!(grid_res_m > 0.0) || !std::isfinite(grid_res_m)) throw InputError("grid_res_m must be > 0");
  if (!(max_snap_m >= 0.0)) throw InputError("max_snap_m must be >= 0");
}

std::string_view to_string(StopReason r) {
  return r == StopReason::CutoffMet ? "CutoffMet" : "MaxIterations";
}

std::vector<NodeId> snap_hubs(const RoadGraph& g, std::span<const GeoPoint> hub_points,
                              double max_snap_m) {
  std::vector<NodeId> hubs;
  hubs.reserve(hub_points.size());
  for (std::size_t k = 0; k < hub_points.size(); ++k) {
    if (!is_valid(hub_points[k])) throw InputError("hub " + std::to_string(k) + " has invalid coordinates");
    const auto [node, d] = nearest_node(g, hub_points[k]);
    if (d > max_snap_m) throw SnapTooFar(d, "hub " + std::to_string(k));
    hubs.push_back(node);
  }
  return hubs;
}

Assignment assign_to_nearest_hub(const RoadGraph& g, std::span<const DemandPoint> demand,
                                 std::span<const NodeId> hubs, SnapPolicy policy) {
  if (hubs.empty()) throw InputError("at least one hub is required");
  if (demand.empty()) throw InputError("demand is empty");
  std::vector<NodeId> targets;
  targets.reserve(demand.size());
  for (const auto& p : demand) targets.push_back(p.node);
  const DistanceMatrix od = od_matrix(g, hubs, targets);

  Assignment out;
  out.clusters.resize(hubs.size());
  for (std::size_t j = 0; j < hubs.size(); ++j) out.clusters[j] = {j, hubs[j], {}};
  out.cluster_of.assign(demand.size(), kUnassigned);
  out.distance_m.assign(demand.size(), kUnreachable);
  for (std::size_t i = 0; i < demand.size(); ++i) {
    std::size_t best = 0;
    double best_d = od.at(0, i);
    for (std::size_t j = 1; j < hubs.size(); ++j) {
      if (od.at(j, i) < best_d) {
        best_d = od.at(j, i);
        best = j;
      }
    }
    if (std::isinf(best_d)) {
      if (policy == SnapPolicy::Strict) {
        throw Error("demand point " + std::to_string(i) + " cannot be reached from any hub");
      }
      out.dropped.push_back(i);
      continue;
    }
    out.cluster_of[i] = best;
    out.distance_m[i] = best_d;
    out.clusters[best].members.push_back(i);
  }
  if (out.dropped.size() == demand.size()) throw Error("no demand point can be reached from any hub");
  return out;
}

double objective(std::span<const ClusterState> clusters, std::span<const double> distance_m,
                 std::span<const double> weights) {
  ExactSum total;
  ExactSum weight;
  for (const auto& c : clusters) {
    for (std::size_t i : c.members) {
      const double w = weights[i];
      if (w == 0.0) continue;
      if (!std::isfinite(distance_m[i])) {
        throw Error("demand point " + std::to_string(i) + " has no finite distance to its hub");
      }
      total.add(w * distance_m[i]);
      weight.add(w);
    }
  }
  const double w = weight.value();
  if (!(w > 0.0)) throw Error("total demand weight is zero");
  return total.value() / w;
}

std::vector<double> unit_weights(std::span<const DemandPoint> demand) {
  double top = 0.0;
  for (const auto& p : demand) {
    if (!std::isfinite(p.weight) || p.weight < 0.0) throw InputError("demand weights must be finite and >= 0");
    top = std::max(top, p.weight);
  }
  if (!(top > 0.0)) throw InputError("total demand weight is zero");
  std::vector<double> out;
  out.reserve(demand.size());
  for (const auto& p : demand) out.push_back(p.weight / top);
  return out;
}

CentroidUpdate update_centroid(const RoadGraph& g, const PlanarFrame& frame,
                               const ClusterState& cluster, std::span<const DemandPoint> demand,
                               std::span<const double> weights, const OptimizerConfig& cfg) {
  if (cluster.members.empty()) throw Error("cannot update the centroid of an empty cluster");
  std::vector<DemandPoint> points;
  std::vector<NodeId> member_nodes;
  std::vector<double> member_weights;
  for (std::size_t i : cluster.members) {
    points.push_back(demand[i]);
    member_nodes.push_back(demand[i].node);
    member_weights.push_back(weights[i]);
  }

  CentroidUpdate out;
  out.candidates = generate_candidates(g, frame, points, cfg.grid_res_m, cluster.centroid_node,
                                       cfg.max_snap_m);
  const std::vector<NodeId> sites = out.candidates.nodes();
  const auto incumbent = static_cast<std::size_t>(
      std::find(sites.begin(), sites.end(), cluster.centroid_node) - sites.begin());

  if (std::none_of(member_weights.begin(), member_weights.end(), [](double w) { return w > 0.0; })) {
    out.node = cluster.centroid_node;
    out.solution = {{incumbent}, std::vector<std::size_t>(points.size(), incumbent), 0.0};
    return out;
  }

  const DistanceMatrix od = od_matrix(g, sites, member_nodes);
  std::vector<double> d(points.size() * sites.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < sites.size(); ++j) d[i * sites.size() + j] = od.at(j, i);
  }
  const MedianProblem prob(std::move(member_weights), sites.size(), std::move(d), 1);
  out.solution = solve_1median(prob);
  if (out.solution.open.front() != incumbent) {
    MedianSolution stay = evaluate_open_set(prob, {incumbent});
    if (stay.cost == out.solution.cost) out.solution = std::move(stay);
  }
  out.node = sites[out.solution.open.front()];
  return out;
}

double centroid_displacement(NodeId old_node, NodeId new_node, const RoadGraph& g) {
  if (old_node == new_node) {
    g.check_node(old_node);
    return 0.0;
  }
  return great_circle_m(g.node(old_node).pos, g.node(new_node).pos);
}

namespace {

// Reseeds each empty cluster at the demand point farthest from its hub and
// reassigns, until every cluster has members.
Assignment assign_with_repair(const RoadGraph& g, std::span<const DemandPoint> demand,
                              std::vector<NodeId>& hubs, SnapPolicy policy, std::size_t& repaired) {
  Assignment a = assign_to_nearest_hub(g, demand, hubs, policy);
  for (std::size_t round = 0; round <= hubs.size(); ++round) {
    const auto empty = std::find_if(a.clusters.begin(), a.clusters.end(),
                                    [](const ClusterState& c) { return c.members.empty(); });
    if (empty == a.clusters.end()) return a;
    std::size_t farthest = kUnassigned;
    double far_d = 0.0;
    for (std::size_t i = 0; i < demand.size(); ++i) {
      if (a.cluster_of[i] != kUnassigned && a.distance_m[i] > far_d) {
        far_d = a.distance_m[i];
        farthest = i;
      }
    }
    if (farthest == kUnassigned) {
      throw Error("cluster " + std::to_string(empty->index) +
                  " is empty and every demand point already sits on a hub");
    }
    hubs[empty->index] = demand[farthest].node;
    ++repaired;
    a = assign_to_nearest_hub(g, demand, hubs, policy);
  }
  throw Error("empty-cluster repair did not converge");
}

}  // namespace

OptimizationReport run(const RoadGraph& g, const PlanarFrame& frame,
                       std::span<const DemandPoint> demand,
                       std::span<const GeoPoint> initial_hub_points, const OptimizerConfig& cfg) {
  cfg.validate();
  if (initial_hub_points.empty()) throw InputError("at least one initial hub is required");
  if (initial_hub_points.size() > demand.size()) {
    throw InputError("more hubs (" + std::to_string(initial_hub_points.size()) + ") than demand points (" +
                     std::to_string(demand.size()) + ")");
  }
  for (const auto& p : demand) g.check_node(p.node);
  std::vector<NodeId> hubs = snap_hubs(g, initial_hub_points, cfg.max_snap_m);
  const std::vector<double> weights = unit_weights(demand);

  OptimizationReport report;
  {
    const Assignment base = assign_to_nearest_hub(g, demand, hubs, cfg.snap_policy);
    report.baseline_objective_m = objective(base.clusters, base.distance_m, weights);
  }

  Assignment current;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    current = assign_with_repair(g, demand, hubs, cfg.snap_policy, report.repaired_clusters);

    IterationStats stats;
    stats.iteration = it;
    stats.objective_m = objective(current.clusters, current.distance_m, weights);
    stats.hubs = hubs;
    stats.assignment = current.cluster_of;

    double max_move = 0.0;
    for (const auto& cluster : current.clusters) {
      const CentroidUpdate up = update_centroid(g, frame, cluster, demand, weights, cfg);
      const double move = centroid_displacement(cluster.centroid_node, up.node, g);
      max_move = std::max(max_move, move);
      stats.centroid_moves_m.push_back(move);
      stats.candidates_per_cluster.push_back(up.candidates.sites.size());
      stats.candidate_nodes.push_back(up.candidates.nodes());
      stats.candidates_evaluated += up.candidates.sites.size();
      hubs[cluster.index] = up.node;
    }
    report.iterations.push_back(std::move(stats));
    if (max_move < cfg.cutoff_m) {
      report.stop_reason = StopReason::CutoffMet;
      break;
    }
  }

  for (std::size_t j = 0; j < hubs.size(); ++j) {
    report.final_hubs.push_back({j, hubs[j], g.node(hubs[j]).pos});
  }
  report.final_assignment = current.cluster_of;
  report.dropped_demand = current.dropped;
  return report;
}

double baseline_report(const RoadGraph& g, std::span<const DemandPoint> demand,
                       std::span<const GeoPoint> existing_hub_points, const OptimizerConfig& cfg) {
  const std::vector<NodeId> hubs = snap_hubs(g, existing_hub_points, cfg.max_snap_m);
  const std::vector<double> weights = unit_weights(demand);
  const Assignment a = assign_to_nearest_hub(g, demand, hubs, cfg.snap_policy);
  return objective(a.clusters, a.distance_m, weights);
}

}  // namespace hubloc
