// Test-only helpers: small graph builders, random instance generators and
// brute-force oracles that do not share code paths with the library.
#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "hubloc/demand.hpp"
#include "hubloc/median_solver.hpp"
#include "hubloc/road_graph.hpp"

namespace hubloc::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SimpleEdge {
  std::size_t from;
  std::size_t to;
  double length;
  bool two_way;
  std::string road_class = "local";
};

/// Node i sits at (74 + 0.001 * (i % 100), 31 + 0.001 * (i / 100)) unless
/// positions are given. Node keys are "k<i>".
inline GeoPoint default_position(std::size_t i) {
  return {74.0 + 0.001 * static_cast<double>(i % 100), 31.0 + 0.001 * static_cast<double>(i / 100)};
}

inline std::vector<EdgeRecord> records_from(const std::vector<SimpleEdge>& edges,
                                            const std::vector<GeoPoint>& positions = {}) {
  std::vector<EdgeRecord> out;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    EdgeRecord r;
    r.edge_id = "e" + std::to_string(k);
    r.from_key = "k" + std::to_string(e.from);
    r.to_key = "k" + std::to_string(e.to);
    r.from_pos = positions.empty() ? default_position(e.from) : positions[e.from];
    r.to_pos = positions.empty() ? default_position(e.to) : positions[e.to];
    r.length_m = e.length;
    r.direction = e.two_way ? "None" : "NB";
    r.road_class = e.road_class;
    r.row = k + 2;
    out.push_back(r);
  }
  return out;
}

/// Dense ids follow first appearance, so they match SimpleEdge indices
/// whenever the edge list introduces nodes in the order 0, 1, 2, ...
inline RoadGraph graph_from(const std::vector<SimpleEdge>& edges,
                            const std::vector<GeoPoint>& positions = {}) {
  return load_road_graph(records_from(edges, positions), {});
}

/// Random directed graph on n nodes with integer lengths in [1, 100] and a
/// mix of one-way and two-way edges. The first n-1 edges form a path
/// 0-1-...-(n-1) so that dense ids match the generator's indices; the path
/// edges themselves are randomly one-way or two-way.
inline std::vector<SimpleEdge> random_edges(std::size_t n, std::size_t extra, std::mt19937_64& rng,
                                            double two_way_p = 0.5) {
  std::uniform_int_distribution<int> len(1, 100);
  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  std::bernoulli_distribution two_way(two_way_p), flip(0.5);
  std::vector<SimpleEdge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // forward orientation keeps first-appearance order 0, 1, 2, ...
    edges.push_back({i, i + 1, static_cast<double>(len(rng)), two_way(rng)});
  }
  for (std::size_t k = 0; k < extra; ++k) {
    std::size_t a = node(rng), b = node(rng);
    edges.push_back({a, b, static_cast<double>(len(rng)), two_way(rng)});
  }
  return edges;
}

/// Floyd-Warshall over the arcs implied by `edges` (n nodes).
inline std::vector<std::vector<double>> floyd_warshall(std::size_t n,
                                                       const std::vector<SimpleEdge>& edges) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& e : edges) {
    d[e.from][e.to] = std::min(d[e.from][e.to], e.length);
    if (e.two_way) d[e.to][e.from] = std::min(d[e.to][e.from], e.length);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == kInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  return d;
}

/// Random p-median instance with integer weights and distances, so that
/// plain summation is exact.
inline MedianProblem random_problem(std::size_t demand, std::size_t candidates, std::size_t p,
                                    std::mt19937_64& rng, double unreachable_p = 0.05) {
  std::uniform_int_distribution<int> w(0, 20), d(0, 1000);
  std::bernoulli_distribution unreachable(unreachable_p);
  std::vector<double> weights(demand);
  for (auto& x : weights) x = w(rng);
  weights[0] = std::max(weights[0], 1.0);
  std::vector<double> dist(demand * candidates);
  for (auto& x : dist) x = unreachable(rng) ? kInf : d(rng);
  // keep at least one candidate that reaches everyone
  const std::size_t keep = std::uniform_int_distribution<std::size_t>(0, candidates - 1)(rng);
  for (std::size_t i = 0; i < demand; ++i) {
    if (dist[i * candidates + keep] == kInf) dist[i * candidates + keep] = d(rng);
  }
  return MedianProblem(std::move(weights), candidates, std::move(dist), p);
}

/// Exhaustive scan for p = 1 with naive summation: (index, cost), smallest
/// index on ties; index = candidates when nothing is feasible.
inline std::pair<std::size_t, double> brute_force_1median(const MedianProblem& prob) {
  std::size_t best = prob.candidate_count();
  double best_cost = kInf;
  for (std::size_t j = 0; j < prob.candidate_count(); ++j) {
    double cost = 0.0;
    for (std::size_t i = 0; i < prob.demand_count(); ++i) {
      if (prob.weight(i) == 0.0) continue;
      cost += prob.weight(i) * prob.distance(i, j);
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = j;
    }
  }
  return {best, best_cost};
}

/// Cost of every p-subset by naive summation; returns the minimum.
inline double brute_force_pmedian_cost(const MedianProblem& prob) {
  const std::size_t n = prob.candidate_count(), p = prob.p();
  double best = kInf;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(p), true);
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < prob.demand_count(); ++i) {
      double nearest = kInf;
      for (std::size_t j = 0; j < n; ++j) {
        if (mask[j]) nearest = std::min(nearest, prob.distance(i, j));
      }
      if (prob.weight(i) > 0.0) cost += prob.weight(i) * nearest;
    }
    best = std::min(best, cost);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

inline DemandPoint demand_at(std::size_t id, const RoadGraph& g, NodeId node, long long count,
                             double weight) {
  return DemandPoint{id, g.node(node).pos, node, count, weight};
}

}  // namespace hubloc::testing
