#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hubloc/geo.hpp"

namespace hubloc {

using NodeId = std::uint32_t;

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultMaxSnapM = 2000.0;

enum class RoadClass { Primary, Secondary, Local, Motorway, Metro, Highway };
enum class Directionality { OneWayForward, TwoWay };
enum class DirectionTag { NB, SB, EB, WB };

std::optional<RoadClass> parse_road_class(std::string_view token);
std::string_view to_string(RoadClass c);

/// Cardinal tags all mean "traversable only from -> to"; "None" is two-way.
/// Returns nullopt for an unrecognized token; an engaged optional holding
/// nullopt means "None".
std::optional<std::optional<DirectionTag>> parse_direction(std::string_view token);

/// One row of an edge list as read from disk, before validation.
struct EdgeRecord {
  std::string edge_id;
  std::string from_key;
  std::string to_key;
  GeoPoint from_pos;
  GeoPoint to_pos;
  std::optional<double> length_m;
  std::string direction;   // NB | SB | EB | WB | None
  std::string road_class;  // primary | secondary | local | motorway | metro | highway
  std::size_t row = 0;     // source row for diagnostics
};

struct RoadNode {
  NodeId id = 0;
  GeoPoint pos;
  std::string key;  // identifier from the source data
};

struct RoadEdge {
  std::string id;
  NodeId from = 0;
  NodeId to = 0;
  double length_m = 0.0;
  Directionality directionality = Directionality::TwoWay;
  RoadClass road_class = RoadClass::Local;
  std::optional<DirectionTag> direction_tag;
};

struct Arc {
  NodeId target = 0;
  double length_m = 0.0;
};

/// Directed road network. Immutable after construction; safe for concurrent
/// reads.
class RoadGraph {
 public:
  RoadGraph() = default;
  RoadGraph(std::vector<RoadNode> nodes, std::vector<RoadEdge> edges);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t arc_count() const noexcept { return targets_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  const RoadNode& node(NodeId id) const;
  std::span<const RoadNode> nodes() const noexcept { return nodes_; }
  std::span<const RoadEdge> edges() const noexcept { return edges_; }

  /// Outgoing arcs of `id` as parallel spans of targets and lengths.
  std::span<const NodeId> out_targets(NodeId id) const;
  std::span<const double> out_lengths(NodeId id) const;

  void check_node(NodeId id) const;

 private:
  std::vector<RoadNode> nodes_;
  std::vector<RoadEdge> edges_;
  // CSR adjacency
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<double> lengths_;
};

/// Validates records, drops excluded classes, applies direction semantics and
/// assigns dense node ids in order of first appearance among kept edges.
/// Throws InputError on duplicate edge ids, non-positive lengths, unknown
/// direction or class tokens, or one node key seen at two positions.
RoadGraph load_road_graph(std::span<const EdgeRecord> records,
                          const std::set<RoadClass>& excluded_classes);

/// Nearest node by great-circle distance, smallest id on ties.
/// Throws SnapTooFar when that node is farther than `max_snap_m`.
NodeId snap_to_node(const RoadGraph& g, const GeoPoint& p,
                    double max_snap_m = kDefaultMaxSnapM);

/// Nearest node and its distance, without a radius check.
std::pair<NodeId, double> nearest_node(const RoadGraph& g, const GeoPoint& p);

/// Dijkstra from `source`; unreachable nodes hold kUnreachable.
std::vector<double> sssp(const RoadGraph& g, NodeId source);

/// Dense row-major origin x destination distance table.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::vector<NodeId> origins, std::vector<NodeId> destinations);

  std::span<const NodeId> origins() const noexcept { return origins_; }
  std::span<const NodeId> destinations() const noexcept { return destinations_; }
  std::size_t rows() const noexcept { return origins_.size(); }
  std::size_t cols() const noexcept { return destinations_.size(); }

  double at(std::size_t row, std::size_t col) const { return d_[row * cols() + col]; }
  double& at(std::size_t row, std::size_t col) { return d_[row * cols() + col]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(d_).subspan(r * cols(), cols());
  }

 private:
  std::vector<NodeId> origins_;
  std::vector<NodeId> destinations_;
  std::vector<double> d_;
};

/// One sssp per origin. Rows are computed on up to `threads` workers
/// (0 = hardware concurrency); the result does not depend on the count.
DistanceMatrix od_matrix(const RoadGraph& g, std::span<const NodeId> origins,
                         std::span<const NodeId> destinations, unsigned threads = 0);

}  // namespace hubloc
