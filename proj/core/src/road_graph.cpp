#include "hubloc/road_graph.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <functional>
#include <queue>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "hubloc/error.hpp"

namespace hubloc {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::optional<RoadClass> parse_road_class(std::string_view token) {
  const std::string t = lower(token);
  if (t == "primary") return RoadClass::Primary;
  if (t == "secondary") return RoadClass::Secondary;
  if (t == "local") return RoadClass::Local;
  if (t == "motorway") return RoadClass::Motorway;
  if (t == "metro") return RoadClass::Metro;
  if (t == "highway") return RoadClass::Highway;
  return std::nullopt;
}

std::string_view to_string(RoadClass c) {
  switch (c) {
    case RoadClass::Primary: return "primary";
    case RoadClass::Secondary: return "secondary";
    case RoadClass::Local: return "local";
    case RoadClass::Motorway: return "motorway";
    case RoadClass::Metro: return "metro";
    case RoadClass::Highway: return "highway";
  }
  return "local";
}

std::optional<std::optional<DirectionTag>> parse_direction(std::string_view token) {
  const std::string t = lower(token);
  if (t == "nb") return std::optional<DirectionTag>(DirectionTag::NB);
  if (t == "sb") return std::optional<DirectionTag>(DirectionTag::SB);
  if (t == "eb") return std::optional<DirectionTag>(DirectionTag::EB);
  if (t == "wb") return std::optional<DirectionTag>(DirectionTag::WB);
  if (t == "none") return std::optional<DirectionTag>(std::nullopt);
  return std::nullopt;
}

RoadGraph::RoadGraph(std::vector<RoadNode> nodes, std::vector<RoadEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes_[i].id != i) throw InputError("road node ids must be dense and ordered");
  }
  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : edges_) {
    if (e.from >= n || e.to >= n) throw InputError("edge " + e.id + " references a missing node");
    if (!(e.length_m > 0.0) || !std::isfinite(e.length_m)) {
      throw InputError("edge " + e.id + " has a non-positive length");
    }
    ++degree[e.from];
    if (e.directionality == Directionality::TwoWay) ++degree[e.to];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  targets_.resize(offsets_[n]);
  lengths_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    targets_[cursor[e.from]] = e.to;
    lengths_[cursor[e.from]++] = e.length_m;
    if (e.directionality == Directionality::TwoWay) {
      targets_[cursor[e.to]] = e.from;
      lengths_[cursor[e.to]++] = e.length_m;
    }
  }
}

void RoadGraph::check_node(NodeId id) const {
  if (id >= nodes_.size()) {
    throw Error("node id " + std::to_string(id) + " is out of range (graph has " +
                std::to_string(nodes_.size()) + " nodes)");
  }
}

const RoadNode& RoadGraph::node(NodeId id) const {
  check_node(id);
  return nodes_[id];
}

std::span<const NodeId> RoadGraph::out_targets(NodeId id) const {
  check_node(id);
  return std::span<const NodeId>(targets_).subspan(offsets_[id], offsets_[id + 1] - offsets_[id]);
}

std::span<const double> RoadGraph::out_lengths(NodeId id) const {
  check_node(id);
  return std::span<const double>(lengths_).subspan(offsets_[id], offsets_[id + 1] - offsets_[id]);
}

RoadGraph load_road_graph(std::span<const EdgeRecord> records,
                          const std::set<RoadClass>& excluded_classes) {
  std::unordered_set<std::string> edge_ids;
  std::unordered_map<std::string, GeoPoint> positions;
  std::unordered_map<std::string, NodeId> dense;
  std::vector<RoadNode> nodes;
  std::vector<RoadEdge> edges;

  auto check_position = [&](const std::string& key, const GeoPoint& pos, std::size_t row) {
    if (!is_valid(pos)) throw InputError("invalid coordinates for node " + key, row);
    auto [it, inserted] = positions.emplace(key, pos);
    if (!inserted && !(it->second == pos)) {
      throw InputError("node " + key + " appears with two different positions", row);
    }
  };
  auto dense_id = [&](const std::string& key) {
    auto [it, inserted] = dense.emplace(key, static_cast<NodeId>(nodes.size()));
    if (inserted) nodes.push_back(RoadNode{it->second, positions.at(key), key});
    return it->second;
  };

  for (const auto& rec : records) {
    if (rec.edge_id.empty()) throw InputError("edge id is empty", rec.row);
    if (!edge_ids.insert(rec.edge_id).second) {
      throw InputError("duplicate edge id " + rec.edge_id, rec.row);
    }
    const auto direction = parse_direction(rec.direction);
    if (!direction) throw InputError("unknown direction '" + rec.direction + "'", rec.row);
    const auto road_class = parse_road_class(rec.road_class);
    if (!road_class) throw InputError("unknown road class '" + rec.road_class + "'", rec.row);
    check_position(rec.from_key, rec.from_pos, rec.row);
    check_position(rec.to_key, rec.to_pos, rec.row);

    double length = 0.0;
    if (rec.length_m) {
      length = *rec.length_m;
    } else {
      length = great_circle_m(rec.from_pos, rec.to_pos);
    }
    if (!std::isfinite(length) || !(length > 0.0)) {
      throw InputError("edge " + rec.edge_id + " has a non-positive length", rec.row);
    }
    if (excluded_classes.contains(*road_class)) continue;

    RoadEdge e;
    e.id = rec.edge_id;
    e.from = dense_id(rec.from_key);
    e.to = dense_id(rec.to_key);
    e.length_m = length;
    e.road_class = *road_class;
    e.direction_tag = *direction;
    e.directionality = e.direction_tag ? Directionality::OneWayForward : Directionality::TwoWay;
    edges.push_back(std::move(e));
  }
  return RoadGraph(std::move(nodes), std::move(edges));
}

std::pair<NodeId, double> nearest_node(const RoadGraph& g, const GeoPoint& p) {
  if (g.empty()) throw Error("cannot snap to an empty road graph");
  NodeId best = 0;
  double best_d = kUnreachable;
  for (const auto& n : g.nodes()) {
    const double d = great_circle_m(p, n.pos);
    if (d < best_d) {
      best_d = d;
      best = n.id;
    }
  }
  return {best, best_d};
}

NodeId snap_to_node(const RoadGraph& g, const GeoPoint& p, double max_snap_m) {
  const auto [node, d] = nearest_node(g, p);
  if (d > max_snap_m) throw SnapTooFar(d);
  return node;
}

std::vector<double> sssp(const RoadGraph& g, NodeId source) {
  g.check_node(source);
  std::vector<double> dist(g.node_count(), kUnreachable);
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    const auto targets = g.out_targets(u);
    const auto lengths = g.out_lengths(u);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const double nd = d + lengths[k];
      if (nd < dist[targets[k]]) {
        dist[targets[k]] = nd;
        heap.emplace(nd, targets[k]);
      }
    }
  }
  return dist;
}

DistanceMatrix::DistanceMatrix(std::vector<NodeId> origins, std::vector<NodeId> destinations)
    : origins_(std::move(origins)),
      destinations_(std::move(destinations)),
      d_(origins_.size() * destinations_.size(), kUnreachable) {}

DistanceMatrix od_matrix(const RoadGraph& g, std::span<const NodeId> origins,
                         std::span<const NodeId> destinations, unsigned threads) {
  for (NodeId o : origins) g.check_node(o);
  for (NodeId d : destinations) g.check_node(d);
  DistanceMatrix m({origins.begin(), origins.end()}, {destinations.begin(), destinations.end()});

  auto fill_row = [&](std::size_t r) {
    const auto dist = sssp(g, origins[r]);
    for (std::size_t c = 0; c < destinations.size(); ++c) m.at(r, c) = dist[destinations[c]];
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, origins.size()));
  if (threads <= 1) {
    for (std::size_t r = 0; r < origins.size(); ++r) fill_row(r);
    return m;
  }
  // Rows are disjoint slices of the matrix; workers never share a cell.
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t r = next++; r < origins.size(); r = next++) fill_row(r);
      });
    }
  }
  return m;
}

}  // namespace hubloc
