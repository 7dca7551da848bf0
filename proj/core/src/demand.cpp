#include "hubloc/demand.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "hubloc/error.hpp"
#include "hubloc/exact_sum.hpp"

namespace hubloc {

namespace {

std::string describe(const GeoPoint& p) {
  std::ostringstream os;
  os.precision(10);
  os << "point (" << p.lon << ", " << p.lat << ")";
  return os.str();
}

// Index of each node's first demand point, in insertion order.
class NodeMerger {
 public:
  std::size_t slot(NodeId node, std::size_t next_index) {
    return index_.try_emplace(node, next_index).first->second;
  }

 private:
  std::unordered_map<NodeId, std::size_t> index_;
};

}  // namespace

WeightBlend::WeightBlend(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InputError("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

std::vector<AggregatedLocation> aggregate_deliveries(std::span<const DeliveryRecord> records) {
  std::map<std::pair<double, double>, long long> counts;
  for (const auto& r : records) {
    if (!is_valid(r.pos)) throw InputError("delivery has invalid coordinates: " + describe(r.pos));
    ++counts[{r.pos.lat, r.pos.lon}];
  }
  std::vector<AggregatedLocation> out;
  out.reserve(counts.size());
  for (const auto& [key, n] : counts) out.push_back({{key.second, key.first}, n});
  return out;
}

std::vector<double> normalize(std::span<const double> values, NormScheme scheme) {
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InputError("normalization input must be finite and non-negative");
    }
  }
  double denom = 0.0;
  if (scheme == NormScheme::Max) {
    for (double v : values) denom = std::max(denom, v);
  } else {
    denom = exact_sum(values);
  }
  std::vector<double> out(values.size(), 0.0);
  if (denom == 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / denom;
  return out;
}

std::vector<double> normalize_max(std::span<const double> values) {
  return normalize(values, NormScheme::Max);
}

double blend_weight(double x, double y, const WeightBlend& blend) {
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) {
    throw InputError("blend inputs must lie in [0, 1]");
  }
  const double a = blend.alpha();
  return a * x + (1.0 - a) * y;
}

DemandSet build_phase1_demand(const RoadGraph& g, std::span<const DeliveryRecord> records,
                              double max_snap_m, SnapPolicy policy) {
  DemandSet out;
  NodeMerger merger;
  for (const auto& loc : aggregate_deliveries(records)) {
    const auto [node, d] = nearest_node(g, loc.pos);
    if (d > max_snap_m) {
      if (policy == SnapPolicy::Strict) throw SnapTooFar(d, "delivery at " + describe(loc.pos));
      out.dropped_records += static_cast<std::size_t>(loc.count);
      continue;
    }
    const std::size_t k = merger.slot(node, out.points.size());
    if (k == out.points.size()) {
      out.points.push_back(DemandPoint{k, loc.pos, node, 0, 0.0});
    }
    out.points[k].count += loc.count;
  }
  for (auto& p : out.points) p.weight = static_cast<double>(p.count);
  return out;
}

std::vector<std::optional<std::size_t>> bin_to_cells(const PlanarFrame& frame,
                                                     std::span<const DeliveryRecord> records,
                                                     std::span<const PopulationCell> cells,
                                                     double cell_size_m) {
  if (!(cell_size_m > 0.0)) throw InputError("cell size must be positive");
  const double half = cell_size_m / 2.0;
  std::vector<PlanarPoint> centers;
  centers.reserve(cells.size());
  for (const auto& c : cells) centers.push_back(frame.project(c.center));

  std::vector<std::optional<std::size_t>> out(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    const PlanarPoint q = frame.project(records[r].pos);
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (std::fabs(q.x - centers[c].x) <= half && std::fabs(q.y - centers[c].y) <= half) {
        out[r] = c;
        break;
      }
    }
  }
  return out;
}

DemandSet build_phase2_demand(const RoadGraph& g, const PlanarFrame& frame,
                              std::span<const DeliveryRecord> records,
                              std::span<const PopulationCell> cells, const WeightBlend& blend,
                              const Phase2Options& options) {
  if (cells.empty()) throw InputError("population cells are required");
  for (const auto& c : cells) {
    if (!is_valid(c.center)) throw InputError("population cell has invalid coordinates: " + describe(c.center));
    if (!std::isfinite(c.ppp) || c.ppp < 0.0) {
      throw InputError("population cell at " + describe(c.center) + " has invalid ppp");
    }
  }
  for (const auto& r : records) {
    if (!is_valid(r.pos)) throw InputError("delivery has invalid coordinates: " + describe(r.pos));
  }

  DemandSet out;
  std::vector<long long> cell_counts(cells.size(), 0);
  for (const auto& bin : bin_to_cells(frame, records, cells, options.cell_size_m)) {
    if (bin) {
      ++cell_counts[*bin];
    } else {
      ++out.unbinned_records;
    }
  }

  NodeMerger merger;
  std::vector<double> ppp;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto [node, d] = nearest_node(g, cells[c].center);
    if (d > options.max_snap_m) {
      if (options.policy == SnapPolicy::Strict) {
        throw SnapTooFar(d, "population cell at " + describe(cells[c].center));
      }
      ++out.dropped_cells;
      out.dropped_records += static_cast<std::size_t>(cell_counts[c]);
      continue;
    }
    const std::size_t k = merger.slot(node, out.points.size());
    if (k == out.points.size()) {
      out.points.push_back(DemandPoint{k, cells[c].center, node, 0, 0.0});
      ppp.push_back(0.0);
    }
    out.points[k].count += cell_counts[c];
    ppp[k] += cells[c].ppp;
  }

  std::vector<double> counts;
  counts.reserve(out.points.size());
  for (const auto& p : out.points) counts.push_back(static_cast<double>(p.count));
  const auto x = normalize(counts, options.norm);
  const auto y = normalize(ppp, options.norm);
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    out.points[k].weight = blend_weight(x[k], y[k], blend);
  }
  return out;
}

}  // namespace hubloc
