#include "hubloc/candidate_grid.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "hubloc/error.hpp"

namespace hubloc {

std::vector<NodeId> CandidateSet::nodes() const {
  std::vector<NodeId> out;
  out.reserve(sites.size());
  for (const auto& s : sites) out.push_back(s.node);
  return out;
}

std::pair<std::size_t, std::size_t> grid_shape(double width_m, double height_m, double res_m) {
  if (!(res_m > 0.0)) throw InputError("grid resolution must be positive");
  auto cells = [res_m](double extent) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(extent / res_m)));
  };
  return {cells(width_m), cells(height_m)};
}

CandidateSet generate_candidates(const RoadGraph& g, const PlanarFrame& frame,
                                 std::span<const DemandPoint> cluster_points, double res_m,
                                 NodeId incumbent, double max_snap_m) {
  if (cluster_points.empty()) throw Error("cannot generate candidates for an empty cluster");
  g.check_node(incumbent);

  PlanarPoint lo = frame.project(cluster_points.front().pos);
  PlanarPoint hi = lo;
  for (const auto& p : cluster_points) {
    const PlanarPoint q = frame.project(p.pos);
    lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
    hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
  }

  CandidateSet out;
  std::tie(out.grid_cols, out.grid_rows) = grid_shape(hi.x - lo.x, hi.y - lo.y, res_m);
  std::unordered_set<NodeId> seen;
  for (std::size_t row = 0; row < out.grid_rows; ++row) {
    for (std::size_t col = 0; col < out.grid_cols; ++col) {
      const PlanarPoint center{lo.x + (static_cast<double>(col) + 0.5) * res_m,
                               lo.y + (static_cast<double>(row) + 0.5) * res_m};
      const GeoPoint geo = frame.unproject(center);
      const auto [node, d] = nearest_node(g, geo);
      if (d > max_snap_m) {
        ++out.skipped_cells;
        continue;
      }
      if (seen.insert(node).second) {
        out.sites.push_back({node, geo, CandidateOrigin::GridCell});
      }
    }
  }
  if (seen.insert(incumbent).second) {
    out.sites.push_back({incumbent, g.node(incumbent).pos, CandidateOrigin::IncumbentCentroid});
  }
  return out;
}

}  // namespace hubloc
