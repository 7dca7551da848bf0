#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hubloc/demand.hpp"
#include "hubloc/planar_frame.hpp"
#include "hubloc/road_graph.hpp"

namespace hubloc {

inline constexpr double kDefaultGridResM = 1000.0;

enum class CandidateOrigin { GridCell, IncumbentCentroid };

struct CandidateSite {
  NodeId node = 0;
  GeoPoint cell_center;  // for the incumbent, the node's own position
  CandidateOrigin origin = CandidateOrigin::GridCell;
};

struct CandidateSet {
  std::vector<CandidateSite> sites;
  std::size_t grid_cols = 0;
  std::size_t grid_rows = 0;
  std::size_t skipped_cells = 0;  // cell centers with no node within the snap radius

  std::size_t grid_cells() const noexcept { return grid_cols * grid_rows; }
  std::vector<NodeId> nodes() const;
};

/// Number of columns and rows tiling a w x h box at resolution `res_m`
/// (ceiling division, at least one of each).
std::pair<std::size_t, std::size_t> grid_shape(double width_m, double height_m, double res_m);

/// Tiles the projected bounding box of `cluster_points` with res_m cells
/// anchored at its min corner, snaps each cell center (row-major from the
/// min corner), drops duplicate nodes keeping the first, and appends the
/// incumbent node when it is not already present.
CandidateSet generate_candidates(const RoadGraph& g, const PlanarFrame& frame,
                                 std::span<const DemandPoint> cluster_points, double res_m,
                                 NodeId incumbent, double max_snap_m = kDefaultMaxSnapM);

}  // namespace hubloc
