#pragma once

#include <span>
#include <vector>

#include "hubloc/planar_frame.hpp"

namespace hubloc {

/// Andrew's monotone chain. Counter-clockwise, starting at the
/// lexicographically smallest (x, y) vertex, collinear points dropped.
/// Degenerate inputs return one point or the two ends of a segment.
/// Throws InputError on empty input.
std::vector<PlanarPoint> convex_hull(std::span<const PlanarPoint> points);

}  // namespace hubloc
