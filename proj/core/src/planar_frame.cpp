#include "hubloc/planar_frame.hpp"

#include <cmath>
#include <numbers>

#include "hubloc/error.hpp"
#include "hubloc/exact_sum.hpp"

namespace hubloc {

PlanarFrame::PlanarFrame(GeoPoint origin)
    : origin_(origin),
      kx_(std::cos(origin.lat * std::numbers::pi / 180.0) * kMetersPerDegree),
      ky_(kMetersPerDegree) {
  if (!is_valid(origin) || !(kx_ > 0.0)) throw InputError("planar frame origin must be a valid point away from the poles");
}

PlanarFrame PlanarFrame::centered_on(std::span<const GeoPoint> points) {
  if (points.empty()) throw InputError("cannot center a planar frame on zero points");
  ExactSum lon, lat;
  for (const auto& p : points) {
    lon.add(p.lon);
    lat.add(p.lat);
  }
  const double n = static_cast<double>(points.size());
  return PlanarFrame({lon.value() / n, lat.value() / n});
}

PlanarPoint PlanarFrame::project(const GeoPoint& p) const noexcept {
  return {(p.lon - origin_.lon) * kx_, (p.lat - origin_.lat) * ky_};
}

GeoPoint PlanarFrame::unproject(const PlanarPoint& q) const noexcept {
  return {origin_.lon + q.x / kx_, origin_.lat + q.y / ky_};
}

}  // namespace hubloc
