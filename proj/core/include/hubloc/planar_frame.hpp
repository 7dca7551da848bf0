#pragma once

#include <span>

#include "hubloc/geo.hpp"

namespace hubloc {

inline constexpr double kMetersPerDegree = 111'320.0;

struct PlanarPoint {
  double x = 0.0;  // meters east of the frame origin
  double y = 0.0;  // meters north of the frame origin

  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

/// Local equirectangular projection around a fixed origin.
class PlanarFrame {
 public:
  explicit PlanarFrame(GeoPoint origin);

  /// Frame centered on the arithmetic mean of `points`.
  static PlanarFrame centered_on(std::span<const GeoPoint> points);

  const GeoPoint& origin() const noexcept { return origin_; }
  double meters_per_degree_lon() const noexcept { return kx_; }
  double meters_per_degree_lat() const noexcept { return ky_; }

  PlanarPoint project(const GeoPoint& p) const noexcept;
  GeoPoint unproject(const PlanarPoint& q) const noexcept;

 private:
  GeoPoint origin_;
  double kx_;
  double ky_;
};

}  // namespace hubloc
