#pragma once

namespace hubloc {

inline constexpr double kEarthRadiusM = 6'371'000.0;

/// WGS84 coordinate in degrees.
struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool is_valid(const GeoPoint& p) noexcept;

/// Haversine distance on a sphere of radius kEarthRadiusM.
double great_circle_m(const GeoPoint& a, const GeoPoint& b) noexcept;

}  // namespace hubloc
