#include "hubloc/geo.hpp"

#include <cmath>
#include <numbers>

namespace hubloc {

bool is_valid(const GeoPoint& p) noexcept {
  return std::isfinite(p.lon) && std::isfinite(p.lat) && p.lon >= -180.0 && p.lon <= 180.0 &&
         p.lat >= -90.0 && p.lat <= 90.0;
}

double great_circle_m(const GeoPoint& a, const GeoPoint& b) noexcept {
  if (a == b) return 0.0;
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * kRad;
  const double dlon = (b.lon - a.lon) * kRad;
  const double s_lat = std::sin(dlat / 2.0);
  const double s_lon = std::sin(dlon / 2.0);
  double h = s_lat * s_lat + std::cos(a.lat * kRad) * std::cos(b.lat * kRad) * s_lon * s_lon;
  h = std::min(1.0, h);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

}  // namespace hubloc
