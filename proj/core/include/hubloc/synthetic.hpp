#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hubloc/demand.hpp"
#include "hubloc/geo.hpp"
#include "hubloc/road_graph.hpp"

namespace hubloc::synth {

/// Default origin for generated networks (central Lahore).
inline constexpr GeoPoint kDefaultOrigin{74.3436, 31.5497};

struct LatticeSpec {
  std::size_t rows = 20;
  std::size_t cols = 20;
  double spacing_m = 500.0;
  double one_way_fraction = 0.1;
  GeoPoint origin = kDefaultOrigin;  // south-west corner
};

/// Grid of streets; a fraction of segments is one-way (random orientation)
/// while keeping the network strongly connected. Lengths are exactly
/// spacing_m. Every segment is class "local".
std::vector<EdgeRecord> lattice_edges(const LatticeSpec& spec, std::uint64_t seed);

struct RandomPlanarSpec {
  std::size_t nodes = 60;
  double extent_m = 8000.0;
  std::size_t neighbors = 3;
  double one_way_fraction = 0.15;
  GeoPoint origin = kDefaultOrigin;
};

/// Random points joined to their nearest neighbours, components linked,
/// strongly connected. Lengths are left empty (great-circle fallback).
std::vector<EdgeRecord> random_planar_edges(const RandomPlanarSpec& spec, std::uint64_t seed);

struct GaussianCluster {
  GeoPoint center;
  double sigma_m = 800.0;
  std::size_t deliveries = 600;
};

/// Deliveries drawn around each center, rounded to `grid_m` so that pins
/// repeat, and clamped to the bounding box [sw, ne].
std::vector<DeliveryRecord> gaussian_deliveries(std::span<const GaussianCluster> clusters,
                                                GeoPoint sw, GeoPoint ne, double grid_m,
                                                std::uint64_t seed);

/// Population cells of size cell_m covering [sw, ne], ppp drawn from a
/// smooth random field.
std::vector<PopulationCell> population_grid(GeoPoint sw, GeoPoint ne, double cell_m,
                                            std::uint64_t seed);

/// Point displaced by (east_m, north_m).
GeoPoint offset(const GeoPoint& p, double east_m, double north_m);

}  // namespace hubloc::synth
