#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hubloc/geo.hpp"
#include "hubloc/planar_frame.hpp"
#include "hubloc/road_graph.hpp"

namespace hubloc {

struct DeliveryRecord {
  GeoPoint pos;
  std::optional<std::string> timestamp;
};

struct PopulationCell {
  GeoPoint center;
  double ppp = 0.0;  // persons per pixel
};

/// A unique, snapped demand location.
struct DemandPoint {
  std::size_t id = 0;
  GeoPoint pos;
  NodeId node = 0;
  long long count = 0;  // deliveries
  double weight = 0.0;  // h_i

  friend bool operator==(const DemandPoint&, const DemandPoint&) = default;
};

/// Convex blend parameter between normalized deliveries and population.
class WeightBlend {
 public:
  explicit WeightBlend(double alpha);
  double alpha() const noexcept { return alpha_; }

 private:
  double alpha_;
};

enum class NormScheme { Max, Sum };
enum class SnapPolicy { Strict, Lenient };

/// Result of building demand: the points plus what was left out.
struct DemandSet {
  std::vector<DemandPoint> points;
  std::size_t dropped_records = 0;  // lenient mode: deliveries that failed to snap
  std::size_t dropped_cells = 0;    // lenient mode: population cells that failed to snap
  std::size_t unbinned_records = 0; // phase 2: deliveries outside every cell
};

struct AggregatedLocation {
  GeoPoint pos;
  long long count = 0;

  friend bool operator==(const AggregatedLocation&, const AggregatedLocation&) = default;
};

/// One entry per distinct exact coordinate, ordered by (lat, lon).
std::vector<AggregatedLocation> aggregate_deliveries(std::span<const DeliveryRecord> records);

/// Divides by the maximum (Max) or by the total (Sum). All-zero input maps to
/// all zeros. Throws InputError on negative or non-finite values.
std::vector<double> normalize(std::span<const double> values, NormScheme scheme);
std::vector<double> normalize_max(std::span<const double> values);

/// alpha * x + (1 - alpha) * y for x, y in [0, 1].
double blend_weight(double x, double y, const WeightBlend& blend);

/// Unique delivery coordinates snapped to nodes; points sharing a node are
/// merged. weight = count.
DemandSet build_phase1_demand(const RoadGraph& g, std::span<const DeliveryRecord> records,
                              double max_snap_m = kDefaultMaxSnapM,
                              SnapPolicy policy = SnapPolicy::Strict);

/// Index of the cell whose square (center +/- cell_size_m / 2 in `frame`)
/// contains each record, smallest index on shared boundaries; nullopt when
/// no cell contains it.
std::vector<std::optional<std::size_t>> bin_to_cells(const PlanarFrame& frame,
                                                     std::span<const DeliveryRecord> records,
                                                     std::span<const PopulationCell> cells,
                                                     double cell_size_m = 1000.0);

struct Phase2Options {
  double max_snap_m = kDefaultMaxSnapM;
  SnapPolicy policy = SnapPolicy::Strict;
  NormScheme norm = NormScheme::Max;
  double cell_size_m = 1000.0;
};

/// One demand point per population cell center. Cells snapping to a shared
/// node are merged (counts and ppp summed) before normalization, then
/// weight = blend(normalize(counts), normalize(ppp)).
DemandSet build_phase2_demand(const RoadGraph& g, const PlanarFrame& frame,
                              std::span<const DeliveryRecord> records,
                              std::span<const PopulationCell> cells, const WeightBlend& blend,
                              const Phase2Options& options = {});

}  // namespace hubloc
