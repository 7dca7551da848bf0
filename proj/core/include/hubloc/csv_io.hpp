#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hubloc/demand.hpp"
#include "hubloc/road_graph.hpp"

namespace hubloc::io {

/// Header plus rows of a comma separated file. Fields are trimmed; quoting is
/// not supported.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name, throws InputError when absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

CsvTable parse_csv(std::istream& in, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// edge_id,from_id,to_id,from_lon,from_lat,to_lon,to_lat,length_m,direction,road_class
std::vector<EdgeRecord> read_edges(const std::filesystem::path& path);
std::vector<EdgeRecord> parse_edges(const CsvTable& table, const std::string& source);

/// lon,lat[,timestamp]
std::vector<DeliveryRecord> read_deliveries(const std::filesystem::path& path);
/// lon,lat,ppp
std::vector<PopulationCell> read_population(const std::filesystem::path& path);
/// lon,lat
std::vector<GeoPoint> read_points(const std::filesystem::path& path);

void write_edges(std::ostream& out, std::span<const EdgeRecord> edges);
void write_deliveries(std::ostream& out, std::span<const DeliveryRecord> records);
void write_population(std::ostream& out, std::span<const PopulationCell> cells);
void write_points(std::ostream& out, std::span<const GeoPoint> points);

/// Shortest representation that parses back to the same double; "inf" for
/// +infinity.
std::string format_double(double v);
double parse_double(std::string_view s, const std::string& what, std::size_t row = 0);

/// Dense matrix, one origin per line, "inf" for unreachable pairs.
void write_distance_matrix(std::ostream& out, const DistanceMatrix& m);

}  // namespace hubloc::io
