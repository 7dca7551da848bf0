#include "hubloc/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hubloc/error.hpp"

namespace hubloc::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string at(const CsvTable& t, std::size_t r, std::size_t c, const std::string& source) {
  const auto& row = t.rows[r];
  if (c >= row.size()) throw InputError(source + ": missing field '" + t.header[c] + "'", r + 2);
  return row[c];
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InputError("missing column '" + std::string(name) + "'");
}

bool CsvTable::has_column(std::string_view name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (!have_header && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) {
      if (have_header) t.rows.emplace_back();  // keep row numbering; rejected when read
      continue;
    }
    if (!have_header) {
      t.header = split(view);
      have_header = true;
    } else {
      t.rows.push_back(split(view));
    }
  }
  if (!have_header) throw InputError(source + ": missing header row");
  // Trailing blank lines are harmless.
  while (!t.rows.empty() && t.rows.back().empty()) t.rows.pop_back();
  return t;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return parse_csv(in, path.string());
}

double parse_double(std::string_view s, const std::string& what, std::size_t row) {
  s = trim(s);
  if (s == "inf" || s == "+inf") return INFINITY;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InputError(what + ": '" + std::string(s) + "' is not a finite number", row);
  }
  return v;
}

std::string format_double(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<EdgeRecord> parse_edges(const CsvTable& t, const std::string& source) {
  const std::size_t c_id = t.column("edge_id"), c_from = t.column("from_id"), c_to = t.column("to_id"),
                    c_flon = t.column("from_lon"), c_flat = t.column("from_lat"),
                    c_tlon = t.column("to_lon"), c_tlat = t.column("to_lat"),
                    c_len = t.column("length_m"), c_dir = t.column("direction"),
                    c_cls = t.column("road_class");
  std::vector<EdgeRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::size_t row = r + 2;
    auto num = [&](std::size_t c) { return parse_double(at(t, r, c, source), source + ": " + t.header[c], row); };
    EdgeRecord e;
    e.row = row;
    e.edge_id = at(t, r, c_id, source);
    e.from_key = at(t, r, c_from, source);
    e.to_key = at(t, r, c_to, source);
    e.from_pos = {num(c_flon), num(c_flat)};
    e.to_pos = {num(c_tlon), num(c_tlat)};
    const std::string len = at(t, r, c_len, source);
    if (!len.empty()) e.length_m = parse_double(len, source + ": length_m", row);
    e.direction = at(t, r, c_dir, source);
    e.road_class = at(t, r, c_cls, source);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<EdgeRecord> read_edges(const std::filesystem::path& path) {
  return parse_edges(read_csv(path), path.string());
}

std::vector<DeliveryRecord> read_deliveries(const std::filesystem::path& path) {
  const std::string source = path.string();
  const CsvTable t = read_csv(path);
  const std::size_t c_lon = t.column("lon"), c_lat = t.column("lat");
  const bool has_ts = t.has_column("timestamp");
  const std::size_t c_ts = has_ts ? t.column("timestamp") : 0;
  std::vector<DeliveryRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    DeliveryRecord d;
    d.pos = {parse_double(at(t, r, c_lon, source), source + ": lon", r + 2),
             parse_double(at(t, r, c_lat, source), source + ": lat", r + 2)};
    if (!is_valid(d.pos)) throw InputError(source + ": coordinates out of range", r + 2);
    if (has_ts && c_ts < t.rows[r].size() && !t.rows[r][c_ts].empty()) d.timestamp = t.rows[r][c_ts];
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<PopulationCell> read_population(const std::filesystem::path& path) {
  const std::string source = path.string();
  const CsvTable t = read_csv(path);
  const std::size_t c_lon = t.column("lon"), c_lat = t.column("lat"), c_ppp = t.column("ppp");
  std::vector<PopulationCell> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    PopulationCell c;
    c.center = {parse_double(at(t, r, c_lon, source), source + ": lon", r + 2),
                parse_double(at(t, r, c_lat, source), source + ": lat", r + 2)};
    c.ppp = parse_double(at(t, r, c_ppp, source), source + ": ppp", r + 2);
    if (!is_valid(c.center)) throw InputError(source + ": coordinates out of range", r + 2);
    if (c.ppp < 0.0) throw InputError(source + ": ppp must be >= 0", r + 2);
    out.push_back(c);
  }
  return out;
}

std::vector<GeoPoint> read_points(const std::filesystem::path& path) {
  const std::string source = path.string();
  const CsvTable t = read_csv(path);
  const std::size_t c_lon = t.column("lon"), c_lat = t.column("lat");
  std::vector<GeoPoint> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    GeoPoint p{parse_double(at(t, r, c_lon, source), source + ": lon", r + 2),
               parse_double(at(t, r, c_lat, source), source + ": lat", r + 2)};
    if (!is_valid(p)) throw InputError(source + ": coordinates out of range", r + 2);
    out.push_back(p);
  }
  return out;
}

void write_edges(std::ostream& out, std::span<const EdgeRecord> edges) {
  out << "edge_id,from_id,to_id,from_lon,from_lat,to_lon,to_lat,length_m,direction,road_class\n";
  for (const auto& e : edges) {
    out << e.edge_id << ',' << e.from_key << ',' << e.to_key << ',' << format_double(e.from_pos.lon)
        << ',' << format_double(e.from_pos.lat) << ',' << format_double(e.to_pos.lon) << ','
        << format_double(e.to_pos.lat) << ',' << (e.length_m ? format_double(*e.length_m) : "")
        << ',' << e.direction << ',' << e.road_class << '\n';
  }
}

void write_deliveries(std::ostream& out, std::span<const DeliveryRecord> records) {
  out << "lon,lat,timestamp\n";
  for (const auto& r : records) {
    out << format_double(r.pos.lon) << ',' << format_double(r.pos.lat) << ','
        << r.timestamp.value_or("") << '\n';
  }
}

void write_population(std::ostream& out, std::span<const PopulationCell> cells) {
  out << "lon,lat,ppp\n";
  for (const auto& c : cells) {
    out << format_double(c.center.lon) << ',' << format_double(c.center.lat) << ','
        << format_double(c.ppp) << '\n';
  }
}

void write_points(std::ostream& out, std::span<const GeoPoint> points) {
  out << "lon,lat\n";
  for (const auto& p : points) out << format_double(p.lon) << ',' << format_double(p.lat) << '\n';
}

void write_distance_matrix(std::ostream& out, const DistanceMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m.at(r, c));
    }
    out << '\n';
  }
}

}  // namespace hubloc::io
