#include "hubloc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hubloc/planar_frame.hpp"

namespace hubloc::synth {

namespace {

std::string node_key(std::size_t i) { return "n" + std::to_string(i); }

bool reaches_all(std::size_t n, const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

struct Segment {
  std::size_t a = 0;
  std::size_t b = 0;
  bool one_way = false;
};

bool strongly_connected(std::size_t n, const std::vector<Segment>& segs) {
  if (n == 0) return true;
  std::vector<std::vector<std::size_t>> fwd(n), bwd(n);
  for (const auto& s : segs) {
    fwd[s.a].push_back(s.b);
    bwd[s.b].push_back(s.a);
    if (!s.one_way) {
      fwd[s.b].push_back(s.a);
      bwd[s.a].push_back(s.b);
    }
  }
  return reaches_all(n, fwd) && reaches_all(n, bwd);
}

// Marks a random fraction of segments one-way with random orientation, then
// turns one-way segments back into two-way ones until the network is
// strongly connected.
void make_one_way(std::size_t n, std::vector<Segment>& segs, double fraction, std::mt19937_64& rng) {
  std::bernoulli_distribution pick(fraction), flip(0.5);
  for (auto& s : segs) {
    if (pick(rng)) {
      s.one_way = true;
      if (flip(rng)) std::swap(s.a, s.b);
    }
  }
  while (!strongly_connected(n, segs)) {
    std::vector<std::size_t> one_way;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      if (segs[k].one_way) one_way.push_back(k);
    }
    std::uniform_int_distribution<std::size_t> which(0, one_way.size() - 1);
    segs[one_way[which(rng)]].one_way = false;
  }
}

std::string cardinal(const PlanarPoint& from, const PlanarPoint& to) {
  const double dx = to.x - from.x, dy = to.y - from.y;
  if (std::fabs(dx) >= std::fabs(dy)) return dx >= 0 ? "EB" : "WB";
  return dy >= 0 ? "NB" : "SB";
}

std::vector<EdgeRecord> to_records(const PlanarFrame& frame, const std::vector<PlanarPoint>& pts,
                                   const std::vector<Segment>& segs, std::optional<double> length) {
  std::vector<EdgeRecord> out;
  out.reserve(segs.size());
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const auto& s = segs[k];
    EdgeRecord e;
    e.edge_id = "e" + std::to_string(k);
    e.from_key = node_key(s.a);
    e.to_key = node_key(s.b);
    e.from_pos = frame.unproject(pts[s.a]);
    e.to_pos = frame.unproject(pts[s.b]);
    e.length_m = length;
    e.direction = s.one_way ? cardinal(pts[s.a], pts[s.b]) : "None";
    e.road_class = "local";
    e.row = k + 2;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

GeoPoint offset(const GeoPoint& p, double east_m, double north_m) {
  return PlanarFrame(p).unproject({east_m, north_m});
}

std::vector<EdgeRecord> lattice_edges(const LatticeSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const PlanarFrame frame(spec.origin);
  std::vector<PlanarPoint> pts;
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      pts.push_back({static_cast<double>(c) * spec.spacing_m, static_cast<double>(r) * spec.spacing_m});
    }
  }
  std::vector<Segment> segs;
  for (std::size_t r = 0; r < spec.rows; ++r) {
    for (std::size_t c = 0; c < spec.cols; ++c) {
      const std::size_t u = r * spec.cols + c;
      if (c + 1 < spec.cols) segs.push_back({u, u + 1});
      if (r + 1 < spec.rows) segs.push_back({u, u + spec.cols});
    }
  }
  make_one_way(pts.size(), segs, spec.one_way_fraction, rng);
  return to_records(frame, pts, segs, spec.spacing_m);
}

std::vector<EdgeRecord> random_planar_edges(const RandomPlanarSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const PlanarFrame frame(spec.origin);
  std::uniform_real_distribution<double> coord(0.0, spec.extent_m);
  std::vector<PlanarPoint> pts(spec.nodes);
  for (auto& p : pts) p = {std::round(coord(rng)), std::round(coord(rng))};
  // Distinct positions keep every segment length positive.
  std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  auto dist2 = [&](std::size_t a, std::size_t b) {
    const double dx = pts[a].x - pts[b].x, dy = pts[a].y - pts[b].y;
    return dx * dx + dy * dy;
  };

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return dist2(u, a) < dist2(u, b) || (dist2(u, a) == dist2(u, b) && a < b);
    });
    for (std::size_t k = 1; k <= std::min(spec.neighbors, n - 1); ++k) {
      pairs.emplace_back(std::min(u, order[k]), std::max(u, order[k]));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::vector<std::size_t> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](std::size_t x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (auto [a, b] : pairs) comp[find(a)] = find(b);
  while (true) {
    double best = INFINITY;
    std::pair<std::size_t, std::size_t> link{0, 0};
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (find(a) != find(b) && dist2(a, b) < best) {
          best = dist2(a, b);
          link = {a, b};
        }
      }
    }
    if (!std::isfinite(best)) break;
    pairs.push_back(link);
    comp[find(link.first)] = find(link.second);
  }

  std::vector<Segment> segs;
  segs.reserve(pairs.size());
  for (auto [a, b] : pairs) segs.push_back({a, b});
  make_one_way(n, segs, spec.one_way_fraction, rng);
  return to_records(frame, pts, segs, std::nullopt);
}

std::vector<DeliveryRecord> gaussian_deliveries(std::span<const GaussianCluster> clusters,
                                                GeoPoint sw, GeoPoint ne, double grid_m,
                                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const PlanarFrame frame(sw);
  const PlanarPoint top = frame.project(ne);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<DeliveryRecord> out;
  for (const auto& c : clusters) {
    const PlanarPoint mid = frame.project(c.center);
    for (std::size_t k = 0; k < c.deliveries; ++k) {
      double x = std::clamp(mid.x + c.sigma_m * unit(rng), 0.0, top.x);
      double y = std::clamp(mid.y + c.sigma_m * unit(rng), 0.0, top.y);
      if (grid_m > 0.0) {
        x = std::round(x / grid_m) * grid_m;
        y = std::round(y / grid_m) * grid_m;
      }
      out.push_back({frame.unproject({x, y}), std::nullopt});
    }
  }
  return out;
}

std::vector<PopulationCell> population_grid(GeoPoint sw, GeoPoint ne, double cell_m,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const PlanarFrame frame(sw);
  const PlanarPoint top = frame.project(ne);
  std::uniform_real_distribution<double> ux(0.0, top.x), uy(0.0, top.y), peak(1000.0, 6000.0);
  struct Bump {
    PlanarPoint at;
    double height;
  };
  std::vector<Bump> bumps(4);
  for (auto& b : bumps) b = {{ux(rng), uy(rng)}, peak(rng)};
  const double spread = std::max(top.x, top.y) / 4.0;

  std::vector<PopulationCell> out;
  for (double y = cell_m / 2.0; y < top.y + cell_m / 2.0; y += cell_m) {
    for (double x = cell_m / 2.0; x < top.x + cell_m / 2.0; x += cell_m) {
      double ppp = 200.0;
      for (const auto& b : bumps) {
        const double dx = x - b.at.x, dy = y - b.at.y;
        ppp += b.height * std::exp(-(dx * dx + dy * dy) / (2.0 * spread * spread));
      }
      out.push_back({frame.unproject({x, y}), std::round(ppp)});
    }
  }
  return out;
}

}  // namespace hubloc::synth
