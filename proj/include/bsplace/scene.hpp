#pragma once

// Scene derivation: building prisms from labelled cells, the user lattice and
// the candidate base-station lattice.

#include <bsplace/geometry.hpp>
#include <bsplace/grid.hpp>

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace bsp {

struct User {
  Vec3 position;
  bool priority = false;  // near a building or on a road
};

struct CandidateSite {
  std::size_t id = 0;
  Vec3 position;
};

struct SceneConfig {
  double user_spacing_m = 10.0;
  double candidate_pitch_m = 50.0;
  double mast_height_m = 25.0;
  double near_dist_m = 10.0;
  std::vector<Vec3> fixed_bs;

  void validate() const {
    if (!(user_spacing_m > 0) || !(candidate_pitch_m > 0) || !(mast_height_m > 0) || !(near_dist_m >= 0))
      throw Error(ErrorCode::InvalidConfig, "spacings and mast height must be positive");
  }
};

struct Scene {
  std::optional<ClassRaster> raster;  // absent when loaded from a scene file
  std::optional<Dsm> dsm;
  std::vector<BuildingPrism> buildings;
  std::vector<User> users;
  std::vector<CandidateSite> candidates;
  std::vector<Vec3> fixed_bs;
};

inline constexpr double kUserHeight = 2.0;

namespace detail {

inline double median(std::vector<double> v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double hi = *mid;
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

struct CellXY {
  std::size_t col;
  std::size_t row;  // from north
};

// Outer boundary of a 4-connected cell set, traced along cell edges with the
// set on the left. Enclosed background is absorbed into the footprint.
inline Polygon trace_footprint(const std::vector<CellXY>& cells, const GridGeometry& geo) {
  std::size_t cmin = SIZE_MAX, cmax = 0, rmin = SIZE_MAX, rmax = 0;
  for (auto c : cells) {
    cmin = std::min(cmin, c.col);
    cmax = std::max(cmax, c.col);
    rmin = std::min(rmin, c.row);
    rmax = std::max(rmax, c.row);
  }
  // Local frame with a one-cell margin; ly counts from the south.
  const long w = static_cast<long>(cmax - cmin) + 3;
  const long h = static_cast<long>(rmax - rmin) + 3;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(w * h), 0);
  auto idx = [w](long x, long y) { return static_cast<std::size_t>(y * w + x); };
  for (auto c : cells) {
    const long lx = static_cast<long>(c.col - cmin) + 1;
    const long ly = static_cast<long>(rmax - c.row) + 1;
    mask[idx(lx, ly)] = 1;
  }
  // 8-connected background flood from the margin; unreached cells are holes.
  std::vector<std::uint8_t> outside(mask.size(), 0);
  std::deque<std::pair<long, long>> q{{0, 0}};
  outside[0] = 1;
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    for (long dy = -1; dy <= 1; ++dy)
      for (long dx = -1; dx <= 1; ++dx) {
        const long nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const auto i = idx(nx, ny);
        if (mask[i] || outside[i]) continue;
        outside[i] = 1;
        q.emplace_back(nx, ny);
      }
  }
  auto filled = [&](long x, long y) {
    return x >= 0 && y >= 0 && x < w && y < h && !outside[idx(x, y)];
  };

  using V = std::pair<long, long>;
  std::map<V, std::vector<V>> out_edges;
  std::size_t edge_count = 0;
  for (long y = 0; y < h; ++y)
    for (long x = 0; x < w; ++x) {
      if (!filled(x, y)) continue;
      if (!filled(x, y - 1)) { out_edges[{x, y}].push_back({x + 1, y}); ++edge_count; }
      if (!filled(x + 1, y)) { out_edges[{x + 1, y}].push_back({x + 1, y + 1}); ++edge_count; }
      if (!filled(x, y + 1)) { out_edges[{x + 1, y + 1}].push_back({x, y + 1}); ++edge_count; }
      if (!filled(x - 1, y)) { out_edges[{x, y + 1}].push_back({x, y}); ++edge_count; }
    }

  std::vector<V> loop;
  V start = out_edges.begin()->first;
  V cur = start;
  V dir{0, 0};
  for (std::size_t step = 0; step < edge_count; ++step) {
    auto& outs = out_edges[cur];
    std::size_t pick = 0;
    if (outs.size() > 1) {
      // Saddle: turn left so diagonal neighbours stay separate.
      const V left{-dir.second, dir.first};
      for (std::size_t i = 0; i < outs.size(); ++i)
        if (V{outs[i].first - cur.first, outs[i].second - cur.second} == left) pick = i;
    }
    const V next = outs[pick];
    outs.erase(outs.begin() + static_cast<std::ptrdiff_t>(pick));
    const V ndir{next.first - cur.first, next.second - cur.second};
    if (ndir != dir) loop.push_back(cur);
    dir = ndir;
    cur = next;
    if (cur == start && out_edges[cur].empty()) break;
  }
  // Drop the start vertex if it sits mid-run.
  if (loop.size() > 2) {
    const V a = loop.back(), b = loop.front(), c = loop[1];
    const V d1{b.first - a.first, b.second - a.second}, d2{c.first - b.first, c.second - b.second};
    if (d1.first * d2.second - d1.second * d2.first == 0) loop.erase(loop.begin());
  }

  Polygon poly;
  poly.reserve(loop.size());
  const double x0 = geo.origin.x + (static_cast<double>(cmin) - 1.0) * geo.cell_size;
  const double y0 = geo.origin.y + (static_cast<double>(geo.height - 1 - rmax) - 1.0) * geo.cell_size;
  for (auto [x, y] : loop)
    poly.push_back({x0 + static_cast<double>(x) * geo.cell_size, y0 + static_cast<double>(y) * geo.cell_size});
  return poly;
}

struct BuildingExtraction {
  std::vector<BuildingPrism> prisms;
  std::vector<int> cell_prism;  // per cell: prism index or -1
};

inline BuildingExtraction extract_buildings_detail(const ClassRaster& raster, const Dsm& dsm) {
  require_aligned(raster.geo, dsm.geo);
  const std::size_t W = raster.width(), H = raster.height();
  BuildingExtraction out;
  out.cell_prism.assign(W * H, -1);
  std::vector<std::uint8_t> seen(W * H, 0);
  auto is_building = [&](std::size_t c, std::size_t r) { return raster.at(c, r) == LandClass::Building; };

  for (std::size_t r0 = 0; r0 < H; ++r0)
    for (std::size_t c0 = 0; c0 < W; ++c0) {
      if (!is_building(c0, r0) || seen[raster.index(c0, r0)]) continue;
      std::vector<CellXY> cells;
      std::deque<CellXY> q{{c0, r0}};
      seen[raster.index(c0, r0)] = 1;
      while (!q.empty()) {
        const auto cur = q.front();
        q.pop_front();
        cells.push_back(cur);
        const long dc[4] = {1, -1, 0, 0}, dr[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const long nc = static_cast<long>(cur.col) + dc[k], nr = static_cast<long>(cur.row) + dr[k];
          if (nc < 0 || nr < 0 || nc >= static_cast<long>(W) || nr >= static_cast<long>(H)) continue;
          const auto uc = static_cast<std::size_t>(nc), ur = static_cast<std::size_t>(nr);
          if (!is_building(uc, ur) || seen[raster.index(uc, ur)]) continue;
          seen[raster.index(uc, ur)] = 1;
          q.push_back({uc, ur});
        }
      }

      std::vector<double> roof;
      roof.reserve(cells.size());
      for (auto c : cells) roof.push_back(dsm.at(c.col, c.row));
      std::vector<std::size_t> ring;
      for (auto c : cells)
        for (long dr = -1; dr <= 1; ++dr)
          for (long dc = -1; dc <= 1; ++dc) {
            const long nc = static_cast<long>(c.col) + dc, nr = static_cast<long>(c.row) + dr;
            if (nc < 0 || nr < 0 || nc >= static_cast<long>(W) || nr >= static_cast<long>(H)) continue;
            const auto uc = static_cast<std::size_t>(nc), ur = static_cast<std::size_t>(nr);
            if (!is_building(uc, ur)) ring.push_back(raster.index(uc, ur));
          }
      std::sort(ring.begin(), ring.end());
      ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
      std::vector<double> ground;
      ground.reserve(ring.size());
      for (auto i : ring) ground.push_back(dsm.values[i]);
      const double top = median(roof);
      const double base = ground.empty() ? *std::min_element(roof.begin(), roof.end()) : median(ground);
      // Components with no height above their surroundings cannot block anything.
      if (!(top > base)) continue;

      const int id = static_cast<int>(out.prisms.size());
      for (auto c : cells) out.cell_prism[raster.index(c.col, c.row)] = id;
      out.prisms.push_back(make_prism(trace_footprint(cells, raster.geo), base, top));
    }
  return out;
}

inline std::vector<std::array<std::size_t, 2>> lattice_cells(const GridGeometry& geo, double pitch) {
  const auto step = static_cast<std::size_t>(std::max<long long>(1, std::llround(pitch / geo.cell_size)));
  std::vector<std::array<std::size_t, 2>> cells;
  for (std::size_t row = step / 2; row < geo.height; row += step)
    for (std::size_t col = step / 2; col < geo.width; col += step) cells.push_back({col, row});
  return cells;
}

inline bool inside_any(Vec2 p, std::span<const BuildingPrism> prisms) {
  for (const auto& b : prisms) {
    if (p.x < b.bounds.lo.x || p.x > b.bounds.hi.x || p.y < b.bounds.lo.y || p.y > b.bounds.hi.y) continue;
    if (point_in_polygon(p, b.footprint)) return true;
  }
  return false;
}

inline double nearest_footprint_distance(Vec2 p, std::span<const BuildingPrism> prisms) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : prisms) {
    const double bx = std::max({b.bounds.lo.x - p.x, 0.0, p.x - b.bounds.hi.x});
    const double by = std::max({b.bounds.lo.y - p.y, 0.0, p.y - b.bounds.hi.y});
    if (std::hypot(bx, by) >= best) continue;
    best = std::min(best, distance_to_polygon(p, b.footprint));
  }
  return best;
}

}  // namespace detail

inline std::vector<BuildingPrism> extract_buildings(const ClassRaster& raster, const Dsm& dsm) {
  return detail::extract_buildings_detail(raster, dsm).prisms;
}

// Users sit at cell centres of a lattice snapped to the raster, 2 m above the
// surface, on open ground only.
inline std::vector<User> place_users(const ClassRaster& raster, const Dsm& dsm,
                                     std::span<const BuildingPrism> prisms, double spacing,
                                     double near_dist) {
  require_aligned(raster.geo, dsm.geo);
  if (!(spacing > 0)) throw Error(ErrorCode::InvalidConfig, "user spacing must be positive");
  std::vector<User> users;
  for (auto [col, row] : detail::lattice_cells(raster.geo, spacing)) {
    const LandClass cls = raster.at(col, row);
    if (cls != LandClass::ImperviousSurface && cls != LandClass::LowVegetation && cls != LandClass::Clutter)
      continue;
    const Vec2 p = raster.geo.cell_center(col, row);
    if (detail::inside_any(p, prisms)) continue;
    const bool priority = cls == LandClass::ImperviousSurface ||
                          detail::nearest_footprint_distance(p, prisms) <= near_dist;
    users.push_back({{p.x, p.y, dsm.at(col, row) + kUserHeight}, priority});
  }
  if (users.empty()) throw Error(ErrorCode::NoValidUserCells, "no lattice point falls on open ground");
  return users;
}

inline std::vector<User> place_users(const ClassRaster& raster, const Dsm& dsm, double spacing,
                                     double near_dist) {
  const auto prisms = extract_buildings(raster, dsm);
  return place_users(raster, dsm, prisms, spacing, near_dist);
}

namespace detail {

inline std::vector<CandidateSite> place_candidates(const ClassRaster& raster, const Dsm& dsm,
                                                   const BuildingExtraction& bx, double pitch,
                                                   double mast_height) {
  require_aligned(raster.geo, dsm.geo);
  if (!(pitch > 0) || !(mast_height > 0))
    throw Error(ErrorCode::InvalidConfig, "candidate pitch and mast height must be positive");
  std::vector<CandidateSite> sites;
  for (auto [col, row] : lattice_cells(raster.geo, pitch)) {
    const LandClass cls = raster.at(col, row);
    if (cls == LandClass::Tree || cls == LandClass::Clutter || cls == LandClass::Car) continue;
    const Vec2 p = raster.geo.cell_center(col, row);
    double ground = dsm.at(col, row);
    const int prism = bx.cell_prism[raster.index(col, row)];
    if (cls == LandClass::Building && prism >= 0) ground = bx.prisms[static_cast<std::size_t>(prism)].top_elev;
    sites.push_back({sites.size(), {p.x, p.y, ground + mast_height}});
  }
  if (sites.empty()) throw Error(ErrorCode::NoCandidates, "candidate lattice is fully excluded");
  return sites;
}

}  // namespace detail

inline std::vector<CandidateSite> place_candidates(const ClassRaster& raster, const Dsm& dsm, double pitch,
                                                   double mast_height) {
  return detail::place_candidates(raster, dsm, detail::extract_buildings_detail(raster, dsm), pitch,
                                  mast_height);
}

inline Scene build_scene(const ClassRaster& raster, const Dsm& dsm, const SceneConfig& config) {
  config.validate();
  require_aligned(raster.geo, dsm.geo);
  auto bx = detail::extract_buildings_detail(raster, dsm);
  Scene s;
  s.users = place_users(raster, dsm, bx.prisms, config.user_spacing_m, config.near_dist_m);
  s.candidates = detail::place_candidates(raster, dsm, bx, config.candidate_pitch_m, config.mast_height_m);
  s.buildings = std::move(bx.prisms);
  s.fixed_bs = config.fixed_bs;
  s.raster = raster;
  s.dsm = dsm;
  return s;
}

}  // namespace bsp
