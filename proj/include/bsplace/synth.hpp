#pragma once

// Desk-scale synthetic city tiles: smooth hilly terrain, a road grid,
// rectangular buildings, tree and clutter patches, parked cars.

#include <bsplace/grid.hpp>

#include <random>
#include <utility>

namespace bsp {

struct SynthConfig {
  std::size_t width = 200;
  std::size_t height = 200;
  double cell_size = 4.0;
  double building_density = 0.3;  // target fraction of Building cells
  double building_min_m = 12.0;
  double building_max_m = 40.0;
  double height_min_m = 8.0;
  double height_max_m = 40.0;
  double terrain_amplitude_m = 15.0;
  std::size_t hills = 4;
  double road_spacing_m = 120.0;
  double road_width_m = 8.0;
  double tree_fraction = 0.05;
  double clutter_fraction = 0.01;
  std::size_t cars = 20;

  void validate() const {
    if (width < 4 || height < 4 || !(cell_size > 0))
      throw Error(ErrorCode::InvalidConfig, "synthetic grid must be at least 4x4 with positive cells");
    if (!(building_density >= 0 && building_density <= 0.6))
      throw Error(ErrorCode::InvalidConfig, "building_density must lie in [0, 0.6]");
    if (!(building_min_m > 0 && building_max_m >= building_min_m))
      throw Error(ErrorCode::InvalidConfig, "building size range invalid");
    if (!(height_min_m > 0 && height_max_m >= height_min_m))
      throw Error(ErrorCode::InvalidConfig, "building height range invalid");
    if (!(terrain_amplitude_m >= 0) || !(road_spacing_m > 0) || !(road_width_m >= 0))
      throw Error(ErrorCode::InvalidConfig, "terrain or road parameters invalid");
    if (!(tree_fraction >= 0 && clutter_fraction >= 0 && tree_fraction + clutter_fraction <= 0.5))
      throw Error(ErrorCode::InvalidConfig, "tree/clutter fractions invalid");
  }
};

inline std::pair<ClassRaster, Dsm> generate_synthetic_scene(const SynthConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  auto uni = [&](double a, double b) { return a + (b - a) * u01(); };
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  const GridGeometry geo{cfg.width, cfg.height, cfg.cell_size, {0.0, 0.0}};
  ClassRaster raster(geo, LandClass::LowVegetation);
  Dsm dsm(geo, 0.0);
  const std::size_t W = cfg.width, H = cfg.height;
  const double span = std::min(geo.extent_x(), geo.extent_y());

  struct Hill { Vec2 c; double amp, sigma; };
  std::vector<Hill> hills;
  for (std::size_t i = 0; i < cfg.hills; ++i)
    hills.push_back({{uni(0, geo.extent_x()), uni(0, geo.extent_y())},
                     uni(0.3, 1.0) * cfg.terrain_amplitude_m, uni(0.15, 0.4) * span});
  for (std::size_t r = 0; r < H; ++r)
    for (std::size_t c = 0; c < W; ++c) {
      const Vec2 p = geo.cell_center(c, r);
      double z = 0.0;
      for (const auto& h : hills) {
        const Vec2 d = p - h.c;
        z += h.amp * std::exp(-dot(d, d) / (2.0 * h.sigma * h.sigma));
      }
      dsm.at(c, r) = z;
    }
  const Dsm terrain = dsm;

  // Road corridors along both axes.
  const auto road_step = static_cast<std::size_t>(std::max(2.0, std::round(cfg.road_spacing_m / cfg.cell_size)));
  const auto road_w = static_cast<std::size_t>(std::round(cfg.road_width_m / cfg.cell_size));
  const std::size_t road_off = road_step / 2;
  std::vector<char> road(W * H, 0);
  if (road_w > 0) {
    for (std::size_t r = 0; r < H; ++r)
      for (std::size_t c = 0; c < W; ++c) {
        const bool on = (c >= road_off && (c - road_off) % road_step < road_w) ||
                        (r >= road_off && (r - road_off) % road_step < road_w);
        if (on) {
          road[raster.index(c, r)] = 1;
          raster.at(c, r) = LandClass::ImperviousSurface;
        }
      }
  }
  auto near_road = [&](long c, long r) {
    for (long dr = -1; dr <= 1; ++dr)
      for (long dc = -1; dc <= 1; ++dc) {
        const long nc = c + dc, nr = r + dr;
        if (nc >= 0 && nr >= 0 && nc < static_cast<long>(W) && nr < static_cast<long>(H) &&
            road[raster.index(static_cast<std::size_t>(nc), static_cast<std::size_t>(nr))])
          return true;
      }
    return false;
  };

  // Buildings until the target fraction is met.
  const auto target = static_cast<std::size_t>(cfg.building_density * static_cast<double>(W * H));
  std::size_t built = 0;
  std::vector<double> roof(W * H, 0.0);
  const auto min_cells = static_cast<std::size_t>(std::max(1.0, std::round(cfg.building_min_m / cfg.cell_size)));
  const auto max_cells = static_cast<std::size_t>(std::max<double>(min_cells, std::round(cfg.building_max_m / cfg.cell_size)));
  for (std::size_t attempt = 0; built < target && attempt < 200 * W * H / (min_cells * min_cells + 1); ++attempt) {
    const std::size_t bw = min_cells + pick(max_cells - min_cells + 1);
    const std::size_t bh = min_cells + pick(max_cells - min_cells + 1);
    if (bw > W || bh > H) continue;
    const std::size_t c0 = pick(W - bw + 1), r0 = pick(H - bh + 1);
    bool ok = true;
    for (std::size_t r = r0; ok && r < r0 + bh; ++r)
      for (std::size_t c = c0; ok && c < c0 + bw; ++c)
        if (near_road(static_cast<long>(c), static_cast<long>(r))) ok = false;
    if (!ok) continue;
    const double h = uni(cfg.height_min_m, cfg.height_max_m);
    for (std::size_t r = r0; r < r0 + bh; ++r)
      for (std::size_t c = c0; c < c0 + bw; ++c) {
        if (raster.at(c, r) != LandClass::Building) ++built;
        raster.at(c, r) = LandClass::Building;
        roof[raster.index(c, r)] = std::max(roof[raster.index(c, r)], h);
      }
  }

  // Round patches of trees and clutter on open vegetation.
  auto blobs = [&](LandClass cls, double fraction) {
    const auto want = static_cast<std::size_t>(fraction * static_cast<double>(W * H));
    std::size_t got = 0;
    for (std::size_t attempt = 0; got < want && attempt < 50 * W * H; ++attempt) {
      const long cc = static_cast<long>(pick(W)), rc = static_cast<long>(pick(H));
      const long rad = 1 + static_cast<long>(pick(3));
      for (long dr = -rad; dr <= rad; ++dr)
        for (long dc = -rad; dc <= rad; ++dc) {
          const long c = cc + dc, r = rc + dr;
          if (c < 0 || r < 0 || c >= static_cast<long>(W) || r >= static_cast<long>(H) || dc * dc + dr * dr > rad * rad)
            continue;
          auto& cell = raster.at(static_cast<std::size_t>(c), static_cast<std::size_t>(r));
          if (cell != LandClass::LowVegetation) continue;
          cell = cls;
          ++got;
        }
    }
  };
  blobs(LandClass::Tree, cfg.tree_fraction);
  blobs(LandClass::Clutter, cfg.clutter_fraction);

  std::vector<std::size_t> road_cells;
  for (std::size_t i = 0; i < W * H; ++i)
    if (road[i]) road_cells.push_back(i);
  for (std::size_t k = 0; k < cfg.cars && !road_cells.empty(); ++k)
    raster.values[road_cells[pick(road_cells.size())]] = LandClass::Car;

  for (std::size_t i = 0; i < W * H; ++i) {
    switch (raster.values[i]) {
      case LandClass::Building: dsm.values[i] = terrain.values[i] + roof[i]; break;
      case LandClass::Tree: dsm.values[i] = terrain.values[i] + 8.0; break;
      case LandClass::Car: dsm.values[i] = terrain.values[i] + 1.5; break;
      default: break;
    }
  }
  return {std::move(raster), std::move(dsm)};
}

}  // namespace bsp
