#pragma once

// Regular rasters (class labels and elevations) and their ESRI ASCII grid form.

#include <bsplace/core.hpp>

#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace bsp {

enum class LandClass : std::uint8_t {
  ImperviousSurface = 0,
  Building = 1,
  LowVegetation = 2,
  Tree = 3,
  Car = 4,
  Clutter = 5,
};

inline constexpr int kLandClassCount = 6;

struct GridGeometry {
  std::size_t width = 0;   // ncols
  std::size_t height = 0;  // nrows
  double cell_size = 1.0;
  Vec2 origin;  // lower-left corner

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

  std::string shape() const {
    return std::to_string(width) + "x" + std::to_string(height);
  }
  double extent_x() const { return static_cast<double>(width) * cell_size; }
  double extent_y() const { return static_cast<double>(height) * cell_size; }

  // Rows are counted from the north edge, matching file order.
  Vec2 cell_center(std::size_t col, std::size_t row) const {
    return {origin.x + (static_cast<double>(col) + 0.5) * cell_size,
            origin.y + (static_cast<double>(height - row) - 0.5) * cell_size};
  }

  std::optional<std::array<std::size_t, 2>> locate(Vec2 p) const {
    const double fx = (p.x - origin.x) / cell_size;
    const double fy = (p.y - origin.y) / cell_size;
    if (!(fx >= 0.0) || !(fy >= 0.0) || fx >= static_cast<double>(width) ||
        fy >= static_cast<double>(height))
      return std::nullopt;
    const auto col = static_cast<std::size_t>(fx);
    const auto row_from_south = static_cast<std::size_t>(fy);
    return std::array<std::size_t, 2>{col, height - 1 - row_from_south};
  }

  void validate() const {
    if (width < 1 || height < 1)
      throw Error(ErrorCode::MalformedGrid, "grid must be at least 1x1, got " + shape());
    if (!(cell_size > 0.0) || !std::isfinite(cell_size))
      throw Error(ErrorCode::MalformedGrid, "cell size must be positive");
  }
};

template <typename T>
struct Grid {
  GridGeometry geo;
  std::vector<T> values;  // row-major, north row first

  Grid() = default;
  Grid(GridGeometry g, T fill) : geo(g), values(g.width * g.height, fill) { geo.validate(); }

  std::size_t width() const { return geo.width; }
  std::size_t height() const { return geo.height; }
  double cell_size() const { return geo.cell_size; }
  std::size_t index(std::size_t col, std::size_t row) const { return row * geo.width + col; }

  T& at(std::size_t col, std::size_t row) { return values[index(col, row)]; }
  const T& at(std::size_t col, std::size_t row) const { return values[index(col, row)]; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

using ClassRaster = Grid<LandClass>;
using Dsm = Grid<double>;

inline void require_aligned(const GridGeometry& a, const GridGeometry& b) {
  if (a.width != b.width || a.height != b.height)
    throw Error(ErrorCode::DimensionMismatch,
                "class raster is " + a.shape() + " but DSM is " + b.shape());
  if (std::abs(a.cell_size - b.cell_size) > 1e-9 || std::abs(a.origin.x - b.origin.x) > 1e-6 ||
      std::abs(a.origin.y - b.origin.y) > 1e-6)
    throw Error(ErrorCode::DimensionMismatch, "class raster and DSM are not co-registered");
}

// Elevation with values sampled at cell centers; clamps to the outermost
// centers, so at a cell center this returns that cell's value exactly.
inline double bilinear(const Dsm& dsm, Vec2 p) {
  const auto& g = dsm.geo;
  double fx = (p.x - g.origin.x) / g.cell_size - 0.5;
  double fy = (p.y - g.origin.y) / g.cell_size - 0.5;
  fx = std::clamp(fx, 0.0, static_cast<double>(g.width - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(g.height - 1));
  const auto c0 = static_cast<std::size_t>(std::floor(fx));
  const auto s0 = static_cast<std::size_t>(std::floor(fy));
  const std::size_t c1 = std::min(c0 + 1, g.width - 1);
  const std::size_t s1 = std::min(s0 + 1, g.height - 1);
  const double tx = fx - static_cast<double>(c0);
  const double ty = fy - static_cast<double>(s0);
  auto v = [&](std::size_t c, std::size_t s) { return dsm.at(c, g.height - 1 - s); };
  if (tx == 0.0 && ty == 0.0) return v(c0, s0);
  const double a = v(c0, s0) * (1 - tx) + v(c1, s0) * tx;
  const double b = v(c0, s1) * (1 - tx) + v(c1, s1) * tx;
  return a * (1 - ty) + b * ty;
}

namespace detail {

struct AsciiGrid {
  GridGeometry geo;
  std::optional<double> nodata;
  std::vector<double> values;
};

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline double parse_number(std::string_view tok, const std::string& where) {
  double v = 0.0;
  const char* b = tok.data();
  const char* e = b + tok.size();
  if (!tok.empty() && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e)
    throw Error(ErrorCode::MalformedGrid, where + ": cannot parse '" + std::string(tok) + "'");
  return v;
}

inline AsciiGrid read_ascii_grid(std::istream& in, const std::string& name) {
  AsciiGrid g;
  std::optional<double> ncols, nrows, xll, yll, cellsize;
  bool x_center = false, y_center = false;
  std::string key;
  std::streampos data_start = in.tellg();
  // Header is a run of "key value" lines; the first numeric token ends it.
  while (in >> key) {
    const std::string k = lower(key);
    if (!k.empty() && (std::isdigit(static_cast<unsigned char>(k[0])) || k[0] == '-' ||
                       k[0] == '+' || k[0] == '.'))
      break;
    std::string val;
    if (!(in >> val)) throw Error(ErrorCode::MalformedGrid, name + ": header key '" + key + "' has no value");
    const double v = parse_number(val, name);
    if (k == "ncols") ncols = v;
    else if (k == "nrows") nrows = v;
    else if (k == "xllcorner") xll = v;
    else if (k == "yllcorner") yll = v;
    else if (k == "xllcenter") { xll = v; x_center = true; }
    else if (k == "yllcenter") { yll = v; y_center = true; }
    else if (k == "cellsize") cellsize = v;
    else if (k == "nodata_value") g.nodata = v;
    else throw Error(ErrorCode::MalformedGrid, name + ": unknown header key '" + key + "'");
    data_start = in.tellg();
  }
  if (!ncols || !nrows || !xll || !yll || !cellsize)
    throw Error(ErrorCode::MalformedGrid, name + ": header must define ncols, nrows, xllcorner, yllcorner, cellsize");
  if (*ncols < 1 || *nrows < 1 || *ncols != std::floor(*ncols) || *nrows != std::floor(*nrows))
    throw Error(ErrorCode::MalformedGrid, name + ": ncols/nrows must be positive integers");
  g.geo.width = static_cast<std::size_t>(*ncols);
  g.geo.height = static_cast<std::size_t>(*nrows);
  g.geo.cell_size = *cellsize;
  g.geo.origin = {*xll - (x_center ? 0.5 * *cellsize : 0.0), *yll - (y_center ? 0.5 * *cellsize : 0.0)};
  g.geo.validate();

  in.clear();
  in.seekg(data_start);
  const std::size_t expected = g.geo.width * g.geo.height;
  g.values.reserve(expected);
  std::string tok;
  while (in >> tok) {
    g.values.push_back(parse_number(tok, name));
    if (g.values.size() > expected) break;
  }
  if (g.values.size() != expected)
    throw Error(ErrorCode::DimensionMismatch,
                name + ": header declares " + g.geo.shape() + " (" + std::to_string(expected) +
                    " cells) but " + (g.values.size() > expected ? "more" : std::to_string(g.values.size())) +
                    " values follow");
  return g;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return in;
}

inline void write_header(std::ostream& out, const GridGeometry& g, const std::string& nodata) {
  auto num = [](double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
  };
  out << "ncols " << g.width << "\n"
      << "nrows " << g.height << "\n"
      << "xllcorner " << num(g.origin.x) << "\n"
      << "yllcorner " << num(g.origin.y) << "\n"
      << "cellsize " << num(g.cell_size) << "\n"
      << "NODATA_value " << nodata << "\n";
}

}  // namespace detail

inline ClassRaster parse_raster(std::istream& in, const std::string& name = "raster") {
  auto g = detail::read_ascii_grid(in, name);
  ClassRaster r;
  r.geo = g.geo;
  r.values.reserve(g.values.size());
  for (double v : g.values) {
    if (v != std::floor(v) || v < 0 || v >= kLandClassCount)
      throw Error(ErrorCode::UnknownClassCode,
                  name + ": class code " + std::to_string(v) + " outside 0..5");
    r.values.push_back(static_cast<LandClass>(static_cast<int>(v)));
  }
  return r;
}

inline Dsm parse_dsm(std::istream& in, const std::string& name = "dsm") {
  auto g = detail::read_ascii_grid(in, name);
  Dsm d;
  d.geo = g.geo;
  d.values = std::move(g.values);
  for (double v : d.values) {
    if (!std::isfinite(v) || (g.nodata && v == *g.nodata))
      throw Error(ErrorCode::MalformedGrid, name + ": elevations must be finite and not NODATA");
  }
  return d;
}

inline ClassRaster load_raster(const std::string& path) {
  auto in = detail::open_in(path);
  return parse_raster(in, path);
}

inline Dsm load_dsm(const std::string& path) {
  auto in = detail::open_in(path);
  return parse_dsm(in, path);
}

inline void write_raster(std::ostream& out, const ClassRaster& r) {
  detail::write_header(out, r.geo, "-9999");
  for (std::size_t row = 0; row < r.height(); ++row) {
    for (std::size_t col = 0; col < r.width(); ++col) {
      if (col) out << ' ';
      out << static_cast<int>(r.at(col, row));
    }
    out << '\n';
  }
}

inline void write_dsm(std::ostream& out, const Dsm& d) {
  detail::write_header(out, d.geo, "-9999");
  char buf[64];
  for (std::size_t row = 0; row < d.height(); ++row) {
    for (std::size_t col = 0; col < d.width(); ++col) {
      if (col) out << ' ';
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d.at(col, row));
      out.write(buf, p - buf);
    }
    out << '\n';
  }
}

template <typename Writer, typename G>
void save_grid(const std::string& path, const G& grid, Writer w) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  w(out, grid);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

inline void save_raster(const std::string& path, const ClassRaster& r) {
  save_grid(path, r, [](std::ostream& o, const ClassRaster& g) { write_raster(o, g); });
}

inline void save_dsm(const std::string& path, const Dsm& d) {
  save_grid(path, d, [](std::ostream& o, const Dsm& g) { write_dsm(o, g); });
}

}  // namespace bsp
