#pragma once

// 2.5D line-of-sight through extruded building footprints.

#include <bsplace/core.hpp>

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace bsp {

using Polygon = std::vector<Vec2>;  // closed implicitly, counterclockwise

inline constexpr double kParamTol = 1e-9;

struct Box2 {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void expand(Vec2 p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  bool overlaps(const Box2& o) const {
    return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y;
  }
};

inline Box2 bounds_of(std::span<const Vec2> pts) {
  Box2 b;
  for (auto p : pts) b.expand(p);
  return b;
}

struct BuildingPrism {
  Polygon footprint;
  double base_elev = 0.0;
  double top_elev = 0.0;
  Box2 bounds;
};

inline BuildingPrism make_prism(Polygon footprint, double base_elev, double top_elev) {
  BuildingPrism p{std::move(footprint), base_elev, top_elev, {}};
  p.bounds = bounds_of(p.footprint);
  return p;
}

struct Segment3 {
  Vec3 a;
  Vec3 b;
  Vec3 at(double t) const {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, a.z + (b.z - a.z) * t};
  }
};

struct Interval {
  double t0 = 0.0;
  double t1 = 0.0;
  double length() const { return t1 - t0; }
};

inline double signed_area(std::span<const Vec2> poly) {
  double a = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

inline double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

inline double distance_to_boundary(Vec2 p, std::span<const Vec2> poly) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, n = poly.size(); i < n; ++i)
    d = std::min(d, distance_to_segment(p, poly[i], poly[(i + 1) % n]));
  return d;
}

inline bool on_boundary(Vec2 p, std::span<const Vec2> poly, double tol = kParamTol) {
  return distance_to_boundary(p, poly) <= tol;
}

// Even-odd rule; points on the boundary count as inside.
inline bool point_in_polygon(Vec2 p, std::span<const Vec2> poly) {
  if (poly.size() < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside || on_boundary(p, poly);
}

// Horizontal distance from p to the footprint; zero inside.
inline double distance_to_polygon(Vec2 p, std::span<const Vec2> poly) {
  return point_in_polygon(p, poly) ? 0.0 : distance_to_boundary(p, poly);
}

// Maximal parameter intervals of a + t(b - a), t in [0,1], lying inside or on
// the polygon. Touch points come back as zero-length intervals.
inline std::vector<Interval> segment_polygon_interval(Vec2 a, Vec2 b, std::span<const Vec2> poly) {
  std::vector<Interval> out;
  if (poly.size() < 3) return out;
  const Vec2 d = b - a;
  const double dd = dot(d, d);
  if (dd == 0.0) {
    if (point_in_polygon(a, poly)) out.push_back({0.0, 1.0});
    return out;
  }

  thread_local std::vector<double> ts;
  ts.assign({0.0, 1.0});
  const double dlen = std::sqrt(dd);
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Vec2 p = poly[i], q = poly[(i + 1) % n];
    const Vec2 e = q - p;
    const double elen = norm(e);
    if (elen == 0.0) continue;
    const double denom = cross(d, e);
    const Vec2 ap = p - a;
    if (std::abs(denom) > 1e-12 * dlen * elen) {
      const double t = cross(ap, e) / denom;
      const double u = cross(ap, d) / denom;
      if (t >= -kParamTol && t <= 1 + kParamTol && u >= -kParamTol && u <= 1 + kParamTol)
        ts.push_back(std::clamp(t, 0.0, 1.0));
    } else if (std::abs(cross(ap, d)) <= 1e-12 * dlen * std::max(1.0, norm(ap))) {
      // Collinear edge: its endpoints bound any overlap.
      for (Vec2 v : {p, q}) {
        const double t = dot(v - a, d) / dd;
        if (t >= 0.0 && t <= 1.0) ts.push_back(t);
      }
    }
  }
  std::sort(ts.begin(), ts.end());
  thread_local std::vector<double> cuts;
  cuts.clear();
  for (double t : ts)
    if (cuts.empty() || t - cuts.back() > 1e-12) cuts.push_back(t);

  auto at = [&](double t) { return a + t * d; };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double t0 = cuts[i], t1 = cuts[i + 1];
    if (!point_in_polygon(at(0.5 * (t0 + t1)), poly)) continue;
    if (!out.empty() && std::abs(out.back().t1 - t0) <= 1e-12)
      out.back().t1 = t1;
    else
      out.push_back({t0, t1});
  }
  // Isolated touch points.
  std::vector<Interval> touches;
  for (double t : cuts) {
    const bool covered = std::any_of(out.begin(), out.end(), [&](const Interval& iv) {
      return t >= iv.t0 - 1e-12 && t <= iv.t1 + 1e-12;
    });
    if (!covered && point_in_polygon(at(t), poly)) touches.push_back({t, t});
  }
  if (!touches.empty()) {
    out.insert(out.end(), touches.begin(), touches.end());
    std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.t0 < y.t0; });
  }
  return out;
}

// Parameter range over which a + t(b - a) lies in the box (Liang-Barsky).
inline std::optional<Interval> clip_to_box(Vec2 a, Vec2 b, const Box2& box, double pad = 1e-9) {
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = b - a;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - (box.lo.x - pad), (box.hi.x + pad) - a.x, a.y - (box.lo.y - pad), (box.hi.y + pad) - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) t0 = std::max(t0, r);
    else t1 = std::min(t1, r);
    if (t0 > t1) return std::nullopt;
  }
  return Interval{t0, t1};
}

// A link is blocked when it spends a positive parameter length inside a
// footprint while strictly below that prism's roof. Grazing counts as clear.
inline bool blocks(const Segment3& seg, const BuildingPrism& prism) {
  if (std::min(seg.a.z, seg.b.z) >= prism.top_elev - kParamTol) return false;
  const auto box = clip_to_box(seg.a.xy(), seg.b.xy(), prism.bounds);
  if (!box || std::min(seg.at(box->t0).z, seg.at(box->t1).z) >= prism.top_elev - kParamTol) return false;
  for (const auto& iv : segment_polygon_interval(seg.a.xy(), seg.b.xy(), prism.footprint)) {
    if (iv.length() <= kParamTol) continue;
    const double zmin = std::min(seg.at(iv.t0).z, seg.at(iv.t1).z);
    if (zmin < prism.top_elev - kParamTol) return true;
  }
  return false;
}

inline bool los_blocked(const Segment3& seg, std::span<const BuildingPrism> prisms) {
  return std::any_of(prisms.begin(), prisms.end(),
                     [&](const BuildingPrism& p) { return blocks(seg, p); });
}

}  // namespace bsp
