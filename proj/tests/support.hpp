// Shared fixtures for the test binaries: toy scenes, brute-force oracles,
// random generators and a small process runner for the CLI.
#pragma once

#include <bsplace/bsplace.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testkit {

using namespace bsp;
using Gen = std::mt19937_64;

inline double uniform(Gen& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }
inline int uniform_int(Gen& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

inline Polygon rect(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

// Star-shaped simple polygon, counterclockwise, possibly concave.
inline Polygon star_polygon(Gen& g, Vec2 c, double rmin, double rmax, int n) {
  Polygon p;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * (i + uniform(g, 0.1, 0.9)) / n;
    const double r = uniform(g, rmin, rmax);
    p.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return p;
}

// Crossing-number test written independently of the library.
inline bool inside_oracle(Vec2 p, const Polygon& poly) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

inline double seg_dist_oracle(Vec2 p, Vec2 a, Vec2 b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

inline double boundary_dist_oracle(Vec2 p, const Polygon& poly) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) d = std::min(d, seg_dist_oracle(p, poly[i], poly[(i + 1) % poly.size()]));
  return d;
}

// Random toy scene with rectangular buildings and users kept off roofs.
struct ToyShape {
  double extent = 400.0;
  int users = 30;
  int candidates = 10;
  int buildings = 6;
};

inline Scene toy_scene(std::uint64_t seed, const ToyShape& shape = {}) {
  Gen g(seed);
  Scene s;
  for (int b = 0; b < shape.buildings; ++b) {
    const double w = uniform(g, 15, 60), h = uniform(g, 15, 60);
    const double x = uniform(g, 0, shape.extent - w), y = uniform(g, 0, shape.extent - h);
    s.buildings.push_back(make_prism(rect(x, y, x + w, y + h), 0.0, uniform(g, 10, 45)));
  }
  auto covered = [&](Vec2 p) {
    for (const auto& b : s.buildings)
      if (inside_oracle(p, b.footprint)) return true;
    return false;
  };
  while (static_cast<int>(s.users.size()) < shape.users) {
    const Vec2 p{uniform(g, 0, shape.extent), uniform(g, 0, shape.extent)};
    if (covered(p)) continue;
    s.users.push_back({{p.x, p.y, 2.0}, uniform_int(g, 0, 1) == 1});
  }
  for (int c = 0; c < shape.candidates; ++c) {
    const Vec2 p{uniform(g, 0, shape.extent), uniform(g, 0, shape.extent)};
    s.candidates.push_back({static_cast<std::size_t>(c), {p.x, p.y, uniform(g, 20, 40)}});
  }
  return s;
}

// Objectives computed link by link without the precomputed table.
inline ObjectiveVector objectives_oracle(const Scene& s, const RadioParams& p, const std::vector<std::size_t>& sites,
                                         double thr, bool blockages) {
  std::vector<Vec3> pos;
  for (auto id : sites) pos.push_back(s.candidates[id].position);
  for (auto f : s.fixed_bs) pos.push_back(f);
  const auto sectors = sectors_for_sites(pos, p);
  const double noise = std::pow(10.0, thermal_noise_dbm(p) / 10.0);
  double sum = 0.0;
  int above = 0;
  for (const auto& u : s.users) {
    std::vector<double> rx;
    for (const auto& sec : sectors) rx.push_back(link_budget(u, sec, s.buildings, p, blockages).rx_power_dbm);
    std::size_t best = 0;
    for (std::size_t j = 1; j < rx.size(); ++j)
      if (rx[j] > rx[best]) best = j;
    double interf = 0.0;
    for (std::size_t j = 0; j < rx.size(); ++j)
      if (j != best) interf += std::pow(10.0, rx[j] / 10.0);
    const double sinr = 10.0 * std::log10(std::pow(10.0, rx[best] / 10.0) / (noise + interf));
    if (u.priority) sum += sinr;
    if (sinr > thr) ++above;
  }
  return {-sum, static_cast<int>(sites.size()), -above};
}

// Every subset of {0..n-1} with 1..kmax members.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t kmax) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > kmax) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

inline bool dominates_oracle(const ObjectiveVector& a, const ObjectiveVector& b) {
  const bool le = a.f1 <= b.f1 && a.f2 <= b.f2 && a.f3 <= b.f3;
  const bool lt = a.f1 < b.f1 || a.f2 < b.f2 || a.f3 < b.f3;
  return le && lt;
}

inline std::vector<ObjectiveVector> pareto_oracle(const std::vector<ObjectiveVector>& all) {
  std::vector<ObjectiveVector> out;
  for (const auto& a : all) {
    bool dominated = false;
    for (const auto& b : all) dominated = dominated || dominates_oracle(b, a);
    if (!dominated && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  return out;
}

// Peel non-dominated layers one at a time: O(n^3).
inline std::vector<std::vector<std::size_t>> fronts_oracle(const std::vector<ObjectiveVector>& v) {
  std::vector<std::size_t> left(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) left[i] = i;
  std::vector<std::vector<std::size_t>> fronts;
  while (!left.empty()) {
    std::vector<std::size_t> front, rest;
    for (auto i : left) {
      bool dominated = false;
      for (auto j : left) dominated = dominated || dominates_oracle(v[j], v[i]);
      (dominated ? rest : front).push_back(i);
    }
    fronts.push_back(front);
    left = rest;
  }
  return fronts;
}

inline bool near_eq(const ObjectiveVector& a, const ObjectiveVector& b, double tol = 1e-9) {
  return a.f2 == b.f2 && a.f3 == b.f3 && std::abs(a.f1 - b.f1) <= tol * std::max(1.0, std::abs(b.f1));
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("bsplace_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the CLI with stdout and stderr merged.
inline RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + BSPLACE_CLI + "\" " + args + " 2>&1";
  RunResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace testkit
