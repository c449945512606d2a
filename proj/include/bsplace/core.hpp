#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bsp {

inline constexpr const char* kVersion = "0.3.0";

enum class ErrorCode {
  Io,
  MalformedGrid,
  UnknownClassCode,
  DimensionMismatch,
  NoValidUserCells,
  NoCandidates,
  NonPositiveDistance,
  NoSectors,
  NoSolutionForM,
  InvalidConfig,
  EmptyInput,
  EmptyScene,
  UnknownSite,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::MalformedGrid: return "MalformedGrid";
    case ErrorCode::UnknownClassCode: return "UnknownClassCode";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoValidUserCells: return "NoValidUserCells";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorCode::NoSectors: return "NoSectors";
    case ErrorCode::NoSolutionForM: return "NoSolutionForM";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyScene: return "EmptyScene";
    case ErrorCode::UnknownSite: return "UnknownSite";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  Vec2 xy() const { return {x, y}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }

inline double distance(Vec3 a, Vec3 b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Worker cap shared by every parallel map in the library. 0 = hardware concurrency.
inline std::atomic<unsigned> g_max_threads{0};

inline void set_max_threads(unsigned n) { g_max_threads.store(n); }

inline unsigned worker_count(std::size_t work_items) {
  unsigned n = g_max_threads.load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, work_items)));
}

// Static block partition of [0, n). Each index is written by exactly one
// worker, so results never depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers = worker_count(n);
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, w, &fn, &failures] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

}  // namespace bsp
