#pragma once

// Coverage probability curves and throughput CDFs over per-user results.

#include <bsplace/radio.hpp>

#include <map>
#include <stdexcept>
#include <vector>

namespace bsp {

struct CoverageCurve {
  std::vector<double> thresholds;  // dB
  std::vector<double> prob;        // P(SINR > threshold)
};

struct ThroughputCdf {
  std::vector<double> rates;  // Mbps, ascending
  std::vector<double> cdf;    // P(throughput <= rate)
  double outage = 0.0;        // P(throughput <= 0)
  double served = 0.0;        // P(throughput > 0)
};

inline void check_monotone(const CoverageCurve& c) {
  for (std::size_t i = 0; i < c.prob.size(); ++i) {
    if (c.prob[i] < 0.0 || c.prob[i] > 1.0 || (i > 0 && c.prob[i] > c.prob[i - 1]))
      throw std::logic_error("coverage curve is not a valid CCDF");
  }
}

inline CoverageCurve coverage_curve(std::span<const double> sinrs, double lo_db = -20.0, double hi_db = 40.0,
                                    double step_db = 0.5) {
  if (sinrs.empty()) throw Error(ErrorCode::EmptyInput, "coverage curve needs at least one SINR");
  if (!(step_db > 0) || !(hi_db >= lo_db)) throw Error(ErrorCode::InvalidConfig, "bad coverage grid");
  std::vector<double> sorted(sinrs.begin(), sinrs.end());
  std::sort(sorted.begin(), sorted.end());
  CoverageCurve c;
  const auto steps = static_cast<std::size_t>(std::llround((hi_db - lo_db) / step_db));
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = lo_db + static_cast<double>(i) * step_db;
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    c.thresholds.push_back(t);
    c.prob.push_back(static_cast<double>(above) / n);
  }
  check_monotone(c);
  return c;
}

inline std::vector<double> sinrs_of(std::span<const Attachment> att) {
  std::vector<double> s;
  s.reserve(att.size());
  for (const auto& a : att) s.push_back(a.sinr_db);
  return s;
}

// Equal-share throughput: each sector splits its bandwidth across everyone
// attached to it.
inline std::vector<double> user_throughputs(std::span<const Attachment> att, const RadioParams& params) {
  std::map<std::size_t, std::size_t> load;
  for (const auto& a : att) ++load[a.serving];
  std::vector<double> t;
  t.reserve(att.size());
  for (const auto& a : att) t.push_back(throughput_mbps(a.sinr_db, load[a.serving], params));
  return t;
}

inline ThroughputCdf throughput_cdf(std::span<const Attachment> att, const RadioParams& params) {
  if (att.empty()) throw Error(ErrorCode::EmptyInput, "throughput CDF needs at least one user");
  auto t = user_throughputs(att, params);
  std::sort(t.begin(), t.end());
  ThroughputCdf out;
  const double n = static_cast<double>(t.size());
  const auto zero = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), 0.0) - t.begin());
  out.outage = static_cast<double>(zero) / n;
  out.served = static_cast<double>(t.size() - zero) / n;
  if (zero == 0) {
    out.rates.push_back(0.0);
    out.cdf.push_back(0.0);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i + 1 < t.size() && t[i + 1] == t[i]) continue;
    out.rates.push_back(t[i]);
    out.cdf.push_back(i + 1 == t.size() ? 1.0 : static_cast<double>(i + 1) / n);
  }
  return out;
}

inline std::size_t users_above(std::span<const Attachment> att, double threshold_db) {
  return static_cast<std::size_t>(
      std::count_if(att.begin(), att.end(), [&](const Attachment& a) { return a.sinr_db > threshold_db; }));
}

inline double mean_sinr_db(std::span<const Attachment> att) {
  double s = 0.0;
  for (const auto& a : att) s += a.sinr_db;
  return att.empty() ? 0.0 : s / static_cast<double>(att.size());
}

}  // namespace bsp
