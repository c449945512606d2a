#pragma once

// LTE downlink link budget: macro path loss, three-sector horizontal antenna
// pattern, max-power association and SINR.

#include <bsplace/scene.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace bsp {

struct RadioParams {
  double carrier_ghz = 2.0;
  double hpbw_deg = 65.0;
  double front_back_db = 20.0;
  double nlos_penalty_db = 20.0;
  double noise_figure_db = 9.0;
  double bandwidth_mhz = 10.0;
  double tx_power_dbm = 43.0;
  double antenna_gain_dbi = 15.0;
  double min_coupling_loss_db = 70.0;
  double coverage_floor_db = -10.0;   // below this a user is in outage
  double spectral_cap_db = 22.0;      // SINR beyond which rate stops growing
  double shadowing_sigma_db = 0.0;    // 0 disables log-normal shadowing
  std::uint64_t shadowing_seed = 0;

  void validate() const {
    for (double v : {carrier_ghz, hpbw_deg, front_back_db, noise_figure_db, bandwidth_mhz,
                     min_coupling_loss_db})
      if (!(v > 0) || !std::isfinite(v))
        throw Error(ErrorCode::InvalidConfig, "radio parameters must be positive and finite");
    if (!std::isfinite(tx_power_dbm) || !std::isfinite(antenna_gain_dbi) || !(nlos_penalty_db >= 0) ||
        !(shadowing_sigma_db >= 0))
      throw Error(ErrorCode::InvalidConfig, "tx power, gain, NLoS penalty or shadowing invalid");
  }
};

struct BsSector {
  Vec3 position;
  double azimuth_deg = 0.0;  // 0 = +x, counterclockwise
  double tx_power_dbm = 43.0;
  double antenna_gain_dbi = 15.0;
};

struct LinkBudget {
  double pathloss_db = 0.0;
  double antenna_gain_db = 0.0;
  bool los = true;
  double rx_power_dbm = 0.0;
};

struct Attachment {
  std::size_t serving = 0;
  double sinr_db = 0.0;
};

inline constexpr double kSectorAzimuths[3] = {0.0, 120.0, 240.0};

inline std::vector<BsSector> sectors_for_site(Vec3 position, const RadioParams& params) {
  std::vector<BsSector> out;
  for (double az : kSectorAzimuths) out.push_back({position, az, params.tx_power_dbm, params.antenna_gain_dbi});
  return out;
}

inline std::vector<BsSector> sectors_for_sites(std::span<const Vec3> positions, const RadioParams& params) {
  std::vector<BsSector> out;
  for (auto p : positions)
    for (auto& s : sectors_for_site(p, params)) out.push_back(s);
  return out;
}

// 3GPP macro-cell model with a 15 m antenna height above rooftops.
inline double pathloss_db(double distance_3d, const RadioParams& params) {
  if (!(distance_3d > 0)) throw Error(ErrorCode::NonPositiveDistance, "path loss needs a positive distance");
  const double r_km = std::max(distance_3d, 10.0) / 1000.0;
  return 128.1 + 37.6 * std::log10(r_km) + 21.0 * std::log10(params.carrier_ghz / 2.0);
}

inline double antenna_attenuation_db(double angle_off_boresight_deg, const RadioParams& params) {
  const double r = angle_off_boresight_deg / params.hpbw_deg;
  return std::min(12.0 * r * r, params.front_back_db);
}

inline double wrap_angle_deg(double a) {
  a = std::fmod(a, 360.0);
  if (a > 180.0) a -= 360.0;
  if (a < -180.0) a += 360.0;
  return a;
}

inline double thermal_noise_dbm(const RadioParams& params) {
  return -174.0 + 10.0 * std::log10(params.bandwidth_mhz * 1e6) + params.noise_figure_db;
}

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable per-link standard normal keyed on the two end points.
inline double link_normal(std::uint64_t seed, Vec3 a, Vec3 b) {
  std::uint64_t h = splitmix(seed);
  for (double v : {a.x, a.y, a.z, b.x, b.y, b.z}) h = splitmix(h ^ std::bit_cast<std::uint64_t>(v));
  const double u1 = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = (static_cast<double>(splitmix(h) >> 11) + 0.5) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace detail

// Link budget with the line-of-sight verdict supplied by the caller.
inline LinkBudget link_budget_given_los(const User& user, const BsSector& sector, bool los, const RadioParams& params) {
  const Vec3 bs = sector.position, ue = user.position;
  const double d = std::max(distance(bs, ue), 1e-3);
  LinkBudget lb;
  lb.pathloss_db = pathloss_db(d, params);
  const double dx = ue.x - bs.x, dy = ue.y - bs.y;
  const double bearing = (dx == 0.0 && dy == 0.0) ? sector.azimuth_deg : std::atan2(dy, dx) * 180.0 / std::numbers::pi;
  lb.antenna_gain_db = sector.antenna_gain_dbi - antenna_attenuation_db(wrap_angle_deg(bearing - sector.azimuth_deg), params);
  lb.los = los;
  double coupling = lb.pathloss_db - lb.antenna_gain_db + (lb.los ? 0.0 : params.nlos_penalty_db);
  if (params.shadowing_sigma_db > 0.0)
    coupling += params.shadowing_sigma_db * detail::link_normal(params.shadowing_seed, bs, ue);
  lb.rx_power_dbm = sector.tx_power_dbm - std::max(coupling, params.min_coupling_loss_db);
  return lb;
}

inline LinkBudget link_budget(const User& user, const BsSector& sector, std::span<const BuildingPrism> prisms,
                              const RadioParams& params, bool use_blockages) {
  const bool los = !use_blockages || !los_blocked({sector.position, user.position}, prisms);
  return link_budget_given_los(user, sector, los, params);
}

inline LinkBudget link_budget(const User& user, const BsSector& sector, const Scene& scene,
                              const RadioParams& params, bool use_blockages) {
  return link_budget(user, sector, scene.buildings, params, use_blockages);
}

// SINR in dB for a given serving entry of per-sector received powers (mW).
inline double sinr_from_rx(std::span<const double> rx_mw, std::size_t serving, double noise_mw) {
  double interference_mw = 0.0;
  for (std::size_t j = 0; j < rx_mw.size(); ++j)
    if (j != serving) interference_mw += rx_mw[j];
  return linear_to_db(rx_mw[serving] / (noise_mw + interference_mw));
}

// Strongest sector wins; ties go to the lowest index.
inline Attachment serve_from_rx(std::span<const double> rx_dbm, std::span<const double> rx_mw, double noise_mw) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < rx_dbm.size(); ++j)
    if (rx_dbm[j] > rx_dbm[best]) best = j;
  return {best, sinr_from_rx(rx_mw, best, noise_mw)};
}

inline double sinr_db(const User& user, std::size_t serving, std::span<const BsSector> sectors,
                      std::span<const BuildingPrism> prisms, const RadioParams& params, bool use_blockages) {
  std::vector<double> rx_mw(sectors.size());
  for (std::size_t j = 0; j < sectors.size(); ++j)
    rx_mw[j] = db_to_linear(link_budget(user, sectors[j], prisms, params, use_blockages).rx_power_dbm);
  return sinr_from_rx(rx_mw, serving, db_to_linear(thermal_noise_dbm(params)));
}

inline std::vector<Attachment> attach_and_evaluate(std::span<const User> users, std::span<const BsSector> sectors,
                                                   std::span<const BuildingPrism> prisms, const RadioParams& params,
                                                   bool use_blockages) {
  if (sectors.empty()) throw Error(ErrorCode::NoSectors, "cannot attach users without sectors");
  const double noise_mw = db_to_linear(thermal_noise_dbm(params));
  std::vector<Attachment> out(users.size());
  parallel_for(users.size(), [&](std::size_t u) {
    std::vector<double> rx(sectors.size()), mw(sectors.size());
    for (std::size_t j = 0; j < sectors.size(); ++j) {
      rx[j] = link_budget(users[u], sectors[j], prisms, params, use_blockages).rx_power_dbm;
      mw[j] = db_to_linear(rx[j]);
    }
    out[u] = serve_from_rx(rx, mw, noise_mw);
  });
  return out;
}

inline std::vector<Attachment> attach_and_evaluate(std::span<const BsSector> sectors, const Scene& scene,
                                                   const RadioParams& params, bool use_blockages) {
  return attach_and_evaluate(scene.users, sectors, scene.buildings, params, use_blockages);
}

inline double throughput_mbps(double sinr, std::size_t n_attached, const RadioParams& params) {
  if (sinr < params.coverage_floor_db) return 0.0;
  const double lin = std::min(db_to_linear(sinr), db_to_linear(params.spectral_cap_db));
  return params.bandwidth_mhz / static_cast<double>(std::max<std::size_t>(n_attached, 1)) * std::log2(1.0 + lin);
}

// Received power from every sector of every site to every user, computed once
// so that evaluating a configuration is a gather plus an SINR sum.
class LinkTable {
 public:
  LinkTable(std::span<const Vec3> sites, std::span<const User> users, std::span<const BuildingPrism> prisms,
            const RadioParams& params, bool use_blockages)
      : n_sites_(sites.size()), n_users_(users.size()), noise_mw_(db_to_linear(thermal_noise_dbm(params))),
        dbm_(n_sites_ * 3 * n_users_), mw_(dbm_.size()) {
    std::vector<BsSector> sectors = sectors_for_sites(sites, params);
    parallel_for(n_users_, [&](std::size_t u) {
      bool los = true;
      for (std::size_t s = 0; s < sectors.size(); ++s) {
        // The three sectors of a site share one line-of-sight test.
        if (s % 3 == 0) los = !use_blockages || !los_blocked({sectors[s].position, users[u].position}, prisms);
        const double rx = link_budget_given_los(users[u], sectors[s], los, params).rx_power_dbm;
        dbm_[s * n_users_ + u] = rx;
        mw_[s * n_users_ + u] = db_to_linear(rx);
      }
    });
  }

  std::size_t sites() const { return n_sites_; }
  std::size_t users() const { return n_users_; }
  double rx_dbm(std::size_t site, std::size_t sector, std::size_t user) const {
    return dbm_[(site * 3 + sector) * n_users_ + user];
  }

  // Sequential over users; callers parallelise across configurations.
  std::vector<Attachment> evaluate(std::span<const std::size_t> site_ids) const {
    std::vector<Attachment> out(n_users_);
    std::vector<double> dbm(site_ids.size() * 3), mw(site_ids.size() * 3);
    for (std::size_t u = 0; u < n_users_; ++u) {
      for (std::size_t k = 0; k < site_ids.size(); ++k)
        for (std::size_t s = 0; s < 3; ++s) {
          const std::size_t i = (site_ids[k] * 3 + s) * n_users_ + u;
          dbm[k * 3 + s] = dbm_[i];
          mw[k * 3 + s] = mw_[i];
        }
      out[u] = serve_from_rx(dbm, mw, noise_mw_);
    }
    return out;
  }

 private:
  std::size_t n_sites_;
  std::size_t n_users_;
  double noise_mw_;
  std::vector<double> dbm_;
  std::vector<double> mw_;
};

}  // namespace bsp
