#pragma once

// JSON forms of configs, scenes and archives; CSV helpers.

#include <bsplace/baselines.hpp>
#include <bsplace/synth.hpp>

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>

namespace bsp {

using Json = nlohmann::json;

namespace detail {

template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad value for '") + key + "': " + e.what());
  }
}

inline void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, std::string(what) + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (auto* k : keys) known = known || it.key() == k;
    if (!known) throw Error(ErrorCode::InvalidConfig, std::string(what) + ": unknown key '" + it.key() + "'");
  }
}

inline Vec3 vec3_from(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::InvalidConfig, "expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace detail

inline Json to_json(Vec3 v) { return Json::array({v.x, v.y, v.z}); }

inline SceneConfig scene_config_from_json(const Json& j) {
  detail::reject_unknown(j, {"user_spacing_m", "candidate_pitch_m", "mast_height_m", "near_dist_m", "fixed_bs"},
                         "scene config");
  SceneConfig c;
  detail::read_opt(j, "user_spacing_m", c.user_spacing_m);
  detail::read_opt(j, "candidate_pitch_m", c.candidate_pitch_m);
  detail::read_opt(j, "mast_height_m", c.mast_height_m);
  detail::read_opt(j, "near_dist_m", c.near_dist_m);
  if (j.contains("fixed_bs"))
    for (const auto& p : j.at("fixed_bs")) c.fixed_bs.push_back(detail::vec3_from(p));
  c.validate();
  return c;
}

inline RadioParams radio_params_from_json(const Json& j) {
  detail::reject_unknown(j,
                         {"carrier_ghz", "hpbw_deg", "front_back_db", "nlos_penalty_db", "noise_figure_db",
                          "bandwidth_mhz", "tx_power_dbm", "antenna_gain_dbi", "min_coupling_loss_db",
                          "coverage_floor_db", "spectral_cap_db", "shadowing_sigma_db", "shadowing_seed"},
                         "radio config");
  RadioParams p;
  detail::read_opt(j, "carrier_ghz", p.carrier_ghz);
  detail::read_opt(j, "hpbw_deg", p.hpbw_deg);
  detail::read_opt(j, "front_back_db", p.front_back_db);
  detail::read_opt(j, "nlos_penalty_db", p.nlos_penalty_db);
  detail::read_opt(j, "noise_figure_db", p.noise_figure_db);
  detail::read_opt(j, "bandwidth_mhz", p.bandwidth_mhz);
  detail::read_opt(j, "tx_power_dbm", p.tx_power_dbm);
  detail::read_opt(j, "antenna_gain_dbi", p.antenna_gain_dbi);
  detail::read_opt(j, "min_coupling_loss_db", p.min_coupling_loss_db);
  detail::read_opt(j, "coverage_floor_db", p.coverage_floor_db);
  detail::read_opt(j, "spectral_cap_db", p.spectral_cap_db);
  detail::read_opt(j, "shadowing_sigma_db", p.shadowing_sigma_db);
  detail::read_opt(j, "shadowing_seed", p.shadowing_seed);
  p.validate();
  return p;
}

inline Json to_json(const RadioParams& p) {
  return {{"carrier_ghz", p.carrier_ghz},         {"hpbw_deg", p.hpbw_deg},
          {"front_back_db", p.front_back_db},     {"nlos_penalty_db", p.nlos_penalty_db},
          {"noise_figure_db", p.noise_figure_db}, {"bandwidth_mhz", p.bandwidth_mhz},
          {"tx_power_dbm", p.tx_power_dbm},       {"antenna_gain_dbi", p.antenna_gain_dbi},
          {"min_coupling_loss_db", p.min_coupling_loss_db}, {"coverage_floor_db", p.coverage_floor_db},
          {"spectral_cap_db", p.spectral_cap_db}, {"shadowing_sigma_db", p.shadowing_sigma_db},
          {"shadowing_seed", p.shadowing_seed}};
}

inline GaConfig ga_config_from_json(const Json& j) {
  detail::reject_unknown(j,
                         {"pop_size", "generations", "crossover_prob", "mutation_prob_per_bit", "seed", "M_max",
                          "sinr_threshold_db"},
                         "GA config");
  GaConfig c;
  detail::read_opt(j, "pop_size", c.pop_size);
  detail::read_opt(j, "generations", c.generations);
  detail::read_opt(j, "crossover_prob", c.crossover_prob);
  if (j.contains("mutation_prob_per_bit") && !j.at("mutation_prob_per_bit").is_null()) {
    double pm = 0;
    detail::read_opt(j, "mutation_prob_per_bit", pm);
    c.mutation_prob_per_bit = pm;
  }
  detail::read_opt(j, "seed", c.seed);
  detail::read_opt(j, "M_max", c.max_bs);
  detail::read_opt(j, "sinr_threshold_db", c.sinr_threshold_db);
  c.validate();
  return c;
}

inline Json to_json(const GaConfig& c) {
  Json j = {{"pop_size", c.pop_size}, {"generations", c.generations}, {"crossover_prob", c.crossover_prob},
            {"seed", c.seed},         {"M_max", c.max_bs},            {"sinr_threshold_db", c.sinr_threshold_db}};
  j["mutation_prob_per_bit"] = c.mutation_prob_per_bit ? Json(*c.mutation_prob_per_bit) : Json(nullptr);
  return j;
}

inline SynthConfig synth_config_from_json(const Json& j) {
  detail::reject_unknown(j,
                         {"width", "height", "cell_size", "building_density", "building_min_m", "building_max_m",
                          "height_min_m", "height_max_m", "terrain_amplitude_m", "hills", "road_spacing_m",
                          "road_width_m", "tree_fraction", "clutter_fraction", "cars"},
                         "synth config");
  SynthConfig c;
  detail::read_opt(j, "width", c.width);
  detail::read_opt(j, "height", c.height);
  detail::read_opt(j, "cell_size", c.cell_size);
  detail::read_opt(j, "building_density", c.building_density);
  detail::read_opt(j, "building_min_m", c.building_min_m);
  detail::read_opt(j, "building_max_m", c.building_max_m);
  detail::read_opt(j, "height_min_m", c.height_min_m);
  detail::read_opt(j, "height_max_m", c.height_max_m);
  detail::read_opt(j, "terrain_amplitude_m", c.terrain_amplitude_m);
  detail::read_opt(j, "hills", c.hills);
  detail::read_opt(j, "road_spacing_m", c.road_spacing_m);
  detail::read_opt(j, "road_width_m", c.road_width_m);
  detail::read_opt(j, "tree_fraction", c.tree_fraction);
  detail::read_opt(j, "clutter_fraction", c.clutter_fraction);
  detail::read_opt(j, "cars", c.cars);
  c.validate();
  return c;
}

inline Json scene_to_json(const Scene& s) {
  Json b = Json::array();
  for (const auto& p : s.buildings) {
    Json fp = Json::array();
    for (auto v : p.footprint) fp.push_back({v.x, v.y});
    b.push_back({{"footprint", fp}, {"base_elev", p.base_elev}, {"top_elev", p.top_elev}});
  }
  Json u = Json::array();
  for (const auto& x : s.users) u.push_back({{"position", to_json(x.position)}, {"priority", x.priority}});
  Json c = Json::array();
  for (const auto& x : s.candidates) c.push_back({{"id", x.id}, {"position", to_json(x.position)}});
  Json f = Json::array();
  for (auto p : s.fixed_bs) f.push_back(to_json(p));
  return {{"buildings", b}, {"users", u}, {"candidates", c}, {"fixed_bs", f}};
}

inline Scene scene_from_json(const Json& j) {
  Scene s;
  try {
    for (const auto& b : j.at("buildings")) {
      Polygon fp;
      for (const auto& v : b.at("footprint")) fp.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      if (fp.size() < 3) throw Error(ErrorCode::InvalidConfig, "footprint needs at least 3 vertices");
      s.buildings.push_back(make_prism(std::move(fp), b.at("base_elev").get<double>(), b.at("top_elev").get<double>()));
    }
    for (const auto& u : j.at("users")) s.users.push_back({detail::vec3_from(u.at("position")), u.at("priority").get<bool>()});
    for (const auto& c : j.at("candidates")) {
      const auto id = c.at("id").get<std::size_t>();
      if (id != s.candidates.size()) throw Error(ErrorCode::InvalidConfig, "candidate ids must be dense and ordered");
      s.candidates.push_back({id, detail::vec3_from(c.at("position"))});
    }
    if (j.contains("fixed_bs"))
      for (const auto& f : j.at("fixed_bs")) s.fixed_bs.push_back(detail::vec3_from(f));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed scene: ") + e.what());
  }
  if (s.users.empty() || s.candidates.empty()) throw Error(ErrorCode::EmptyScene, "scene needs users and candidates");
  return s;
}

inline Json to_json(const ObjectiveVector& o) { return {{"f1", o.f1}, {"f2", o.f2}, {"f3", o.f3}}; }

// Infinite crowding distances are written as the string "inf".
inline Json crowding_json(double c) { return std::isinf(c) ? Json("inf") : Json(c); }

inline Json to_json(const Individual& ind, std::size_t fixed_bs_count) {
  return {{"sites", ind.sites},
          {"fixed_bs_count", fixed_bs_count},
          {"objectives", to_json(ind.objectives)},
          {"rank", ind.rank},
          {"crowding", crowding_json(ind.crowding)}};
}

inline Json to_json(const ParetoArchive& a) {
  Json inds = Json::array();
  for (const auto& i : a.individuals) inds.push_back(to_json(i, a.fixed_bs_count));
  return {{"fixed_bs_count", a.fixed_bs_count}, {"individuals", inds}};
}

inline ParetoArchive archive_from_json(const Json& j) {
  ParetoArchive a;
  try {
    a.fixed_bs_count = j.at("fixed_bs_count").get<std::size_t>();
    for (const auto& x : j.at("individuals")) {
      Individual ind;
      ind.sites = x.at("sites").get<std::vector<std::size_t>>();
      const auto& o = x.at("objectives");
      ind.objectives = {o.at("f1").get<double>(), o.at("f2").get<int>(), o.at("f3").get<int>()};
      ind.rank = x.at("rank").get<std::size_t>();
      const auto& c = x.at("crowding");
      ind.crowding = c.is_string() ? std::numeric_limits<double>::infinity() : c.get<double>();
      a.individuals.push_back(std::move(ind));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed archive: ") + e.what());
  }
  return a;
}

inline Json to_json(const std::vector<GenerationRecord>& history) {
  Json out = Json::array();
  for (const auto& g : history) {
    Json per = Json::array();
    for (const auto& b : g.front0_best) per.push_back({{"m", b.m}, {"best_f1", b.best_f1}, {"best_f3", b.best_f3}});
    out.push_back({{"generation", g.generation}, {"front0", per}});
  }
  return out;
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
  }
}

// Write to a sibling temp file, then rename over the target.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline void save_json(const std::filesystem::path& path, const Json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

// Shortest round-trip decimal form.
inline std::string fmt_num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace bsp
