#pragma once

// NSGA-II over binary-encoded base-station configurations, plus the
// single-objective GA used as a baseline.
//
// Objectives (all minimised):
//   f1 = -sum of SINR (dB) over priority users
//   f2 = number of newly deployed base stations
//   f3 = -number of users whose SINR exceeds the threshold

#include <bsplace/radio.hpp>

#include <array>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <vector>

namespace bsp {

struct GaConfig {
  std::size_t pop_size = 40;
  std::size_t generations = 100;
  double crossover_prob = 0.9;
  std::optional<double> mutation_prob_per_bit;  // default 1 / chromosome bits
  std::uint64_t seed = 0;
  std::size_t max_bs = 6;
  double sinr_threshold_db = 10.0;

  void validate() const {
    if (pop_size < 4 || pop_size % 2 != 0)
      throw Error(ErrorCode::InvalidConfig, "pop_size must be even and at least 4");
    if (!(crossover_prob >= 0 && crossover_prob <= 1))
      throw Error(ErrorCode::InvalidConfig, "crossover_prob must lie in [0,1]");
    if (mutation_prob_per_bit && !(*mutation_prob_per_bit >= 0 && *mutation_prob_per_bit <= 1))
      throw Error(ErrorCode::InvalidConfig, "mutation_prob_per_bit must lie in [0,1]");
    if (max_bs < 1) throw Error(ErrorCode::InvalidConfig, "max_bs must be at least 1");
    if (!std::isfinite(sinr_threshold_db)) throw Error(ErrorCode::InvalidConfig, "sinr_threshold_db must be finite");
  }
};

struct ObjectiveVector {
  double f1 = 0.0;
  int f2 = 0;
  int f3 = 0;

  static constexpr std::size_t size() { return 3; }
  double operator[](std::size_t i) const { return i == 0 ? f1 : i == 1 ? f2 : f3; }
  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

// a <= b everywhere and a < b somewhere.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  bool strict = false;
  for (std::size_t i = 0; i < ObjectiveVector::size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

// Fast non-dominated sort; fronts hold indices in ascending order.
inline std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const ObjectiveVector> pop) {
  const std::size_t n = pop.size();
  std::vector<std::vector<std::size_t>> dominated_by_me(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(pop[p], pop[q])) dominated_by_me[p].push_back(q);
      else if (dominates(pop[q], pop[p])) ++domination_count[p];
    }
    if (domination_count[p] == 0) current.push_back(p);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : current)
      for (std::size_t q : dominated_by_me[p])
        if (--domination_count[q] == 0) next.push_back(q);
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

inline std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
  const std::size_t n = front.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < ObjectiveVector::size(); ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][k] < front[b][k]; });
    const double lo = front[order.front()][k], hi = front[order.back()][k];
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    const double range = hi - lo;
    if (range <= 0.0) continue;
    for (std::size_t i = 1; i + 1 < n; ++i)
      dist[order[i]] += (front[order[i + 1]][k] - front[order[i - 1]][k]) / range;
  }
  return dist;
}

// Slot layout: [active bit][index bits, MSB first] repeated max_bs times.
struct ChromosomeLayout {
  std::size_t slots = 1;
  std::size_t index_bits = 1;
  std::size_t candidates = 1;

  static ChromosomeLayout make(std::size_t slots, std::size_t candidates) {
    std::size_t bits = 1;
    while ((std::size_t{1} << bits) < candidates) ++bits;
    return {slots, bits, candidates};
  }
  std::size_t slot_bits() const { return 1 + index_bits; }
  std::size_t total_bits() const { return slots * slot_bits(); }
};

struct Chromosome {
  std::vector<std::uint8_t> bits;
  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

inline bool slot_active(const Chromosome& c, const ChromosomeLayout& l, std::size_t slot) {
  return c.bits[slot * l.slot_bits()] != 0;
}

inline std::size_t slot_value(const Chromosome& c, const ChromosomeLayout& l, std::size_t slot) {
  std::size_t v = 0;
  const std::size_t base = slot * l.slot_bits() + 1;
  for (std::size_t b = 0; b < l.index_bits; ++b) v = (v << 1) | c.bits[base + b];
  return v;
}

inline void set_slot(Chromosome& c, const ChromosomeLayout& l, std::size_t slot, bool active, std::size_t value) {
  const std::size_t base = slot * l.slot_bits();
  c.bits[base] = active ? 1 : 0;
  for (std::size_t b = 0; b < l.index_bits; ++b)
    c.bits[base + 1 + b] = static_cast<std::uint8_t>((value >> (l.index_bits - 1 - b)) & 1u);
}

// Active candidate ids in ascending order (assumes a repaired chromosome).
inline std::vector<std::size_t> active_sites(const Chromosome& c, const ChromosomeLayout& l) {
  std::vector<std::size_t> sites;
  for (std::size_t s = 0; s < l.slots; ++s)
    if (slot_active(c, l, s)) sites.push_back(slot_value(c, l, s) % l.candidates);
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

inline Chromosome encode(std::span<const std::size_t> sites, const ChromosomeLayout& l) {
  Chromosome c{std::vector<std::uint8_t>(l.total_bits(), 0)};
  for (std::size_t s = 0; s < l.slots; ++s)
    set_slot(c, l, s, s < sites.size(), s < sites.size() ? sites[s] : 0);
  return c;
}

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline std::size_t uniform_index(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

// Out-of-range indices wrap modulo C, later duplicates switch off, and an
// all-inactive chromosome gets one random slot switched on.
inline void repair(Chromosome& c, const ChromosomeLayout& l, Rng& rng) {
  std::set<std::size_t> used;
  bool any = false;
  for (std::size_t s = 0; s < l.slots; ++s) {
    const std::size_t v = slot_value(c, l, s) % l.candidates;
    bool active = slot_active(c, l, s);
    if (active && !used.insert(v).second) active = false;
    any = any || active;
    set_slot(c, l, s, active, v);
  }
  if (!any) {
    const std::size_t s = uniform_index(rng, l.slots);
    set_slot(c, l, s, true, slot_value(c, l, s));
  }
}

// Fixed-count variant: every slot active, duplicates move to the next free id.
inline void repair_fixed_count(Chromosome& c, const ChromosomeLayout& l) {
  std::set<std::size_t> used;
  for (std::size_t s = 0; s < l.slots; ++s) {
    std::size_t v = slot_value(c, l, s) % l.candidates;
    while (used.count(v)) v = (v + 1) % l.candidates;
    used.insert(v);
    set_slot(c, l, s, true, v);
  }
}

struct Individual {
  Chromosome chromosome;
  std::vector<std::size_t> sites;
  ObjectiveVector objectives;
  std::size_t rank = 0;
  double crowding = 0.0;
};

inline ObjectiveVector objectives_from(std::span<const Attachment> att, std::span<const User> users,
                                       std::size_t deployed, double threshold_db) {
  ObjectiveVector o;
  double sum = 0.0;
  int above = 0;
  for (std::size_t u = 0; u < users.size(); ++u) {
    if (users[u].priority) sum += att[u].sinr_db;
    if (att[u].sinr_db > threshold_db) ++above;
  }
  o.f1 = -sum;
  o.f2 = static_cast<int>(deployed);
  o.f3 = -above;
  return o;
}

// Scores configurations of candidate ids against a precomputed link table.
// Fixed prior base stations always transmit and are not counted in f2.
class Evaluator {
 public:
  Evaluator(const Scene& scene, const RadioParams& params, bool use_blockages, double threshold_db)
      : users_(scene.users), n_candidates_(scene.candidates.size()), n_fixed_(scene.fixed_bs.size()),
        threshold_db_(threshold_db), table_(site_positions(scene), scene.users, scene.buildings, params, use_blockages) {
    if (scene.users.empty() || scene.candidates.empty())
      throw Error(ErrorCode::EmptyScene, "scene needs users and candidates");
  }

  std::size_t candidates() const { return n_candidates_; }
  std::size_t fixed_count() const { return n_fixed_; }
  double threshold_db() const { return threshold_db_; }
  std::span<const User> users() const { return users_; }
  const LinkTable& table() const { return table_; }

  // Table columns for a configuration: sorted new sites, then fixed stations.
  std::vector<std::size_t> columns(std::span<const std::size_t> sites) const {
    std::vector<std::size_t> cols(sites.begin(), sites.end());
    std::sort(cols.begin(), cols.end());
    for (std::size_t f = 0; f < n_fixed_; ++f) cols.push_back(n_candidates_ + f);
    return cols;
  }

  std::vector<Attachment> attach(std::span<const std::size_t> sites) const {
    if (sites.empty() && n_fixed_ == 0) throw Error(ErrorCode::NoSectors, "configuration has no base stations");
    for (auto s : sites)
      if (s >= n_candidates_) throw Error(ErrorCode::UnknownSite, "candidate id " + std::to_string(s) + " out of range");
    return table_.evaluate(columns(sites));
  }

  ObjectiveVector evaluate(std::span<const std::size_t> sites) const {
    const auto att = attach(sites);
    return objectives_from(att, users_, sites.size(), threshold_db_);
  }

 private:
  static std::vector<Vec3> site_positions(const Scene& scene) {
    std::vector<Vec3> pos;
    for (const auto& c : scene.candidates) pos.push_back(c.position);
    for (const auto& f : scene.fixed_bs) pos.push_back(f);
    return pos;
  }

  std::vector<User> users_;
  std::size_t n_candidates_;
  std::size_t n_fixed_;
  double threshold_db_;
  LinkTable table_;
};

inline ObjectiveVector evaluate(const Chromosome& c, const ChromosomeLayout& layout, const Scene& scene,
                                const RadioParams& params, bool use_blockages, double threshold_db = 10.0) {
  const Evaluator ev(scene, params, use_blockages, threshold_db);
  return ev.evaluate(active_sites(c, layout));
}

struct ParetoArchive {
  std::vector<Individual> individuals;
  std::size_t fixed_bs_count = 0;

  std::vector<const Individual*> front0() const {
    std::vector<const Individual*> out;
    for (const auto& i : individuals)
      if (i.rank == 0) out.push_back(&i);
    return out;
  }
};

struct BestPerM {
  int m = 0;
  double best_f1 = 0.0;
  int best_f3 = 0;
};

struct GenerationRecord {
  std::size_t generation = 0;
  std::vector<BestPerM> front0_best;  // ascending m, only counts present in front 0
};

struct Nsga2Result {
  ParetoArchive archive;
  std::vector<GenerationRecord> history;
};

namespace detail {

inline void assign_rank_crowding(std::vector<Individual>& pop) {
  std::vector<ObjectiveVector> objs;
  for (const auto& i : pop) objs.push_back(i.objectives);
  const auto fronts = non_dominated_sort(objs);
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    std::vector<ObjectiveVector> fo;
    for (auto i : fronts[r]) fo.push_back(objs[i]);
    const auto cd = crowding_distance(fo);
    for (std::size_t k = 0; k < fronts[r].size(); ++k) {
      pop[fronts[r][k]].rank = r;
      pop[fronts[r][k]].crowding = cd[k];
    }
  }
}

// Crowded-comparison binary tournament.
inline std::size_t tournament(const std::vector<Individual>& pop, Rng& rng) {
  const std::size_t a = uniform_index(rng, pop.size());
  const std::size_t b = uniform_index(rng, pop.size());
  const auto& x = pop[a];
  const auto& y = pop[b];
  if (x.rank != y.rank) return x.rank < y.rank ? a : b;
  if (x.crowding != y.crowding) return x.crowding > y.crowding ? a : b;
  return std::min(a, b);
}

inline void vary(Chromosome& c1, Chromosome& c2, double pc, double pm, Rng& rng) {
  if (uniform01(rng) < pc) {
    for (std::size_t b = 0; b < c1.bits.size(); ++b)
      if (rng() & 1u) std::swap(c1.bits[b], c2.bits[b]);
  }
  for (auto* c : {&c1, &c2})
    for (auto& bit : c->bits)
      if (uniform01(rng) < pm) bit ^= 1u;
}

inline void evaluate_all(std::vector<Individual>& pop, const Evaluator& ev) {
  parallel_for(pop.size(), [&](std::size_t i) { pop[i].objectives = ev.evaluate(pop[i].sites); });
}

// First occurrence of each site set, then the repeats.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_duplicates(
    const std::vector<Individual>& pop) {
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> unique, repeats;
  for (std::size_t i = 0; i < pop.size(); ++i)
    (seen.insert(pop[i].sites).second ? unique : repeats).push_back(i);
  return {unique, repeats};
}

// Best (f3, then f1) member of `pool` for each deployed-station count.
inline std::vector<std::size_t> best_per_count(const std::vector<Individual>& all, std::span<const std::size_t> pool) {
  std::map<int, std::size_t> best;
  for (auto i : pool) {
    const auto& o = all[i].objectives;
    auto [it, fresh] = best.try_emplace(o.f2, i);
    const auto& cur = all[it->second].objectives;
    if (!fresh && std::pair(o.f3, o.f1) < std::pair(cur.f3, cur.f1)) it->second = i;
  }
  std::vector<std::size_t> out;
  for (auto [m, i] : best) out.push_back(i);
  return out;
}

// Elitist (mu + lambda) survivor selection by fronts and crowding. The best
// configuration found so far for every station count is carried over first,
// so the final population always offers a candidate for each count reached.
inline std::vector<Individual> survivors(std::vector<Individual> combined, std::size_t n) {
  auto [unique, repeats] = split_duplicates(combined);
  std::vector<char> taken(combined.size(), 0);
  std::vector<std::size_t> chosen;
  for (auto i : best_per_count(combined, unique)) {
    if (chosen.size() == n) break;
    chosen.push_back(i);
    taken[i] = 1;
  }
  std::vector<ObjectiveVector> objs;
  for (auto i : unique) objs.push_back(combined[i].objectives);
  for (const auto& front : non_dominated_sort(objs)) {
    std::vector<std::size_t> open;
    for (auto k : front)
      if (!taken[unique[k]]) open.push_back(k);
    if (chosen.size() + open.size() <= n) {
      for (auto k : open) chosen.push_back(unique[k]);
      if (chosen.size() == n) break;
      continue;
    }
    // Crowding over the whole front, admitting the least crowded first.
    std::vector<ObjectiveVector> fo;
    for (auto k : front) fo.push_back(objs[k]);
    const auto cd = crowding_distance(fo);
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < front.size(); ++j)
      if (!taken[unique[front[j]]]) order.push_back(j);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
    for (std::size_t j = 0; chosen.size() < n && j < order.size(); ++j) chosen.push_back(unique[front[order[j]]]);
    break;
  }
  for (std::size_t j = 0; chosen.size() < n && j < repeats.size(); ++j) chosen.push_back(repeats[j]);
  std::vector<Individual> next;
  next.reserve(n);
  for (auto i : chosen) next.push_back(std::move(combined[i]));
  return next;
}

inline GenerationRecord record(std::size_t gen, const std::vector<Individual>& pop) {
  std::map<int, BestPerM> best;
  for (const auto& ind : pop) {
    if (ind.rank != 0) continue;
    const auto& o = ind.objectives;
    auto [it, fresh] = best.try_emplace(o.f2, BestPerM{o.f2, o.f1, o.f3});
    if (!fresh) {
      it->second.best_f1 = std::min(it->second.best_f1, o.f1);
      it->second.best_f3 = std::min(it->second.best_f3, o.f3);
    }
  }
  GenerationRecord r{gen, {}};
  for (auto& [m, b] : best) r.front0_best.push_back(b);
  return r;
}

inline double mutation_rate(const GaConfig& cfg, const ChromosomeLayout& l) {
  return cfg.mutation_prob_per_bit.value_or(1.0 / static_cast<double>(l.total_bits()));
}

}  // namespace detail

inline Nsga2Result run_nsga2(const Evaluator& ev, const GaConfig& cfg) {
  cfg.validate();
  const auto layout = ChromosomeLayout::make(cfg.max_bs, ev.candidates());
  const double pm = detail::mutation_rate(cfg, layout);
  Rng rng(cfg.seed);

  // Active-slot counts cycle through 1..max_bs so every station count is
  // seeded. Active slots get distinct random sites; the rest stay random bits.
  std::vector<Individual> pop(cfg.pop_size);
  std::vector<std::size_t> ids(layout.candidates);
  std::vector<std::size_t> slots(layout.slots);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    auto& ind = pop[i];
    ind.chromosome.bits.resize(layout.total_bits());
    for (auto& b : ind.chromosome.bits) b = static_cast<std::uint8_t>(rng() & 1u);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    const std::size_t want = std::min(1 + i % layout.slots, layout.candidates);
    for (std::size_t s = 0; s < layout.slots; ++s) {
      std::swap(slots[s], slots[s + uniform_index(rng, layout.slots - s)]);
      if (s < want) {
        std::swap(ids[s], ids[s + uniform_index(rng, ids.size() - s)]);
        set_slot(ind.chromosome, layout, slots[s], true, ids[s]);
      } else {
        set_slot(ind.chromosome, layout, slots[s], false, slot_value(ind.chromosome, layout, slots[s]));
      }
    }
    repair(ind.chromosome, layout, rng);
    ind.sites = active_sites(ind.chromosome, layout);
  }
  detail::evaluate_all(pop, ev);
  detail::assign_rank_crowding(pop);

  Nsga2Result result;
  result.history.push_back(detail::record(0, pop));
  for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<Individual> offspring;
    offspring.reserve(cfg.pop_size);
    while (offspring.size() < cfg.pop_size) {
      Individual a{pop[detail::tournament(pop, rng)].chromosome, {}, {}, 0, 0.0};
      Individual b{pop[detail::tournament(pop, rng)].chromosome, {}, {}, 0, 0.0};
      detail::vary(a.chromosome, b.chromosome, cfg.crossover_prob, pm, rng);
      for (auto* c : {&a, &b}) {
        repair(c->chromosome, layout, rng);
        c->sites = active_sites(c->chromosome, layout);
      }
      offspring.push_back(std::move(a));
      offspring.push_back(std::move(b));
    }
    detail::evaluate_all(offspring, ev);
    for (auto& o : offspring) pop.push_back(std::move(o));
    pop = detail::survivors(std::move(pop), cfg.pop_size);
    detail::assign_rank_crowding(pop);
    result.history.push_back(detail::record(gen, pop));
  }
  result.archive.individuals = std::move(pop);
  result.archive.fixed_bs_count = ev.fixed_count();
  return result;
}

inline Nsga2Result run_nsga2(const Scene& scene, const RadioParams& params, const GaConfig& cfg, bool use_blockages) {
  cfg.validate();
  const Evaluator ev(scene, params, use_blockages, cfg.sinr_threshold_db);
  return run_nsga2(ev, cfg);
}

inline const Individual& select_best_for_m(const ParetoArchive& archive, int m) {
  const Individual* best = nullptr;
  for (const auto& ind : archive.individuals) {
    if (ind.objectives.f2 != m) continue;
    if (!best || std::tuple(ind.rank, ind.objectives.f3, ind.objectives.f1) <
                     std::tuple(best->rank, best->objectives.f3, best->objectives.f1))
      best = &ind;
  }
  if (!best) throw Error(ErrorCode::NoSolutionForM, "archive holds no configuration with " + std::to_string(m) + " base stations");
  return *best;
}

// Maximises users above threshold with exactly cfg.max_bs stations. Equal
// counts are split by the priority-user SINR sum.
inline Individual run_ga_single_objective(const Evaluator& ev, const GaConfig& cfg) {
  cfg.validate();
  if (ev.candidates() < cfg.max_bs)
    throw Error(ErrorCode::InvalidConfig, "fewer candidates than the requested station count");
  const auto layout = ChromosomeLayout::make(cfg.max_bs, ev.candidates());
  const double pm = detail::mutation_rate(cfg, layout);
  Rng rng(cfg.seed);
  auto better = [](const Individual& a, const Individual& b) {
    return std::pair(a.objectives.f3, a.objectives.f1) < std::pair(b.objectives.f3, b.objectives.f1);
  };

  std::vector<Individual> pop(cfg.pop_size);
  for (auto& ind : pop) {
    ind.chromosome.bits.resize(layout.total_bits());
    for (auto& b : ind.chromosome.bits) b = static_cast<std::uint8_t>(rng() & 1u);
    repair_fixed_count(ind.chromosome, layout);
    ind.sites = active_sites(ind.chromosome, layout);
  }
  detail::evaluate_all(pop, ev);

  auto truncate = [&](std::vector<Individual> all) {
    auto [unique, repeats] = detail::split_duplicates(all);
    std::stable_sort(unique.begin(), unique.end(), [&](std::size_t a, std::size_t b) { return better(all[a], all[b]); });
    unique.insert(unique.end(), repeats.begin(), repeats.end());
    std::vector<Individual> next;
    for (std::size_t k = 0; k < cfg.pop_size; ++k) next.push_back(std::move(all[unique[k]]));
    return next;
  };
  pop = truncate(std::move(pop));

  auto pick = [&]() {
    const std::size_t a = uniform_index(rng, pop.size());
    const std::size_t b = uniform_index(rng, pop.size());
    if (better(pop[a], pop[b])) return a;
    if (better(pop[b], pop[a])) return b;
    return std::min(a, b);
  };
  for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<Individual> offspring;
    while (offspring.size() < cfg.pop_size) {
      Individual a{pop[pick()].chromosome, {}, {}, 0, 0.0};
      Individual b{pop[pick()].chromosome, {}, {}, 0, 0.0};
      detail::vary(a.chromosome, b.chromosome, cfg.crossover_prob, pm, rng);
      for (auto* c : {&a, &b}) {
        repair_fixed_count(c->chromosome, layout);
        c->sites = active_sites(c->chromosome, layout);
      }
      offspring.push_back(std::move(a));
      offspring.push_back(std::move(b));
    }
    detail::evaluate_all(offspring, ev);
    // Generational replacement; only the top few parents carry over.
    const std::size_t elite = std::max<std::size_t>(2, (cfg.pop_size + 19) / 20);
    pop.resize(elite);
    for (std::size_t k = 0; pop.size() < cfg.pop_size; ++k) pop.push_back(std::move(offspring[k]));
    pop = truncate(std::move(pop));
  }
  Individual best = pop.front();
  best.rank = 0;
  best.crowding = std::numeric_limits<double>::infinity();
  return best;
}

inline Individual run_ga_single_objective(const Scene& scene, const RadioParams& params, const GaConfig& cfg,
                                          bool use_blockages) {
  cfg.validate();
  const Evaluator ev(scene, params, use_blockages, cfg.sinr_threshold_db);
  return run_ga_single_objective(ev, cfg);
}

}  // namespace bsp
