#include "support.hpp"

#include <gtest/gtest.h>

using namespace testkit;

namespace {

const RadioParams kRadio{};

std::vector<ObjectiveVector> random_objectives(Gen& g, std::size_t n) {
  std::vector<ObjectiveVector> v;
  for (std::size_t i = 0; i < n; ++i)
    v.push_back({static_cast<double>(uniform_int(g, -8, 0)), uniform_int(g, 1, 4), uniform_int(g, -6, 0)});
  return v;
}

std::vector<ObjectiveVector> exhaustive(const Evaluator& ev, std::size_t kmax) {
  std::vector<ObjectiveVector> all;
  for (const auto& s : subsets(ev.candidates(), kmax)) all.push_back(ev.evaluate(s));
  return all;
}

bool contains(const std::vector<ObjectiveVector>& set, const ObjectiveVector& v) {
  return std::any_of(set.begin(), set.end(), [&](const ObjectiveVector& o) { return near_eq(o, v); });
}

std::vector<ObjectiveVector> front0_objectives(const ParetoArchive& a) {
  std::vector<ObjectiveVector> out;
  for (const auto* i : a.front0())
    if (!contains(out, i->objectives)) out.push_back(i->objectives);
  return out;
}

Individual with_objectives(ObjectiveVector o, std::size_t rank = 0) {
  Individual i;
  i.objectives = o;
  i.rank = rank;
  for (int k = 0; k < o.f2; ++k) i.sites.push_back(static_cast<std::size_t>(k));
  return i;
}

}  // namespace

TEST(Optimizer, DominanceExamples) {
  EXPECT_TRUE(dominates({-10, 2, -5}, {-8, 3, -4}));
  EXPECT_FALSE(dominates({-10, 2, -5}, {-10, 2, -5}));
  EXPECT_FALSE(dominates({-10, 3, -5}, {-8, 2, -4}));
  EXPECT_FALSE(dominates({-8, 2, -4}, {-10, 3, -5}));
}

TEST(Optimizer, DominanceMatchesOracle) {
  Gen g(1);
  for (int k = 0; k < 5000; ++k) {
    const auto v = random_objectives(g, 2);
    ASSERT_EQ(dominates(v[0], v[1]), dominates_oracle(v[0], v[1]));
  }
}

TEST(Optimizer, SortExamples) {
  const std::vector<ObjectiveVector> one{{0, 1, 0}};
  EXPECT_EQ(non_dominated_sort(one), (std::vector<std::vector<std::size_t>>{{0}}));
  // c is dominated by b, b by a; listed out of order on purpose.
  const std::vector<ObjectiveVector> chain{{-1, 2, -1}, {-3, 1, -3}, {-2, 1, -2}};
  EXPECT_EQ(non_dominated_sort(chain), (std::vector<std::vector<std::size_t>>{{1}, {2}, {0}}));
}

TEST(Optimizer, SortMatchesCubicOracle) {
  Gen g(2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto v = random_objectives(g, static_cast<std::size_t>(uniform_int(g, 1, 50)));
    auto fast = non_dominated_sort(v);
    auto slow = fronts_oracle(v);
    for (auto& f : fast) std::sort(f.begin(), f.end());
    for (auto& f : slow) std::sort(f.begin(), f.end());
    ASSERT_EQ(fast, slow);
  }
}

TEST(Optimizer, CrowdingExamples) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(crowding_distance(std::vector<ObjectiveVector>{{0, 1, 0}}), std::vector<double>{inf});
  EXPECT_EQ(crowding_distance(std::vector<ObjectiveVector>{{0, 1, 0}, {1, 1, -1}}), (std::vector<double>{inf, inf}));
  // Evenly spaced along f1 = -f3 with constant f2: interior gaps 2/3 twice, f2 adds nothing.
  const std::vector<ObjectiveVector> line{{0, 1, 0}, {1, 1, -1}, {2, 1, -2}, {3, 1, -3}};
  const auto d = crowding_distance(line);
  EXPECT_EQ(d[0], inf);
  EXPECT_EQ(d[3], inf);
  EXPECT_NEAR(d[1], 4.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(d[1], d[2]);
}

TEST(Optimizer, CrowdingBoundariesAreInfinite) {
  Gen g(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto v = random_objectives(g, static_cast<std::size_t>(uniform_int(g, 3, 30)));
    const auto d = crowding_distance(v);
    for (std::size_t k = 0; k < 3; ++k) {
      double lo = v[0][k], hi = v[0][k];
      for (const auto& o : v) lo = std::min(lo, o[k]), hi = std::max(hi, o[k]);
      bool lo_inf = false, hi_inf = false;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i][k] == lo) lo_inf = lo_inf || std::isinf(d[i]);
        if (v[i][k] == hi) hi_inf = hi_inf || std::isinf(d[i]);
      }
      ASSERT_TRUE(lo_inf && hi_inf);
    }
    for (double x : d) ASSERT_GE(x, 0.0);
  }
}

TEST(Optimizer, RepairIsIdempotentAndValid) {
  Gen g(4);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto layout = ChromosomeLayout::make(static_cast<std::size_t>(uniform_int(g, 1, 8)),
                                               static_cast<std::size_t>(uniform_int(g, 1, 300)));
    Chromosome c{std::vector<std::uint8_t>(layout.total_bits())};
    for (auto& b : c.bits) b = static_cast<std::uint8_t>(uniform_int(g, 0, 1));
    if (uniform_int(g, 0, 4) == 0)
      for (std::size_t s = 0; s < layout.slots; ++s) c.bits[s * layout.slot_bits()] = 0;
    Rng rng(static_cast<std::uint64_t>(trial));
    repair(c, layout, rng);
    auto again = c;
    repair(again, layout, rng);
    ASSERT_EQ(again, c);
    std::set<std::size_t> seen;
    std::size_t active = 0;
    for (std::size_t s = 0; s < layout.slots; ++s) {
      ASSERT_LT(slot_value(c, layout, s), layout.candidates);
      if (!slot_active(c, layout, s)) continue;
      ++active;
      ASSERT_TRUE(seen.insert(slot_value(c, layout, s)).second);
    }
    ASSERT_GE(active, 1u);
    ASSERT_EQ(active_sites(c, layout).size(), active);
  }
}

TEST(Optimizer, AllInactiveRepairsToOneStation) {
  const auto layout = ChromosomeLayout::make(4, 10);
  Chromosome c{std::vector<std::uint8_t>(layout.total_bits(), 0)};
  Rng rng(5);
  repair(c, layout, rng);
  EXPECT_EQ(active_sites(c, layout).size(), 1u);
}

TEST(Optimizer, FixedCountRepairKeepsEverySlot) {
  Gen g(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t slots = static_cast<std::size_t>(uniform_int(g, 1, 6));
    const auto layout = ChromosomeLayout::make(slots, static_cast<std::size_t>(uniform_int(g, static_cast<int>(slots), 40)));
    Chromosome c{std::vector<std::uint8_t>(layout.total_bits())};
    for (auto& b : c.bits) b = static_cast<std::uint8_t>(uniform_int(g, 0, 1));
    repair_fixed_count(c, layout);
    auto again = c;
    repair_fixed_count(again, layout);
    ASSERT_EQ(again, c);
    ASSERT_EQ(active_sites(c, layout).size(), slots);
  }
}

TEST(Optimizer, EncodeRoundTrips) {
  const auto layout = ChromosomeLayout::make(5, 37);
  const std::vector<std::size_t> sites{3, 17, 36};
  EXPECT_EQ(active_sites(encode(sites, layout), layout), sites);
}

TEST(Optimizer, EvaluateMatchesLinkByLinkOracle) {
  const auto s = toy_scene(11, {300, 10, 4, 3});
  const Evaluator ev(s, kRadio, true, 10.0);
  const auto layout = ChromosomeLayout::make(4, 4);
  for (const auto& sites : subsets(4, 4)) {
    const auto want = objectives_oracle(s, kRadio, sites, 10.0, true);
    EXPECT_TRUE(near_eq(ev.evaluate(sites), want));
    EXPECT_TRUE(near_eq(evaluate(encode(sites, layout), layout, s, kRadio, true), want));
  }
}

TEST(Optimizer, UnreachableThresholdGivesZeroCount) {
  const auto s = toy_scene(12, {300, 10, 4, 3});
  const Evaluator ev(s, kRadio, true, 1000.0);
  const auto o = ev.evaluate(std::vector<std::size_t>{2});
  EXPECT_EQ(o.f3, 0);
  EXPECT_EQ(o.f2, 1);
}

TEST(Optimizer, FixedStationsTransmitButAreNotCounted) {
  auto s = toy_scene(13, {300, 20, 5, 3});
  s.fixed_bs = {{10, 10, 30}, {290, 290, 30}};
  const Evaluator ev(s, kRadio, true, 10.0);
  const std::vector<std::size_t> sites{1, 3};
  EXPECT_TRUE(near_eq(ev.evaluate(sites), objectives_oracle(s, kRadio, sites, 10.0, true)));
  EXPECT_EQ(ev.evaluate(sites).f2, 2);
  EXPECT_EQ(ev.attach({}).size(), s.users.size());
  EXPECT_THROW(ev.attach(std::vector<std::size_t>{99}), Error);
}

TEST(Optimizer, SmallToyFrontEqualsExhaustiveParetoSet) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = toy_scene(seed, {300, 10, 4, 3});
    const Evaluator ev(s, kRadio, true, 10.0);
    GaConfig cfg;
    cfg.pop_size = 8;
    cfg.generations = 30;
    cfg.max_bs = 4;
    cfg.seed = seed;
    const auto res = run_nsga2(ev, cfg);
    const auto truth = pareto_oracle(exhaustive(ev, 4));
    const auto got = front0_objectives(res.archive);
    for (const auto& o : got) EXPECT_TRUE(contains(truth, o)) << "seed " << seed;
    if (truth.size() <= cfg.pop_size) {
      EXPECT_EQ(got.size(), truth.size()) << "seed " << seed;
    }
  }
}

TEST(Optimizer, RunsAreSeedDeterministic) {
  const auto s = toy_scene(21, {400, 30, 10, 6});
  GaConfig cfg;
  cfg.seed = 7;
  cfg.generations = 20;
  const auto a = run_nsga2(s, kRadio, cfg, true);
  const auto b = run_nsga2(s, kRadio, cfg, true);
  EXPECT_EQ(to_json(a.archive).dump(), to_json(b.archive).dump());
  EXPECT_EQ(to_json(a.history).dump(), to_json(b.history).dump());
  set_max_threads(1);
  const auto c = run_nsga2(s, kRadio, cfg, true);
  set_max_threads(8);
  const auto d = run_nsga2(s, kRadio, cfg, true);
  set_max_threads(0);
  EXPECT_EQ(to_json(c.archive).dump(), to_json(a.archive).dump());
  EXPECT_EQ(to_json(d.archive).dump(), to_json(a.archive).dump());
}

TEST(Optimizer, SingleStationLimitHoldsEverywhere) {
  const auto s = toy_scene(22, {400, 30, 10, 6});
  GaConfig cfg;
  cfg.max_bs = 1;
  cfg.generations = 10;
  for (const auto& ind : run_nsga2(s, kRadio, cfg, true).archive.individuals) EXPECT_EQ(ind.objectives.f2, 1);
}

TEST(Optimizer, FrontStaysMutuallyNonDominatingAndElitist) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto s = toy_scene(100 + seed, {600, 30, 10, 8});
    GaConfig cfg;
    cfg.seed = seed;
    cfg.max_bs = 3;
    cfg.generations = 40;
    const auto res = run_nsga2(s, kRadio, cfg, true);
    const auto f0 = res.archive.front0();
    for (const auto* a : f0)
      for (const auto* b : f0) EXPECT_FALSE(dominates(a->objectives, b->objectives));
    // Best f3 over configurations with at most m stations never gets worse.
    for (int m = 1; m <= 3; ++m) {
      int prev = 1;
      for (const auto& rec : res.history) {
        int best = 1;
        for (const auto& b : rec.front0_best)
          if (b.m <= m) best = std::min(best, b.best_f3);
        if (best == 1) continue;
        EXPECT_LE(best, prev) << "m " << m << " generation " << rec.generation;
        prev = best;
      }
    }
  }
}

TEST(Optimizer, SurvivorsKeepBestOfEveryCountAndDemoteRepeats) {
  std::vector<Individual> pool;
  for (int k = 0; k < 6; ++k) pool.push_back(with_objectives({-10.0 - k, 1, -5 - k}));
  pool.push_back(with_objectives({-1, 4, -3}));  // dominated, but the only M = 4 configuration
  pool.push_back(pool[0]);                      // repeat of the first site set
  for (auto& p : pool) p.sites.push_back(100 + static_cast<std::size_t>(&p - pool.data()));
  pool.back().sites = pool[0].sites;
  const auto next = detail::survivors(pool, 4);
  ASSERT_EQ(next.size(), 4u);
  EXPECT_TRUE(std::any_of(next.begin(), next.end(), [](const Individual& i) { return i.objectives.f2 == 4; }));
  std::set<std::vector<std::size_t>> distinct;
  for (const auto& i : next) distinct.insert(i.sites);
  EXPECT_EQ(distinct.size(), next.size());
}

TEST(Optimizer, EveryStationCountSurvivesFromTheStart) {
  const auto s = toy_scene(12, {600, 30, 20, 8});
  GaConfig cfg;
  cfg.pop_size = 10;
  cfg.generations = 1;
  cfg.max_bs = 6;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    const auto res = run_nsga2(s, RadioParams{}, cfg, true);
    for (int m = 1; m <= 6; ++m) EXPECT_NO_THROW(select_best_for_m(res.archive, m)) << "seed " << seed << " m " << m;
  }
}

TEST(Optimizer, SelectBestForMExamples) {
  ParetoArchive a;
  a.individuals = {with_objectives({-5, 3, -20})};
  EXPECT_EQ(select_best_for_m(a, 3).objectives.f3, -20);
  EXPECT_THROW(select_best_for_m(a, 6), Error);
  a.individuals = {with_objectives({-5, 4, -40}), with_objectives({-1, 4, -50}), with_objectives({-9, 4, -60}, 1)};
  EXPECT_EQ(select_best_for_m(a, 4).objectives.f3, -50);
  try {
    select_best_for_m(a, 6);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSolutionForM);
  }
}

TEST(Optimizer, SingleObjectiveGaFindsExhaustiveOptimum) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto s = toy_scene(200 + seed, {500, 30, 10, 8});
    const Evaluator ev(s, kRadio, true, 10.0);
    for (std::size_t m = 1; m <= 3; ++m) {
      int best = 1;
      for (const auto& sub : subsets(10, m))
        if (sub.size() == m) best = std::min(best, ev.evaluate(sub).f3);
      GaConfig cfg;
      cfg.seed = seed;
      cfg.max_bs = m;
      cfg.generations = 60;
      const auto got = run_ga_single_objective(ev, cfg);
      EXPECT_EQ(got.sites.size(), m);
      EXPECT_EQ(got.objectives.f3, best) << "seed " << seed << " m " << m;
      EXPECT_TRUE(near_eq(got.objectives, ev.evaluate(got.sites)));
    }
  }
}

TEST(Optimizer, GaOnIndistinguishableSitesReturnsAnyMember) {
  auto s = toy_scene(300, {300, 20, 6, 3});
  for (auto& c : s.candidates) c.position = {150, 150, 30};
  const Evaluator ev(s, kRadio, true, 10.0);
  GaConfig cfg;
  cfg.max_bs = 2;
  cfg.generations = 5;
  const auto got = run_ga_single_objective(ev, cfg);
  EXPECT_TRUE(near_eq(got.objectives, ev.evaluate(std::vector<std::size_t>{0, 1})));
}

TEST(Optimizer, SeparatedClustersGainSignalWithEveryStation) {
  // Three user clusters 5 km apart, each with one nearby mast: every added
  // station lifts the priority SINR sum, so the best f1 on the front falls with M.
  Scene s;
  const Vec2 centres[3] = {{0, 0}, {5000, 0}, {0, 5000}};
  Gen g(17);
  for (auto c : centres)
    for (int k = 0; k < 8; ++k) s.users.push_back({{c.x + uniform(g, -50, 50), c.y + uniform(g, -50, 50), 2}, true});
  for (auto c : centres) s.candidates.push_back({s.candidates.size(), {c.x + 60, c.y + 60, 30}});
  for (int k = 0; k < 3; ++k) s.candidates.push_back({s.candidates.size(), {2500.0 + 100 * k, 2500, 30}});
  const Evaluator ev(s, kRadio, true, 10.0);
  const auto truth = pareto_oracle(exhaustive(ev, 3));
  std::map<int, double> best;
  for (const auto& o : truth) best[o.f2] = best.count(o.f2) ? std::min(best[o.f2], o.f1) : o.f1;
  ASSERT_EQ(best.size(), 3u);
  EXPECT_LT(best[2], best[1]);
  EXPECT_LT(best[3], best[2]);

  GaConfig cfg;
  cfg.max_bs = 3;
  cfg.generations = 60;
  const auto res = run_nsga2(ev, cfg);
  std::map<int, double> got;
  for (const auto* i : res.archive.front0())
    got[i->objectives.f2] = got.count(i->objectives.f2) ? std::min(got[i->objectives.f2], i->objectives.f1) : i->objectives.f1;
  for (auto it = std::next(got.begin()); it != got.end(); ++it) EXPECT_LT(it->second, std::prev(it)->second);
}

TEST(Optimizer, ConfigValidation) {
  GaConfig c;
  c.pop_size = 5;
  EXPECT_THROW(c.validate(), Error);
  c.pop_size = 2;
  EXPECT_THROW(c.validate(), Error);
  c = GaConfig{};
  c.crossover_prob = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c = GaConfig{};
  c.mutation_prob_per_bit = -0.1;
  EXPECT_THROW(c.validate(), Error);
}
