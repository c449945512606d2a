#include "support.hpp"

#include <gtest/gtest.h>

using namespace testkit;

namespace {

std::vector<Attachment> with_sinrs(const std::vector<double>& s, std::size_t serving = 0) {
  std::vector<Attachment> a;
  for (double x : s) a.push_back({serving, x});
  return a;
}

double prob_at(const CoverageCurve& c, double t) {
  for (std::size_t i = 0; i < c.thresholds.size(); ++i)
    if (std::abs(c.thresholds[i] - t) < 1e-9) return c.prob[i];
  ADD_FAILURE() << "threshold " << t << " not on grid";
  return -1;
}

}  // namespace

TEST(Metrics, CoverageStepFunction) {
  const std::vector<double> s(10, 20.0);
  const auto c = coverage_curve(s);
  EXPECT_EQ(prob_at(c, 19.5), 1.0);
  EXPECT_EQ(prob_at(c, 20.0), 0.0);
  EXPECT_EQ(prob_at(c, 35.0), 0.0);
  EXPECT_EQ(c.thresholds.front(), -20.0);
  EXPECT_EQ(c.thresholds.back(), 40.0);
}

TEST(Metrics, CoverageTwoUsers) {
  const auto c = coverage_curve(std::vector<double>{0.0, 20.0});
  for (double t = 0.5; t < 20.0; t += 0.5) EXPECT_EQ(prob_at(c, t), 0.5);
  EXPECT_EQ(prob_at(c, -0.5), 1.0);
}

TEST(Metrics, CoverageOfUniformSamples) {
  Gen g(1);
  std::vector<double> s;
  for (int i = 0; i < 1000; ++i) s.push_back(uniform(g, -10, 30));
  EXPECT_NEAR(prob_at(coverage_curve(s), 10.0), 0.5, 0.05);
}

TEST(Metrics, CoverageIsAValidCcdf) {
  Gen g(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s;
    for (int i = 0, n = uniform_int(g, 1, 300); i < n; ++i) s.push_back(uniform(g, -40, 60));
    const auto c = coverage_curve(s);
    EXPECT_NO_THROW(check_monotone(c));
  }
  EXPECT_THROW(coverage_curve(std::vector<double>{}), Error);
  EXPECT_THROW(check_monotone({{0, 1}, {0.2, 0.5}}), std::logic_error);
}

TEST(Metrics, ThroughputCdfExamples) {
  const RadioParams p;
  auto c = throughput_cdf(with_sinrs({-30, -20, -15}), p);
  EXPECT_EQ(c.outage, 1.0);
  EXPECT_EQ(c.rates.front(), 0.0);
  EXPECT_EQ(c.cdf.front(), 1.0);

  c = throughput_cdf(with_sinrs({0.0}), p);
  EXPECT_EQ(c.outage, 0.0);
  ASSERT_EQ(c.rates.size(), 2u);
  EXPECT_NEAR(c.rates[1], 10.0, 1e-12);
  EXPECT_EQ(c.cdf[1], 1.0);

  // Half the users below the coverage floor.
  std::vector<Attachment> att;
  for (int i = 0; i < 10; ++i) att.push_back({static_cast<std::size_t>(i), i < 5 ? -20.0 : 15.0});
  c = throughput_cdf(att, p);
  EXPECT_EQ(c.outage, 0.5);
  EXPECT_EQ(c.served, 0.5);
  EXPECT_THROW(throughput_cdf(std::vector<Attachment>{}, p), Error);
}

TEST(Metrics, EqualShareAcrossSector) {
  const auto t = user_throughputs(with_sinrs({0.0, 0.0, 0.0, 0.0}), RadioParams{});
  for (double x : t) EXPECT_NEAR(x, 2.5, 1e-12);
}

TEST(Metrics, CountsAndMeans) {
  const auto a = with_sinrs({5, 10, 10.5, 20});
  EXPECT_EQ(users_above(a, 10.0), 2u);
  EXPECT_DOUBLE_EQ(mean_sinr_db(a), 11.375);
}

TEST(Synth, EmptyDensityHasNoBuildings) {
  SynthConfig c;
  c.width = c.height = 80;
  c.building_density = 0.0;
  const auto [cls, dsm] = generate_synthetic_scene(c, 1);
  EXPECT_EQ(std::count(cls.values.begin(), cls.values.end(), LandClass::Building), 0);
}

TEST(Synth, SeedDeterminesOutput) {
  SynthConfig c;
  c.width = c.height = 80;
  const auto a = generate_synthetic_scene(c, 5);
  const auto b = generate_synthetic_scene(c, 5);
  const auto d = generate_synthetic_scene(c, 6);
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
  EXPECT_NE(a.first, d.first);
}

TEST(Synth, DensityLandsInBand) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto [cls, dsm] = generate_synthetic_scene(SynthConfig{}, seed);
    const double frac = static_cast<double>(std::count(cls.values.begin(), cls.values.end(), LandClass::Building)) /
                        static_cast<double>(cls.values.size());
    EXPECT_GE(frac, 0.2) << "seed " << seed;
    EXPECT_LE(frac, 0.4) << "seed " << seed;
  }
}

TEST(Synth, BuildingsRiseAboveGround) {
  const auto [cls, dsm] = generate_synthetic_scene(SynthConfig{}, 3);
  const auto prisms = extract_buildings(cls, dsm);
  EXPECT_GT(prisms.size(), 10u);
  for (const auto& p : prisms) EXPECT_GT(p.top_elev, p.base_elev);
}

TEST(Io, SceneJsonRoundTrip) {
  auto s = toy_scene(3);
  s.fixed_bs = {{1, 2, 3}};
  const auto back = scene_from_json(Json::parse(scene_to_json(s).dump()));
  EXPECT_EQ(scene_to_json(back).dump(), scene_to_json(s).dump());
  auto bad = scene_to_json(s);
  bad["candidates"][0]["id"] = 5;
  EXPECT_THROW(scene_from_json(bad), Error);
}

TEST(Io, ArchiveRoundTripKeepsInfiniteCrowding) {
  const auto s = toy_scene(4);
  GaConfig cfg;
  cfg.generations = 5;
  const auto res = run_nsga2(s, RadioParams{}, cfg, true);
  const auto j = to_json(res.archive);
  EXPECT_NE(j.dump().find("\"inf\""), std::string::npos);
  EXPECT_EQ(to_json(archive_from_json(Json::parse(j.dump()))).dump(), j.dump());
}

TEST(Io, ConfigsRejectUnknownKeysAndBadValues) {
  EXPECT_THROW(ga_config_from_json(Json::parse(R"({"pop_size": 40, "popsize": 3})")), Error);
  EXPECT_THROW(ga_config_from_json(Json::parse(R"({"pop_size": 7})")), Error);
  EXPECT_THROW(radio_params_from_json(Json::parse(R"({"bandwidth_mhz": -1})")), Error);
  const auto g = ga_config_from_json(Json::parse(R"({"M_max": 4, "seed": 9})"));
  EXPECT_EQ(g.max_bs, 4u);
  EXPECT_EQ(g.seed, 9u);
  const auto r = radio_params_from_json(to_json(RadioParams{}));
  EXPECT_EQ(to_json(r).dump(), to_json(RadioParams{}).dump());
}

TEST(Io, NumbersUseShortestRoundTrip) {
  EXPECT_EQ(fmt_num(0.1), "0.1");
  EXPECT_EQ(fmt_num(-70.1), "-70.1");
  EXPECT_EQ(std::stod(fmt_num(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Scenario, NoPriorWritesEveryCount) {
  TempDir dir("noprior");
  const auto s = toy_scene(8, {600, 30, 12, 8});
  ScenarioPlan plan;
  plan.ga.generations = 20;
  plan.gnuplot = true;
  const auto b = run_scenario(s, RadioParams{}, plan, dir.path);
  for (const char* f : {"archive.json", "history.json", "summary.csv", "plot_coverage.gp"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  for (int m = 3; m <= 6; ++m) {
    const std::string tag = "m" + std::to_string(m);
    for (const char* kind : {"coverage_", "throughput_", "placement_"})
      EXPECT_TRUE(std::filesystem::exists(dir / (kind + tag + ".csv"))) << kind << tag;
  }
  EXPECT_EQ(b.rows.size(), 4u);
  const auto cov = slurp(dir / "coverage_m3.csv");
  EXPECT_EQ(cov.substr(0, cov.find('\n')), "threshold_db,prob");
  const auto pl = slurp(dir / "placement_m4.csv");
  EXPECT_EQ(pl.substr(0, pl.find('\n')), "kind,x,y,z,priority");
  EXPECT_EQ(std::count(pl.begin(), pl.end(), '\n'), 1 + 30 + 12 + 4);
}

TEST(Scenario, AblationWritesTwoCurvesPerCount) {
  TempDir dir("ablation");
  const auto s = toy_scene(9, {600, 30, 12, 8});
  ScenarioPlan plan;
  plan.kind = ScenarioKind::BlockageAblation;
  plan.ga.generations = 20;
  run_scenario(s, RadioParams{}, plan, dir.path);
  for (int m : {3, 5})
    for (const char* mode : {"_blockage", "_noblockage"})
      EXPECT_TRUE(std::filesystem::exists(dir / ("coverage_m" + std::to_string(m) + mode + ".csv")));
  EXPECT_TRUE(std::filesystem::exists(dir / "archive_noblockage.json"));
}

TEST(Scenario, PriorStationsAreRecordedInTheArchive) {
  TempDir dir("prior");
  auto s = toy_scene(10, {600, 30, 12, 8});
  s.fixed_bs = {{50, 50, 30}, {550, 50, 30}, {300, 550, 30}};
  ScenarioPlan plan;
  plan.kind = ScenarioKind::WithPrior;
  plan.ga.generations = 20;
  const auto b = run_scenario(s, RadioParams{}, plan, dir.path);
  const auto a = load_json(dir / "archive.json");
  EXPECT_EQ(a.at("fixed_bs_count"), 3);
  for (const auto& ind : a.at("individuals")) EXPECT_EQ(ind.at("fixed_bs_count"), 3);
  ASSERT_EQ(b.rows.size(), 3u);
  EXPECT_TRUE(b.rows[0].sites.empty());
  EXPECT_EQ(b.rows[2].sites.size(), 2u);
  const auto pl = slurp(dir / "placement_m5.csv");
  EXPECT_EQ(std::count(pl.begin(), pl.end(), '\n'), 1 + 30 + 12 + 2 + 3);
}

TEST(Scenario, MethodComparisonWritesTable) {
  TempDir dir("methods");
  const auto s = toy_scene(11, {600, 30, 12, 8});
  ScenarioPlan plan;
  plan.kind = ScenarioKind::MethodComparison;
  plan.ga.generations = 10;
  run_scenario(s, RadioParams{}, plan, dir.path);
  const auto csv = slurp(dir / "comparison.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 9);
  EXPECT_TRUE(std::filesystem::exists(dir / "coverage_kmeans_m5.csv"));
}

TEST(Scenario, PlanNamesParse) {
  EXPECT_EQ(parse_scenario("with_prior"), ScenarioKind::WithPrior);
  EXPECT_THROW(parse_scenario("everything"), Error);
}
