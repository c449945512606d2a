#pragma once

// Experiment harness: runs one of the placement studies end to end and writes
// the report bundle (archives, coverage and throughput curves, placement maps).

#include <bsplace/io.hpp>

#include <filesystem>
#include <sstream>

namespace bsp {

enum class ScenarioKind { NoPrior, WithPrior, BlockageAblation, MethodComparison };

inline ScenarioKind parse_scenario(std::string_view s) {
  if (s == "no_prior") return ScenarioKind::NoPrior;
  if (s == "with_prior") return ScenarioKind::WithPrior;
  if (s == "blockage_ablation") return ScenarioKind::BlockageAblation;
  if (s == "method_comparison") return ScenarioKind::MethodComparison;
  throw Error(ErrorCode::InvalidConfig, "unknown scenario plan '" + std::string(s) + "'");
}

struct ScenarioPlan {
  ScenarioKind kind = ScenarioKind::NoPrior;
  std::vector<int> bs_counts;  // empty = plan default; totals including prior stations
  GaConfig ga;
  KmeansConfig kmeans;
  bool gnuplot = false;

  std::vector<int> counts() const {
    if (!bs_counts.empty()) return bs_counts;
    switch (kind) {
      case ScenarioKind::NoPrior: return {3, 4, 5, 6};
      case ScenarioKind::WithPrior: return {3, 4, 5};
      case ScenarioKind::BlockageAblation: return {3, 5};
      case ScenarioKind::MethodComparison: return {3, 4, 5};
    }
    return {};
  }
};

struct ScenarioRow {
  std::string tag;
  int total_bs = 0;
  std::vector<std::size_t> sites;
  std::size_t users_above = 0;
  double pct_users_above = 0.0;
  double mean_sinr_db = 0.0;
  double outage = 0.0;
};

struct ReportBundle {
  std::filesystem::path dir;
  std::vector<std::string> files;
  std::vector<ScenarioRow> rows;
};

inline std::string coverage_csv(const CoverageCurve& c) {
  check_monotone(c);
  std::string s = "threshold_db,prob\n";
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) s += fmt_num(c.thresholds[i]) + "," + fmt_num(c.prob[i]) + "\n";
  return s;
}

inline std::string throughput_csv(const ThroughputCdf& c) {
  std::string s = "mbps,cdf\n";
  for (std::size_t i = 0; i < c.rates.size(); ++i) s += fmt_num(c.rates[i]) + "," + fmt_num(c.cdf[i]) + "\n";
  return s;
}

inline std::string placement_csv(const Scene& scene, std::span<const Vec3> bs) {
  std::string s = "kind,x,y,z,priority\n";
  auto row = [&](const char* kind, Vec3 p, int prio) {
    s += std::string(kind) + "," + fmt_num(p.x) + "," + fmt_num(p.y) + "," + fmt_num(p.z) + "," + std::to_string(prio) + "\n";
  };
  for (const auto& u : scene.users) row("user", u.position, u.priority ? 1 : 0);
  for (const auto& c : scene.candidates) row("candidate", c.position, 0);
  for (auto p : bs) row("bs", p, 0);
  for (auto p : scene.fixed_bs) row("fixed_bs", p, 0);
  return s;
}

inline std::string comparison_csv(std::span<const ComparisonRow> rows) {
  std::string s = "method,m,pct_users_above_threshold,mean_sinr_db\n";
  for (const auto& r : rows)
    s += std::string(to_string(r.method)) + "," + std::to_string(r.m) + "," + fmt_num(r.pct_users_above_threshold) +
         "," + fmt_num(r.mean_sinr_db) + "\n";
  return s;
}

namespace detail {

class BundleWriter {
 public:
  explicit BundleWriter(const std::filesystem::path& dir) {
    bundle_.dir = dir;
    std::filesystem::create_directories(dir);
  }

  void text(const std::string& name, const std::string& body) {
    write_text_atomic(bundle_.dir / name, body);
    bundle_.files.push_back(name);
  }
  void json(const std::string& name, const Json& j) { text(name, j.dump(2) + "\n"); }

  // Coverage, throughput and placement files for one evaluated configuration.
  void configuration(const std::string& tag, int total_bs, std::span<const std::size_t> sites,
                     std::span<const Attachment> att, const Scene& scene, const RadioParams& params,
                     double threshold_db) {
    const auto cov = coverage_curve(sinrs_of(att));
    const auto thr = throughput_cdf(att, params);
    std::vector<Vec3> bs;
    for (auto s : sites) bs.push_back(scene.candidates[s].position);
    text("coverage_" + tag + ".csv", coverage_csv(cov));
    text("throughput_" + tag + ".csv", throughput_csv(thr));
    text("placement_" + tag + ".csv", placement_csv(scene, bs));
    const std::size_t above = users_above(att, threshold_db);
    bundle_.rows.push_back({tag, total_bs, {sites.begin(), sites.end()}, above,
                            100.0 * static_cast<double>(above) / static_cast<double>(att.size()), mean_sinr_db(att),
                            thr.outage});
  }

  void summary() {
    std::string s = "tag,total_bs,users_above,pct_users_above,mean_sinr_db,outage\n";
    for (const auto& r : bundle_.rows)
      s += r.tag + "," + std::to_string(r.total_bs) + "," + std::to_string(r.users_above) + "," +
           fmt_num(r.pct_users_above) + "," + fmt_num(r.mean_sinr_db) + "," + fmt_num(r.outage) + "\n";
    text("summary.csv", s);
  }

  void gnuplot() {
    std::ostringstream gp;
    gp << "set datafile separator ','\nset key bottom left\nset xlabel 'SINR threshold (dB)'\n"
       << "set ylabel 'P(SINR > threshold)'\nset terminal pngcairo size 800,600\nset output 'coverage.png'\nplot \\\n";
    bool first = true;
    for (const auto& r : bundle_.rows) {
      if (!first) gp << ", \\\n";
      gp << "  'coverage_" << r.tag << ".csv' using 1:2 every ::1 with lines title '" << r.tag << "'";
      first = false;
    }
    gp << "\n";
    text("plot_coverage.gp", gp.str());
  }

  ReportBundle take() { return std::move(bundle_); }

 private:
  ReportBundle bundle_;
};

}  // namespace detail

inline ReportBundle run_scenario(const Scene& scene, const RadioParams& params, const ScenarioPlan& plan,
                                 const std::filesystem::path& out_dir) {
  plan.ga.validate();
  params.validate();
  const auto counts = plan.counts();
  const double thr = plan.ga.sinr_threshold_db;
  detail::BundleWriter w(out_dir);
  const Evaluator aware(scene, params, true, thr);

  switch (plan.kind) {
    case ScenarioKind::NoPrior: {
      if (!scene.fixed_bs.empty()) throw Error(ErrorCode::InvalidConfig, "no_prior plan expects a scene without fixed stations");
      GaConfig g = plan.ga;
      for (int m : counts) g.max_bs = std::max(g.max_bs, static_cast<std::size_t>(m));
      const auto res = run_nsga2(aware, g);
      w.json("archive.json", to_json(res.archive));
      w.json("history.json", to_json(res.history));
      for (int m : counts) {
        const auto& best = select_best_for_m(res.archive, m);
        w.configuration("m" + std::to_string(m), m, best.sites, aware.attach(best.sites), scene, params, thr);
      }
      break;
    }
    case ScenarioKind::WithPrior: {
      const int fixed = static_cast<int>(scene.fixed_bs.size());
      if (fixed == 0) throw Error(ErrorCode::InvalidConfig, "with_prior plan needs fixed stations in the scene");
      GaConfig g = plan.ga;
      g.max_bs = 1;
      for (int m : counts) g.max_bs = std::max<std::size_t>(g.max_bs, static_cast<std::size_t>(std::max(0, m - fixed)));
      const auto res = run_nsga2(aware, g);
      w.json("archive.json", to_json(res.archive));
      w.json("history.json", to_json(res.history));
      for (int m : counts) {
        if (m < fixed) continue;
        std::vector<std::size_t> sites;
        if (m > fixed) sites = select_best_for_m(res.archive, m - fixed).sites;
        w.configuration("m" + std::to_string(m), m, sites, aware.attach(sites), scene, params, thr);
      }
      break;
    }
    case ScenarioKind::BlockageAblation: {
      const Evaluator blind(scene, params, false, thr);
      GaConfig g = plan.ga;
      for (int m : counts) g.max_bs = std::max(g.max_bs, static_cast<std::size_t>(m));
      const auto with = run_nsga2(aware, g);
      const auto without = run_nsga2(blind, g);
      w.json("archive.json", to_json(with.archive));
      w.json("archive_noblockage.json", to_json(without.archive));
      for (int m : counts) {
        const auto& a = select_best_for_m(with.archive, m);
        const auto& b = select_best_for_m(without.archive, m);
        // Both placements are judged in the blockage-aware world.
        w.configuration("m" + std::to_string(m) + "_blockage", m, a.sites, aware.attach(a.sites), scene, params, thr);
        w.configuration("m" + std::to_string(m) + "_noblockage", m, b.sites, aware.attach(b.sites), scene, params, thr);
      }
      break;
    }
    case ScenarioKind::MethodComparison: {
      const std::vector<Method> methods{Method::Nsga2, Method::Ga, Method::Kmeans};
      CompareConfig cc{plan.ga, plan.kmeans, true};
      const auto rows = compare_methods(aware, scene, counts, methods, cc);
      w.text("comparison.csv", comparison_csv(rows));
      for (const auto& r : rows)
        w.configuration(std::string(to_string(r.method)) + "_m" + std::to_string(r.m), r.m, r.sites, r.attachments,
                        scene, params, thr);
      break;
    }
  }
  w.summary();
  if (plan.gnuplot) w.gnuplot();
  return w.take();
}

}  // namespace bsp
