// bsplace: command-line front end for scene building, optimisation,
// evaluation and method comparison.

#include <bsplace/bsplace.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

namespace {

using bsp::Error;
using bsp::ErrorCode;
using bsp::Json;

// Raised for command-line misuse that CLI11 cannot see (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 0;
  std::string out = ".";
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

long parse_int(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("invalid ") + what + " '" + s + "'");
  }
}

std::vector<int> parse_counts(const std::string& s) {
  std::vector<int> out;
  for (const auto& t : split(s, ',')) {
    const long v = parse_int(t, "station count");
    if (v < 1) throw UsageError("station counts must be positive");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

class Manifest {
 public:
  Manifest(std::string command, const Globals& g) : start_(std::chrono::steady_clock::now()) {
    j_["command"] = std::move(command);
    j_["seed"] = g.seed;
    j_["out_dir"] = g.out;
    j_["tool_version"] = bsp::kVersion;
    j_["config_paths"] = Json::object();
  }
  void path(const std::string& key, const std::string& value) {
    if (!value.empty()) j_["config_paths"][key] = value;
  }
  void write(const std::filesystem::path& dir) {
    j_["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::filesystem::create_directories(dir);
    bsp::save_json(dir / "manifest.json", j_);
  }

 private:
  Json j_;
  std::chrono::steady_clock::time_point start_;
};

bsp::RadioParams load_radio(const std::string& path) {
  return path.empty() ? bsp::RadioParams{} : bsp::radio_params_from_json(bsp::load_json(path));
}

bsp::GaConfig load_ga(const std::string& path, const Globals& g) {
  bsp::GaConfig c = path.empty() ? bsp::GaConfig{} : bsp::ga_config_from_json(bsp::load_json(path));
  if (g.seed_given || path.empty()) c.seed = g.seed;
  return c;
}

bsp::Scene load_scene(const std::string& path) { return bsp::scene_from_json(bsp::load_json(path)); }

void print_front(const bsp::ParetoArchive& a) {
  std::vector<const bsp::Individual*> f = a.front0();
  std::stable_sort(f.begin(), f.end(), [](auto* x, auto* y) {
    return std::tuple(x->objectives.f2, x->objectives.f3, x->objectives.f1) <
           std::tuple(y->objectives.f2, y->objectives.f3, y->objectives.f1);
  });
  std::printf("%-4s %-12s %-8s %s\n", "M", "f1", "f3", "sites");
  for (auto* i : f) {
    std::string sites;
    for (auto s : i->sites) sites += (sites.empty() ? "" : ",") + std::to_string(s);
    std::printf("%-4d %-12.3f %-8d %s\n", i->objectives.f2, i->objectives.f1, i->objectives.f3, sites.c_str());
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Base-station placement on 2.5D urban scenes"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed (recorded in every manifest)");
  app.add_option("--threads", g.threads, "Worker cap for parallel evaluation (0 = all cores)");
  app.add_option("--out", g.out, "Output directory");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic class raster and DSM");
  std::string synth_cfg;
  std::optional<std::size_t> sw, sh;
  std::optional<double> scell, sdens;
  synth->add_option("--config", synth_cfg, "Generator config (JSON)");
  synth->add_option("--width", sw);
  synth->add_option("--height", sh);
  synth->add_option("--cell-size", scell);
  synth->add_option("--density", sdens, "Target building cell fraction");

  // build-scene
  auto* build = app.add_subcommand("build-scene", "Derive users, buildings and candidate sites");
  std::string raster_path, dsm_path, scene_cfg;
  build->add_option("--raster", raster_path, "Class raster (ESRI ASCII grid)")->required();
  build->add_option("--dsm", dsm_path, "Digital surface model (ESRI ASCII grid)")->required();
  build->add_option("--config", scene_cfg, "Scene config (JSON)");

  // optimize
  auto* opt = app.add_subcommand("optimize", "Search for base-station configurations");
  std::string scene_path, radio_path, ga_path, method = "nsga2";
  bool no_blockages = false;
  int m_opt = 0;
  opt->add_option("--scene", scene_path)->required();
  opt->add_option("--radio", radio_path, "Radio parameters (JSON)");
  opt->add_option("--ga", ga_path, "GA config (JSON)");
  opt->add_option("--method", method)->check(CLI::IsMember({"nsga2", "ga", "kmeans"}));
  opt->add_option("--m", m_opt, "Station count for ga/kmeans");
  opt->add_flag("--no-blockages", no_blockages, "Ignore buildings when computing SINR");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Coverage and throughput for a placement or a scenario plan");
  std::string sites_arg, coords_arg, archive_path, plan_name, tag = "eval", counts_arg, kmeans_path;
  int eval_m = 0;
  bool gnuplot = false;
  eval->add_option("--scene", scene_path)->required();
  eval->add_option("--radio", radio_path);
  eval->add_option("--ga", ga_path);
  eval->add_option("--kmeans", kmeans_path, "k-means config (JSON)");
  eval->add_option("--sites", sites_arg, "Comma-separated candidate ids");
  eval->add_option("--coords", coords_arg, "Explicit positions 'x,y,z;x,y,z'");
  eval->add_option("--archive", archive_path, "Pick the placement from an archive (with --m)");
  eval->add_option("--m", eval_m);
  eval->add_option("--plan", plan_name, "no_prior | with_prior | blockage_ablation | method_comparison");
  eval->add_option("--bs-counts", counts_arg, "Station counts for --plan");
  eval->add_option("--tag", tag);
  eval->add_flag("--no-blockages", no_blockages);
  eval->add_flag("--gnuplot", gnuplot, "Also emit gnuplot scripts");

  // compare
  auto* cmp = app.add_subcommand("compare", "Compare placement methods");
  std::string methods_arg, cmp_counts = "3,4,5";
  cmp->add_option("--scene", scene_path)->required();
  cmp->add_option("--radio", radio_path);
  cmp->add_option("--ga", ga_path);
  cmp->add_option("--kmeans", kmeans_path);
  cmp->add_option("--methods", methods_arg, "Comma-separated subset of nsga2,ga,kmeans")->required();
  cmp->add_option("--m", cmp_counts, "Comma-separated station counts");
  cmp->add_flag("--no-blockages", no_blockages);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  g.seed_given = app.count("--seed") > 0;
  bsp::set_max_threads(g.threads);
  const std::filesystem::path out(g.out);

  auto load_kmeans = [&] {
    bsp::KmeansConfig k;
    if (!kmeans_path.empty()) {
      const Json j = bsp::load_json(kmeans_path);
      bsp::detail::reject_unknown(j, {"max_iterations", "rounds", "seed"}, "k-means config");
      bsp::detail::read_opt(j, "max_iterations", k.max_iterations);
      bsp::detail::read_opt(j, "rounds", k.rounds);
      bsp::detail::read_opt(j, "seed", k.seed);
    }
    if (g.seed_given || kmeans_path.empty()) k.seed = g.seed;
    k.validate();
    return k;
  };

  if (*synth) {
    Manifest man("synth", g);
    man.path("synth_config", synth_cfg);
    bsp::SynthConfig c = synth_cfg.empty() ? bsp::SynthConfig{} : bsp::synth_config_from_json(bsp::load_json(synth_cfg));
    if (sw) c.width = *sw;
    if (sh) c.height = *sh;
    if (scell) c.cell_size = *scell;
    if (sdens) c.building_density = *sdens;
    const auto [raster, dsm] = bsp::generate_synthetic_scene(c, g.seed);
    std::filesystem::create_directories(out);
    bsp::save_raster((out / "raster.asc").string(), raster);
    bsp::save_dsm((out / "dsm.asc").string(), dsm);
    std::printf("wrote %s/raster.asc and dsm.asc (%zux%zu)\n", g.out.c_str(), raster.width(), raster.height());
    man.write(out);
    return 0;
  }

  if (*build) {
    Manifest man("build-scene", g);
    man.path("raster", raster_path);
    man.path("dsm", dsm_path);
    man.path("scene_config", scene_cfg);
    const auto raster = bsp::load_raster(raster_path);
    const auto dsm = bsp::load_dsm(dsm_path);
    const auto cfg = scene_cfg.empty() ? bsp::SceneConfig{} : bsp::scene_config_from_json(bsp::load_json(scene_cfg));
    const auto scene = bsp::build_scene(raster, dsm, cfg);
    std::filesystem::create_directories(out);
    bsp::save_json(out / "scene.json", bsp::scene_to_json(scene));
    std::size_t prio = 0;
    for (const auto& u : scene.users) prio += u.priority ? 1 : 0;
    std::printf("buildings %zu\nusers %zu (priority %zu)\ncandidates %zu\nfixed_bs %zu\n", scene.buildings.size(),
                scene.users.size(), prio, scene.candidates.size(), scene.fixed_bs.size());
    man.write(out);
    return 0;
  }

  if (*opt) {
    if (method != "nsga2" && m_opt < 1) throw UsageError("--method " + method + " needs --m");
    Manifest man("optimize", g);
    man.path("scene", scene_path);
    man.path("radio", radio_path);
    man.path("ga", ga_path);
    const auto scene = load_scene(scene_path);
    const auto params = load_radio(radio_path);
    auto ga = load_ga(ga_path, g);
    const bsp::Evaluator ev(scene, params, !no_blockages, ga.sinr_threshold_db);
    std::filesystem::create_directories(out);
    bsp::ParetoArchive archive;
    archive.fixed_bs_count = scene.fixed_bs.size();
    if (method == "nsga2") {
      const auto res = bsp::run_nsga2(ev, ga);
      archive = res.archive;
      bsp::save_json(out / "history.json", bsp::to_json(res.history));
    } else {
      bsp::Individual ind;
      if (method == "ga") {
        ga.max_bs = static_cast<std::size_t>(m_opt);
        ind = bsp::run_ga_single_objective(ev, ga);
      } else {
        auto k = bsp::kmeans_place(ev, scene, static_cast<std::size_t>(m_opt), load_kmeans());
        ind.sites = k.sites;
        std::sort(ind.sites.begin(), ind.sites.end());
        ind.objectives = ev.evaluate(ind.sites);
        ind.crowding = std::numeric_limits<double>::infinity();
      }
      archive.individuals.push_back(ind);
    }
    bsp::save_json(out / "archive.json", bsp::to_json(archive));
    print_front(archive);
    man.write(out);
    return 0;
  }

  if (*eval) {
    Manifest man("evaluate", g);
    man.path("scene", scene_path);
    man.path("radio", radio_path);
    man.path("ga", ga_path);
    const int sources = !sites_arg.empty() + !coords_arg.empty() + !archive_path.empty() + !plan_name.empty();
    if (sources != 1) throw UsageError("evaluate needs exactly one of --sites, --coords, --archive, --plan");
    if (!archive_path.empty() && eval_m < 1) throw UsageError("--archive needs --m");
    std::optional<bsp::ScenarioKind> kind;
    if (!plan_name.empty()) {
      try {
        kind = bsp::parse_scenario(plan_name);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }
    const auto scene = load_scene(scene_path);
    const auto params = load_radio(radio_path);
    if (kind) {
      bsp::ScenarioPlan plan;
      plan.kind = *kind;
      plan.ga = load_ga(ga_path, g);
      plan.kmeans = load_kmeans();
      plan.gnuplot = gnuplot;
      if (!counts_arg.empty()) plan.bs_counts = parse_counts(counts_arg);
      const auto bundle = bsp::run_scenario(scene, params, plan, out);
      for (const auto& r : bundle.rows)
        std::printf("%-22s total_bs=%d users_above=%zu (%.1f%%) outage=%.3f\n", r.tag.c_str(), r.total_bs,
                    r.users_above, r.pct_users_above, r.outage);
      man.write(out);
      return 0;
    }

    const double thr = load_ga(ga_path, g).sinr_threshold_db;
    std::vector<bsp::Vec3> bs;
    std::vector<bsp::Attachment> att;
    if (!coords_arg.empty()) {
      for (const auto& p : split(coords_arg, ';')) {
        const auto xyz = split(p, ',');
        if (xyz.size() != 3) throw UsageError("coordinates must be x,y,z");
        try {
          bs.push_back({std::stod(xyz[0]), std::stod(xyz[1]), std::stod(xyz[2])});
        } catch (const std::exception&) {
          throw UsageError("bad coordinate '" + p + "'");
        }
      }
      std::vector<bsp::Vec3> all = bs;
      all.insert(all.end(), scene.fixed_bs.begin(), scene.fixed_bs.end());
      att = bsp::attach_and_evaluate(bsp::sectors_for_sites(all, params), scene, params, !no_blockages);
    } else {
      std::vector<std::size_t> sites;
      if (!sites_arg.empty()) {
        for (const auto& t : split(sites_arg, ',')) {
          const long v = parse_int(t, "site id");
          if (v < 0 || static_cast<std::size_t>(v) >= scene.candidates.size())
            throw Error(ErrorCode::UnknownSite, "candidate id " + t + " is not in the scene");
          sites.push_back(static_cast<std::size_t>(v));
        }
      } else {
        const auto archive = bsp::archive_from_json(bsp::load_json(archive_path));
        sites = bsp::select_best_for_m(archive, eval_m).sites;
        for (auto s : sites)
          if (s >= scene.candidates.size()) throw Error(ErrorCode::UnknownSite, "archive site not in scene");
      }
      std::sort(sites.begin(), sites.end());
      if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) throw UsageError("duplicate site ids");
      const bsp::Evaluator ev(scene, params, !no_blockages, thr);
      att = ev.attach(sites);
      for (auto s : sites) bs.push_back(scene.candidates[s].position);
    }
    std::filesystem::create_directories(out);
    bsp::write_text_atomic(out / ("coverage_" + tag + ".csv"), bsp::coverage_csv(bsp::coverage_curve(bsp::sinrs_of(att))));
    const auto cdf = bsp::throughput_cdf(att, params);
    bsp::write_text_atomic(out / ("throughput_" + tag + ".csv"), bsp::throughput_csv(cdf));
    bsp::write_text_atomic(out / ("placement_" + tag + ".csv"), bsp::placement_csv(scene, bs));
    std::printf("users %zu above %.1f dB: %zu, mean SINR %.2f dB, outage %.3f\n", att.size(), thr,
                bsp::users_above(att, thr), bsp::mean_sinr_db(att), cdf.outage);
    man.write(out);
    return 0;
  }

  if (*cmp) {
    std::vector<bsp::Method> methods;
    for (const auto& t : split(methods_arg, ',')) {
      try {
        methods.push_back(bsp::parse_method(t));
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }
    if (methods.empty()) throw UsageError("--methods is empty");
    const auto counts = parse_counts(cmp_counts);
    if (counts.empty()) throw UsageError("--m is empty");
    Manifest man("compare", g);
    man.path("scene", scene_path);
    man.path("radio", radio_path);
    man.path("ga", ga_path);
    const auto scene = load_scene(scene_path);
    const auto params = load_radio(radio_path);
    bsp::CompareConfig cc{load_ga(ga_path, g), load_kmeans(), !no_blockages};
    const auto rows = bsp::compare_methods(scene, params, counts, methods, cc);
    std::filesystem::create_directories(out);
    bsp::write_text_atomic(out / "comparison.csv", bsp::comparison_csv(rows));
    std::fputs(bsp::comparison_csv(rows).c_str(), stdout);
    man.write(out);
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
