#pragma once

// Iterative k-means placement with Most-Unserved-Sector reseeding, and the
// method comparison harness.

#include <bsplace/metrics.hpp>
#include <bsplace/optimizer.hpp>

#include <string>
#include <string_view>

namespace bsp {

struct KmeansConfig {
  std::size_t max_iterations = 100;
  std::size_t rounds = 5;
  std::uint64_t seed = 0;

  void validate() const {
    if (max_iterations < 1 || rounds < 1)
      throw Error(ErrorCode::InvalidConfig, "k-means needs at least one iteration and one round");
  }
};

struct KmeansState {
  std::vector<Vec2> centroids;
  std::vector<std::size_t> assignments;
  std::size_t mus_index = 0;
};

struct KmeansPlacement {
  std::vector<std::size_t> sites;  // candidate ids, one per centroid
  std::vector<Vec3> positions;
  std::size_t users_above = 0;
  KmeansState state;
};

namespace detail {

inline double sq_dist(Vec2 a, Vec2 b) {
  const Vec2 d = a - b;
  return dot(d, d);
}

inline double cluster_sse(std::span<const Vec2> pts, const KmeansState& s) {
  double e = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) e += sq_dist(pts[i], s.centroids[s.assignments[i]]);
  return e;
}

}  // namespace detail

// Lloyd iterations to an assignment fixpoint. Returns the within-cluster sum
// of squares after every assignment and every update step.
inline std::vector<double> lloyd(std::span<const Vec2> pts, KmeansState& s, std::size_t max_iterations) {
  std::vector<double> trace;
  const std::size_t k = s.centroids.size();
  s.assignments.assign(pts.size(), SIZE_MAX);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::size_t best = 0;
      double bd = detail::sq_dist(pts[i], s.centroids[0]);
      for (std::size_t j = 1; j < k; ++j) {
        const double d = detail::sq_dist(pts[i], s.centroids[j]);
        if (d < bd) bd = d, best = j;
      }
      if (s.assignments[i] != best) changed = true;
      s.assignments[i] = best;
    }
    trace.push_back(detail::cluster_sse(pts, s));
    if (!changed) break;
    std::vector<Vec2> sum(k);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      sum[s.assignments[i]] = sum[s.assignments[i]] + pts[i];
      ++count[s.assignments[i]];
    }
    for (std::size_t j = 0; j < k; ++j)
      if (count[j]) s.centroids[j] = (1.0 / static_cast<double>(count[j])) * sum[j];
    trace.push_back(detail::cluster_sse(pts, s));
  }
  return trace;
}

// Nearest free candidate for each centroid in turn.
inline std::vector<std::size_t> snap_to_candidates(std::span<const Vec2> centroids,
                                                   std::span<const CandidateSite> candidates) {
  if (centroids.size() > candidates.size())
    throw Error(ErrorCode::InvalidConfig, "more clusters than candidate sites");
  std::vector<char> used(candidates.size(), 0);
  std::vector<std::size_t> out;
  for (auto c : centroids) {
    std::size_t best = SIZE_MAX;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (used[j]) continue;
      const double d = detail::sq_dist(c, candidates[j].position.xy());
      if (d < bd) bd = d, best = j;
    }
    used[best] = 1;
    out.push_back(candidates[best].id);
  }
  return out;
}

inline KmeansPlacement kmeans_place(const Evaluator& ev, const Scene& scene, std::size_t k, const KmeansConfig& cfg) {
  cfg.validate();
  if (scene.users.empty() || scene.candidates.empty()) throw Error(ErrorCode::EmptyScene, "k-means needs users and candidates");
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be at least 1");
  if (k > scene.candidates.size()) throw Error(ErrorCode::InvalidConfig, "more clusters than candidate sites");

  std::vector<Vec2> pts;
  for (const auto& u : scene.users) pts.push_back(u.position.xy());
  Rng rng(cfg.seed);
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  KmeansState state;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t pos = j % idx.size();
    if (pos == j) std::swap(idx[j], idx[j + uniform_index(rng, idx.size() - j)]);
    state.centroids.push_back(pts[idx[pos]]);
  }

  KmeansPlacement best;
  bool have = false;
  const double thr = ev.threshold_db();
  for (std::size_t round = 0; round < cfg.rounds; ++round) {
    lloyd(pts, state, cfg.max_iterations);
    const auto sites = snap_to_candidates(state.centroids, scene.candidates);
    const auto att = ev.attach(sites);
    const std::size_t above = users_above(att, thr);

    std::vector<std::size_t> served(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (att[i].sinr_db > thr) ++served[state.assignments[i]];
    state.mus_index = static_cast<std::size_t>(std::min_element(served.begin(), served.end()) - served.begin());

    if (!have || above > best.users_above) {
      best.sites = sites;
      best.users_above = above;
      best.state = state;
      have = true;
    }
    // Reseed the most unserved cluster at its worst-served member.
    std::size_t worst = SIZE_MAX;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (state.assignments[i] != state.mus_index) continue;
      if (worst == SIZE_MAX || att[i].sinr_db < att[worst].sinr_db) worst = i;
    }
    if (worst == SIZE_MAX) {
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (worst == SIZE_MAX || att[i].sinr_db < att[worst].sinr_db) worst = i;
    }
    state.centroids[state.mus_index] = pts[worst];
  }
  for (auto s : best.sites) best.positions.push_back(scene.candidates[s].position);
  return best;
}

inline KmeansPlacement kmeans_place(const Scene& scene, std::size_t k, const RadioParams& params,
                                    const KmeansConfig& cfg, double threshold_db = 10.0, bool use_blockages = true) {
  const Evaluator ev(scene, params, use_blockages, threshold_db);
  return kmeans_place(ev, scene, k, cfg);
}

enum class Method { Nsga2, Ga, Kmeans };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Nsga2: return "nsga2";
    case Method::Ga: return "ga";
    case Method::Kmeans: return "kmeans";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "nsga2") return Method::Nsga2;
  if (s == "ga") return Method::Ga;
  if (s == "kmeans") return Method::Kmeans;
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(s) + "'");
}

struct CompareConfig {
  GaConfig ga;
  KmeansConfig kmeans;
  bool use_blockages = true;
};

struct ComparisonRow {
  Method method = Method::Nsga2;
  int m = 0;
  std::vector<std::size_t> sites;
  std::vector<Attachment> attachments;
  double pct_users_above_threshold = 0.0;
  double mean_sinr_db = 0.0;
  CoverageCurve coverage;
};

inline ComparisonRow make_row(Method method, int m, std::vector<std::size_t> sites, const Evaluator& ev) {
  ComparisonRow row{method, m, std::move(sites), {}, 0.0, 0.0, {}};
  row.attachments = ev.attach(row.sites);
  row.pct_users_above_threshold =
      100.0 * static_cast<double>(users_above(row.attachments, ev.threshold_db())) /
      static_cast<double>(row.attachments.size());
  row.mean_sinr_db = mean_sinr_db(row.attachments);
  row.coverage = coverage_curve(sinrs_of(row.attachments));
  return row;
}

inline std::vector<ComparisonRow> compare_methods(const Evaluator& ev, const Scene& scene, std::span<const int> bs_counts,
                                                  std::span<const Method> methods, const CompareConfig& cfg) {
  std::vector<Method> uniq;
  for (auto m : methods)
    if (std::find(uniq.begin(), uniq.end(), m) == uniq.end()) uniq.push_back(m);
  for (int m : bs_counts)
    if (m < 1) throw Error(ErrorCode::InvalidConfig, "station counts must be positive");

  std::vector<ComparisonRow> rows;
  for (auto method : uniq) {
    if (method == Method::Nsga2) {
      GaConfig g = cfg.ga;
      for (int m : bs_counts) g.max_bs = std::max(g.max_bs, static_cast<std::size_t>(m));
      const auto res = run_nsga2(ev, g);
      for (int m : bs_counts) rows.push_back(make_row(method, m, select_best_for_m(res.archive, m).sites, ev));
    } else if (method == Method::Ga) {
      for (int m : bs_counts) {
        GaConfig g = cfg.ga;
        g.max_bs = static_cast<std::size_t>(m);
        rows.push_back(make_row(method, m, run_ga_single_objective(ev, g).sites, ev));
      }
    } else {
      for (int m : bs_counts) {
        auto sites = kmeans_place(ev, scene, static_cast<std::size_t>(m), cfg.kmeans).sites;
        std::sort(sites.begin(), sites.end());
        rows.push_back(make_row(method, m, std::move(sites), ev));
      }
    }
  }
  return rows;
}

inline std::vector<ComparisonRow> compare_methods(const Scene& scene, const RadioParams& params,
                                                  std::span<const int> bs_counts, std::span<const Method> methods,
                                                  const CompareConfig& cfg) {
  const Evaluator ev(scene, params, cfg.use_blockages, cfg.ga.sinr_threshold_db);
  return compare_methods(ev, scene, bs_counts, methods, cfg);
}

}  // namespace bsp
