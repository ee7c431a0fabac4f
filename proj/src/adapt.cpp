#include "gppde/adapt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "gppde/errors.hpp"
#include "gppde/rng.hpp"

namespace gppde {

void ALConfig::validate() const {
  if (cluster_count < 1) throw ConfigError("cluster_count must be >= 1");
  if (pool_size < 1) throw ConfigError("pool_size must be >= 1");
  if (!(retain_fraction > 0.0 && retain_fraction <= 1.0))
    throw ConfigError("retain_fraction must lie in (0, 1]");
  if (!(exclusion_radius > 0.0))
    throw ConfigError("exclusion_radius must be positive");
  if (boundary_fraction < 0.0 || boundary_fraction > 1.0)
    throw ConfigError("boundary_fraction must lie in [0, 1]");
  if (retain_fraction * pool_size < 5.0 * cluster_count)
    throw ConfigError(
        "retain_fraction * pool_size must be at least 5 * cluster_count");
}

std::vector<PoolCandidate> build_pool(const Domain& domain, int pool_size,
                                      double boundary_fraction,
                                      std::int64_t seed_offset) {
  const int n_bnd = static_cast<int>(std::lround(boundary_fraction * pool_size));
  const int n_int = pool_size - n_bnd;
  std::vector<PoolCandidate> pool;
  pool.reserve(pool_size);
  if (n_int > 0) {
    for (Point& p : sample_interior(domain, n_int, seed_offset)) {
      pool.push_back({std::move(p), Membership::Interior, -1});
    }
  }
  if (n_bnd > 0) {
    for (auto& [p, face] : sample_boundary(domain, n_bnd, seed_offset)) {
      pool.push_back({std::move(p), Membership::Boundary, face});
    }
  }
  return pool;
}

std::vector<PoolCandidate> filter_pool(const std::vector<PoolCandidate>& pool,
                                       const CollocationSet& existing,
                                       double r_excl) {
  const double r2 = r_excl * r_excl;
  std::vector<PoolCandidate> kept;
  kept.reserve(pool.size());
  for (const PoolCandidate& c : pool) {
    bool excluded = false;
    for (std::size_t i = 0; i < existing.size(); ++i) {
      if ((c.point - existing.entry(i).point).squaredNorm() < r2) {
        excluded = true;
        break;
      }
    }
    if (!excluded) kept.push_back(c);
  }
  return kept;
}

std::vector<RankedCandidate> rank_and_retain(
    const std::vector<PoolCandidate>& filtered, const PosteriorModel& model,
    double retain_fraction, int mc_samples, std::uint64_t mc_seed) {
  if (filtered.empty()) throw Error("rank_and_retain needs a non-empty pool");
  const std::size_t n = filtered.size();
  Eigen::VectorXd zeta(n);
  const bool exact = model.size() <= 0 ||
                     (model.system() != nullptr && model.system()->has_dense());
  if (exact) {
    std::vector<Point> pts;
    pts.reserve(n);
    for (const PoolCandidate& c : filtered) pts.push_back(c.point);
    zeta = model.variance_exact_batch(pts);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      zeta[i] = model.variance_mc(mc_samples, filtered[i].point, mc_seed);
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return zeta[a] > zeta[b]; });
  const std::size_t keep = static_cast<std::size_t>(
      std::ceil(retain_fraction * static_cast<double>(n)));
  std::vector<RankedCandidate> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep && i < n; ++i) {
    out.push_back({filtered[order[i]], zeta[order[i]]});
  }
  return out;
}

namespace {

double wcss(const std::vector<Point>& points, const std::vector<int>& assign,
            const std::vector<Point>& centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += (points[i] - centroids[assign[i]]).squaredNorm();
  }
  return total;
}

}  // namespace

namespace {

KMeansResult kmeans_single(const std::vector<Point>& points, int cluster_count,
                           std::uint64_t seed, int max_iters) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw Error("kmeans needs at least one point");
  if (max_iters < 1) max_iters = 1;
  const int k = std::min(cluster_count, n);
  Rng rng(seed);

  // k-means++ seeding.
  std::vector<Point> centroids;
  centroids.reserve(k);
  centroids.push_back(points[rng.uniform_int(n)]);
  std::vector<double> dist2(n, 0.0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& m : centroids) {
        best = std::min(best, (points[i] - m).squaredNorm());
      }
      dist2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      centroids.push_back(points[rng.uniform_int(n)]);
      continue;
    }
    double target = rng.uniform() * total;
    int chosen = n - 1;
    for (int i = 0; i < n; ++i) {
      target -= dist2[i];
      if (target <= 0.0) {
        chosen = i;
        break;
      }
    }
    centroids.push_back(points[chosen]);
  }

  std::vector<int> assign(n, -1);
  KMeansResult result;
  for (int sweep = 0; sweep < max_iters; ++sweep) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best_c = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (points[i] - centroids[c]).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best_c = c;
        }
      }
      if (assign[i] != best_c) {
        assign[i] = best_c;
        changed = true;
      }
    }

    // Reseed empty clusters to the point farthest from its centroid.
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) ++counts[assign[i]];
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int far_i = 0;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (counts[assign[i]] <= 1) continue;
        const double d = (points[i] - centroids[assign[i]]).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far_i = i;
        }
      }
      --counts[assign[far_i]];
      assign[far_i] = c;
      counts[c] = 1;
      centroids[c] = points[far_i];
      changed = true;
    }

    for (int c = 0; c < k; ++c) {
      Point sum = Point::Zero(points[0].size());
      int cnt = 0;
      for (int i = 0; i < n; ++i) {
        if (assign[i] == c) {
          sum += points[i];
          ++cnt;
        }
      }
      centroids[c] = sum / static_cast<double>(cnt);
    }
    result.wcss_trace.push_back(wcss(points, assign, centroids));
    if (!changed) break;
  }

  result.clusters.resize(k);
  for (int c = 0; c < k; ++c) result.clusters[c].centroid = centroids[c];
  for (int i = 0; i < n; ++i) {
    result.clusters[assign[i]].member_indices.push_back(i);
  }
  return result;
}

}  // namespace

KMeansResult kmeans(const std::vector<Point>& points, int cluster_count,
                    std::uint64_t seed, int max_iters) {
  // Lloyd converges to a seeding-dependent local optimum; a few restarts
  // keep the partition quality stable.  Deterministic via derived seeds.
  constexpr int kRestarts = 8;
  KMeansResult best;
  double best_wcss = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < kRestarts; ++attempt) {
    KMeansResult result = kmeans_single(
        points, cluster_count, seed + 0x51ED2701ull * attempt, max_iters);
    const double w = result.wcss_trace.empty()
                         ? std::numeric_limits<double>::infinity()
                         : result.wcss_trace.back();
    if (w < best_wcss) {
      best_wcss = w;
      best = std::move(result);
    }
  }
  return best;
}

std::vector<int> select_representatives(const KMeansResult& result,
                                        const std::vector<Point>& points) {
  std::vector<int> reps;
  reps.reserve(result.clusters.size());
  for (const Cluster& cluster : result.clusters) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i : cluster.member_indices) {
      const double d = (points[i] - cluster.centroid).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best >= 0) reps.push_back(best);
  }
  return reps;
}

namespace {

// Maps previous weights onto the grown interior-first layout; new
// coordinates start at zero.
Eigen::VectorXd pad_warm_start(const Eigen::VectorXd& prev,
                               std::size_t prev_interior,
                               std::size_t new_interior, std::size_t new_total) {
  using Index = Eigen::Index;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Index>(new_total));
  out.head(static_cast<Index>(prev_interior)) =
      prev.head(static_cast<Index>(prev_interior));
  const Index prev_boundary = prev.size() - static_cast<Index>(prev_interior);
  out.segment(static_cast<Index>(new_interior), prev_boundary) =
      prev.tail(prev_boundary);
  return out;
}

}  // namespace

ALResult active_learning_loop(const ProblemSpec& problem,
                              CollocationSet initial,
                              const KernelParams& kernel, double lambda,
                              const ALConfig& al, const SDDConfig& sdd) {
  al.validate();
  problem.validate();
  if (initial.n_interior() < 1 || initial.n_boundary() < 1)
    throw Error("initial collocation set needs interior and boundary points");

  const Domain& domain = problem.domain;
  const std::vector<Point> probe =
      sample_interior(domain, al.probe_grid_size, 10'000'000);

  auto solve_system = [&](CollocationSet cs, const Eigen::VectorXd* warm) {
    std::shared_ptr<const GramSystem> sys;
    if (cs.size() <= al.dense_cap) {
      sys = std::make_shared<GramSystem>(
          GramSystem::assemble_dense(std::move(cs), kernel, lambda, al.dense_cap));
    } else {
      sys = std::make_shared<GramSystem>(
          GramSystem::matrix_free(std::move(cs), kernel, lambda));
    }
    RepresenterWeights w = solve_sdd(*sys, sdd, warm);
    const VarianceMode mode = sys->has_dense() ? VarianceMode::Exact
                                               : VarianceMode::MonteCarlo;
    return PosteriorModel(sys, std::move(w), mode, sdd);
  };

  auto probe_mean_variance = [&](const PosteriorModel& model) {
    if (model.system()->has_dense()) {
      return model.variance_exact_batch(probe).mean();
    }
    double sum = 0.0;
    for (const Point& p : probe) {
      sum += model.variance_mc(al.mc_samples, p, al.seed);
    }
    return sum / static_cast<double>(probe.size());
  };

  auto probe_rel_mse = [&](const PosteriorModel& model) -> std::optional<double> {
    if (!problem.ground_truth) return std::nullopt;
    double num = 0.0, den = 0.0;
    for (const Point& p : probe) {
      const double t = problem.ground_truth(p);
      const double e = model.mean(p) - t;
      num += e * e;
      den += t * t;
    }
    if (den <= 0.0) return std::nullopt;
    return 100.0 * num / den;
  };

  const auto t0 = std::chrono::steady_clock::now();
  CollocationSet colset = std::move(initial);
  PosteriorModel model = solve_system(colset, nullptr);
  ALHistory history;
  history.status = ALStatus::ReachedMaxIterations;

  for (int iter = 1; iter <= al.max_iterations; ++iter) {
    // Fresh skip offsets per iteration; the 4x margin leaves room for the
    // disk's rejection sampling.
    const std::int64_t offset =
        static_cast<std::int64_t>(al.seed % 1'000'000) +
        static_cast<std::int64_t>(iter) * 4 * al.pool_size;
    std::vector<PoolCandidate> pool =
        build_pool(domain, al.pool_size, al.boundary_fraction, offset);
    std::vector<PoolCandidate> filtered =
        filter_pool(pool, colset, al.exclusion_radius);
    if (filtered.empty()) {
      filtered = filter_pool(pool, colset, 0.5 * al.exclusion_radius);
    }
    if (filtered.empty()) {
      history.status = ALStatus::PoolExhausted;
      break;
    }

    std::vector<RankedCandidate> retained = rank_and_retain(
        filtered, model, al.retain_fraction, al.mc_samples, al.seed + iter);
    const double max_acq = retained.front().acquisition;

    // The acquisition batch is allocated between boundary and interior
    // candidates in the boundary_fraction proportion; each group is
    // clustered on its own so boundary picks cannot be absorbed into
    // interior-dominated clusters.
    std::vector<const PoolCandidate*> int_cands, bnd_cands;
    for (const RankedCandidate& rc : retained) {
      (rc.candidate.location == Membership::Interior ? int_cands : bnd_cands)
          .push_back(&rc.candidate);
    }
    int want_bnd = static_cast<int>(
        std::lround(al.boundary_fraction * al.cluster_count));
    int want_int = al.cluster_count - want_bnd;
    if (bnd_cands.empty()) {
      want_int = al.cluster_count;
      want_bnd = 0;
    } else if (int_cands.empty()) {
      want_bnd = al.cluster_count;
      want_int = 0;
    }

    std::vector<const PoolCandidate*> selected;
    auto pick_group = [&](const std::vector<const PoolCandidate*>& group,
                          int count, std::uint64_t seed) {
      if (group.empty() || count < 1) return;
      std::vector<Point> pts;
      pts.reserve(group.size());
      for (const PoolCandidate* c : group) pts.push_back(c->point);
      const KMeansResult clusters = kmeans(pts, count, seed);
      for (int idx : select_representatives(clusters, pts)) {
        selected.push_back(group[idx]);
      }
    };
    pick_group(int_cands, want_int, al.seed + 7919 * iter);
    pick_group(bnd_cands, want_bnd, al.seed + 7919 * iter + 1);

    const std::size_t prev_interior = colset.n_interior();
    CollocationSet grown;
    for (const CollocationEntry& e : colset.interior()) grown.add_interior(e);
    for (const PoolCandidate* c : selected) {
      if (c->location == Membership::Interior) {
        grown.add_interior(problem.make_interior_entry(c->point));
      }
    }
    for (const CollocationEntry& e : colset.boundary()) grown.add_boundary(e);
    for (const PoolCandidate* c : selected) {
      if (c->location == Membership::Boundary) {
        grown.add_boundary(problem.make_boundary_entry(c->point, c->face_id));
      }
    }

    const Eigen::VectorXd warm = pad_warm_start(
        model.weights(), prev_interior, grown.n_interior(), grown.size());
    colset = grown;
    model = solve_system(colset, &warm);

    ALIterationRecord rec;
    rec.iteration = iter;
    rec.n_points = colset.size();
    rec.mean_probe_variance = probe_mean_variance(model);
    rec.max_acquisition = max_acq;
    rec.relative_mse_percent = probe_rel_mse(model);
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    history.records.push_back(rec);

    if (rec.mean_probe_variance <= al.stop_tolerance) {
      history.status = ALStatus::ReachedTolerance;
      break;
    }
  }

  return ALResult{std::move(model), std::move(history), std::move(colset)};
}

}  // namespace gppde
