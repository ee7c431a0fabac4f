#ifndef GPPDE_ADAPT_HPP_
#define GPPDE_ADAPT_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "gppde/geometry.hpp"
#include "gppde/posterior.hpp"
#include "gppde/problem.hpp"
#include "gppde/solvers.hpp"

namespace gppde {

// Hyperparameters of the refinement loop.
struct ALConfig {
  int pool_size = 512;
  double exclusion_radius = 0.05;
  double retain_fraction = 0.5;
  int cluster_count = 5;
  // Share of the candidate pool drawn on the boundary, and of each
  // selected batch allocated to boundary candidates.
  double boundary_fraction = 0.2;
  int max_iterations = 10;
  double stop_tolerance = 0.0;  // on probe-grid mean posterior variance
  std::uint64_t seed = 0;
  int probe_grid_size = 512;
  int mc_samples = 64;  // acquisition samples above the dense cap
  std::size_t dense_cap = 20000;

  void validate() const;
};

enum class ALStatus { ReachedTolerance, ReachedMaxIterations, PoolExhausted };

struct ALIterationRecord {
  int iteration;
  std::size_t n_points;
  double mean_probe_variance;
  double max_acquisition;
  std::optional<double> relative_mse_percent;  // vs ground truth, probe grid
  double wall_seconds;
};

struct ALHistory {
  std::vector<ALIterationRecord> records;
  ALStatus status = ALStatus::ReachedMaxIterations;
};

struct PoolCandidate {
  Point point;
  Membership location;  // Interior or Boundary
  int face_id = -1;     // valid for boundary candidates
};

// Sobol candidate pool split between interior and boundary in proportion
// (1 - boundary_fraction, boundary_fraction).  Distinct `seed_offset`
// values give fresh, non-repeating pools.
std::vector<PoolCandidate> build_pool(const Domain& domain, int pool_size,
                                      double boundary_fraction,
                                      std::int64_t seed_offset);

// Candidates at Euclidean distance >= r_excl from every existing
// collocation point.
std::vector<PoolCandidate> filter_pool(const std::vector<PoolCandidate>& pool,
                                       const CollocationSet& existing,
                                       double r_excl);

struct RankedCandidate {
  PoolCandidate candidate;
  double acquisition;
};

// Top ceil(retain_fraction * |filtered|) candidates by posterior solution
// variance, descending; ties broken by candidate index.
std::vector<RankedCandidate> rank_and_retain(
    const std::vector<PoolCandidate>& filtered, const PosteriorModel& model,
    double retain_fraction, int mc_samples = 64, std::uint64_t mc_seed = 0);

struct Cluster {
  Point centroid;
  std::vector<int> member_indices;  // into the clustered point list
};

struct KMeansResult {
  std::vector<Cluster> clusters;
  std::vector<double> wcss_trace;  // within-cluster sum of squares per sweep
};

// Lloyd iterations from k-means++ seeding.  Every returned cluster is
// non-empty (an empty cluster is reseeded to the point farthest from its
// centroid).  If there are fewer points than requested clusters the
// cluster count is reduced to the point count.
KMeansResult kmeans(const std::vector<Point>& points, int cluster_count,
                    std::uint64_t seed, int max_iters = 100);

// Index of the member closest to each cluster centroid (ties: lowest
// index).  The representative is always an element of the clustered set.
std::vector<int> select_representatives(const KMeansResult& result,
                                        const std::vector<Point>& points);

struct ALResult {
  PosteriorModel model;
  ALHistory history;
  CollocationSet colset;
};

// The refinement loop: per iteration, build a pool, filter by exclusion
// radius, rank by acquisition, retain, cluster, add one representative per
// cluster with the operator and target of its location, and re-solve the
// weights by SDD warm-started from the previous iterate.  Stops on the
// probe-grid variance tolerance, the iteration cap, or pool exhaustion
// (after one exclusion-radius halving).
ALResult active_learning_loop(const ProblemSpec& problem,
                              CollocationSet initial,
                              const KernelParams& kernel, double lambda,
                              const ALConfig& al, const SDDConfig& sdd);

}  // namespace gppde

#endif  // GPPDE_ADAPT_HPP_
