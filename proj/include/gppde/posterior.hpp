#ifndef GPPDE_POSTERIOR_HPP_
#define GPPDE_POSTERIOR_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <map>
#include <mutex>
#include <vector>

#include "gppde/gram.hpp"
#include "gppde/solvers.hpp"

namespace gppde {

enum class VarianceMode { Exact, MonteCarlo };

// A prior draw realized as a random-feature cosine expansion
//   u(z) = s sqrt(2/M) sum_m w_m cos(omega_m . z + b_m),
// with frequencies from the kernel's spectral density.  Derivatives up to
// order 2 are analytic, which is what operator observations need.
struct PriorFunction {
  Eigen::MatrixXd frequencies;  // M x dim
  Eigen::VectorXd phases;       // in [0, 2 pi)
  Eigen::VectorXd amplitudes;   // standard normal draws
  double signal = 1.0;

  int feature_count() const { return static_cast<int>(phases.size()); }
  double operator()(const Point& z) const;
};

PriorFunction sample_prior(const KernelParams& kernel, int feature_count,
                           std::uint64_t seed);

// (op u)(z) by analytic differentiation of the cosine features.
double prior_apply(const PriorFunction& fn, const OperatorSpec& op,
                   const Point& z);

class PosteriorModel;

// A single posterior draw: prior function plus the kernel-expansion
// correction A(z)^T (alpha - beta).  Evaluation is O(N) per query.
class PosteriorSampleFunction {
 public:
  PosteriorSampleFunction(std::shared_ptr<const GramSystem> system,
                          PriorFunction fn, Eigen::VectorXd combined_weights)
      : system_(std::move(system)),
        fn_(std::move(fn)),
        combined_(std::move(combined_weights)) {}

  double operator()(const Point& z) const;

 private:
  std::shared_ptr<const GramSystem> system_;
  PriorFunction fn_;
  Eigen::VectorXd combined_;
};

// Posterior over the PDE solution defined by a Gram system and solved
// representer weights.  Exact variance needs the dense factorization; the
// Monte Carlo mode estimates variance from cached pathwise samples and is
// the fallback above the dense cap.
class PosteriorModel {
 public:
  PosteriorModel(std::shared_ptr<const GramSystem> system,
                 RepresenterWeights weights,
                 VarianceMode mode = VarianceMode::Exact,
                 SDDConfig sample_solver = {});

  // Convenience constructor for an unconditioned model (no collocation
  // points): mean 0, variance s^2.
  explicit PosteriorModel(KernelParams kernel);

  const GramSystem* system() const { return system_.get(); }
  const Eigen::VectorXd& weights() const { return weights_.values; }
  const KernelParams& kernel() const;
  VarianceMode variance_mode() const { return mode_; }
  std::size_t size() const { return system_ ? system_->size() : 0; }

  // A(z)^T alpha.
  double mean(const Point& z) const;

  // k(z,z) - A(z)^T (K + lambda I)^{-1} A(z), clamped to [0, k(z,z)].
  double variance_exact(const Point& z) const;

  // Batched exact variance for many query points.
  Eigen::VectorXd variance_exact_batch(const std::vector<Point>& zs) const;

  // Unbiased sample variance across `sample_count` pathwise draws.  The
  // per-sample weight solves are cached, so repeated queries with the same
  // (sample_count, seed) pay only O(S N) per point.
  double variance_mc(int sample_count, const Point& z,
                     std::uint64_t seed) const;

  // Draw one posterior sample function: prior draw + mean correction with
  // per-sample weights beta = (K + lambda I)^{-1} (O[fn](Z) + eps),
  // eps ~ N(0, lambda I).
  PosteriorSampleFunction pathwise_sample(const PriorFunction& fn,
                                          std::uint64_t noise_seed) const;

  // Count of negative exact-variance evaluations clamped to zero.
  std::int64_t clamped_variance_count() const { return clamp_count_; }

  int prior_feature_count() const { return prior_features_; }
  void set_prior_feature_count(int m) { prior_features_ = m; }

 private:
  Eigen::VectorXd solve_regularized(const Eigen::VectorXd& rhs) const;
  void ensure_factorization() const;

  std::shared_ptr<const GramSystem> system_;
  RepresenterWeights weights_;
  VarianceMode mode_;
  SDDConfig sample_solver_;
  KernelParams prior_kernel_;  // used when system_ is null
  int prior_features_ = 1024;

  mutable std::unique_ptr<std::mutex> mutex_ =
      std::make_unique<std::mutex>();
  mutable std::unique_ptr<Eigen::LLT<Eigen::MatrixXd>> llt_;
  mutable std::int64_t clamp_count_ = 0;
  mutable std::map<std::pair<int, std::uint64_t>,
                   std::shared_ptr<std::vector<PosteriorSampleFunction>>>
      ensemble_cache_;
};

}  // namespace gppde

#endif  // GPPDE_POSTERIOR_HPP_
