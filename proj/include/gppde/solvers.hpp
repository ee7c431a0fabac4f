#ifndef GPPDE_SOLVERS_HPP_
#define GPPDE_SOLVERS_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "gppde/gram.hpp"
#include "gppde/rng.hpp"

namespace gppde {

// Coefficient vector of the kernel expansion defining the posterior mean.
struct RepresenterWeights {
  Eigen::VectorXd values;
  std::int64_t iterations_used = 0;
  std::optional<double> final_primal_loss;
};

// Stochastic dual descent hyperparameters.  Zero-valued `iterations` or
// `step_size` select the size-dependent defaults at solve time:
//   beta = 0.5 N / trace(K + lambda I),   I = 50 N / b.
struct SDDConfig {
  std::int64_t iterations = 0;
  int batch_size = 128;
  double step_size = 0.0;
  double momentum = 0.9;
  double averaging_weight = 0.001;
  std::uint64_t seed = 0;
  std::int64_t loss_check_every = 0;  // 0 = never; primal loss costs O(N^2)
  int max_step_halvings = 10;
};

struct SDDTraceRecord {
  std::int64_t iteration;
  double dual_loss;
  double primal_loss;
  double wall_seconds;
};

// Direct solve of (K + lambda I) alpha = g by Cholesky factorization with
// iterative refinement to a residual of 1e-8 ||g||.  Throws
// IllConditionedSystemError (with the failing pivot index) if the matrix
// is not numerically positive definite.
RepresenterWeights solve_direct(const GramSystem& system);

// Algorithm: minimize the dual objective by momentum-accelerated
// stochastic coordinate gradient steps with geometric iterate averaging.
// Per-iteration work is O(batch_size * N); rows come from the dense matrix
// when materialized and are otherwise computed on demand.  Deterministic
// given the seed.  Detected divergence (||alpha||_inf > 1e12) halves the
// step size and restarts, up to `max_step_halvings` times, then throws
// StepSizeTooLargeError.
RepresenterWeights solve_sdd(const GramSystem& system, const SDDConfig& config,
                             const Eigen::VectorXd* warm_start = nullptr,
                             std::vector<SDDTraceRecord>* trace = nullptr,
                             std::vector<double>* iteration_seconds = nullptr);

// 1/2 ||g - K alpha||^2 + (lambda/2) alpha^T K alpha.  O(N^2).
double primal_loss(const GramSystem& system, const Eigen::VectorXd& alpha);

// 1/2 alpha^T (K + lambda I) alpha - alpha^T g.  O(N^2).
double dual_loss(const GramSystem& system, const Eigen::VectorXd& alpha);

// One mini-batch estimate of the dual gradient at probe = alpha + rho V:
// (N/b) sum_{j in batch} (row_j . probe - g_j) e_j.  Exposed so the
// estimator's unbiasedness can be checked against the full gradient.
Eigen::VectorXd stochastic_dual_gradient(const GramSystem& system,
                                         const Eigen::VectorXd& probe,
                                         const std::vector<int>& batch);

}  // namespace gppde

#endif  // GPPDE_SOLVERS_HPP_
