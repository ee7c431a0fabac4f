#include "gppde/solvers.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>

#include "gppde/errors.hpp"

namespace gppde {

namespace {

constexpr double kDivergenceLimit = 1e12;

// Locates the failing pivot of an indefinite matrix with an unblocked
// Cholesky sweep; only runs on the error path.
int find_failing_pivot(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd l = a;
  const int n = static_cast<int>(a.rows());
  for (int k = 0; k < n; ++k) {
    double d = l(k, k);
    if (!(d > 0.0) || !std::isfinite(d)) return k;
    d = std::sqrt(d);
    l(k, k) = d;
    for (int i = k + 1; i < n; ++i) l(i, k) /= d;
    for (int j = k + 1; j < n; ++j) {
      for (int i = j; i < n; ++i) l(i, j) -= l(i, k) * l(j, k);
    }
  }
  return n - 1;
}

Eigen::VectorXd k_times(const GramSystem& system, const Eigen::VectorXd& x) {
  if (system.has_dense()) return system.dense() * x;
  const std::size_t n = system.size();
  Eigen::VectorXd y(n);
  for (std::size_t j = 0; j < n; ++j) {
    // row() includes the lambda shift; remove it to get K alone.
    y[j] = system.row(j).dot(x) - system.lambda() * x[j];
  }
  return y;
}

}  // namespace

RepresenterWeights solve_direct(const GramSystem& system) {
  if (!system.has_dense())
    throw Error("solve_direct needs a materialized dense matrix");
  const Eigen::MatrixXd& k_mat = system.dense();
  Eigen::MatrixXd reg = k_mat;
  reg.diagonal().array() += system.lambda();

  Eigen::LLT<Eigen::MatrixXd> llt(reg);
  if (llt.info() != Eigen::Success) {
    throw IllConditionedSystemError(find_failing_pivot(reg));
  }

  const Eigen::VectorXd g = system.rhs();
  const double gnorm = g.norm();
  Eigen::VectorXd alpha = llt.solve(g);
  // Iterative refinement; fourth-derivative blocks can leave the first
  // solve a few digits short.
  for (int it = 0; it < 20; ++it) {
    Eigen::VectorXd resid = g - reg * alpha;
    if (resid.norm() <= 1e-8 * gnorm || gnorm == 0.0) break;
    alpha += llt.solve(resid);
  }

  RepresenterWeights w;
  w.values = std::move(alpha);
  w.iterations_used = 0;
  return w;
}

double primal_loss(const GramSystem& system, const Eigen::VectorXd& alpha) {
  const Eigen::VectorXd g = system.rhs();
  const Eigen::VectorXd ka = k_times(system, alpha);
  const double fit = 0.5 * (g - ka).squaredNorm();
  return fit + 0.5 * system.lambda() * alpha.dot(ka);
}

double dual_loss(const GramSystem& system, const Eigen::VectorXd& alpha) {
  const Eigen::VectorXd g = system.rhs();
  const Eigen::VectorXd ka = k_times(system, alpha);
  return 0.5 * (alpha.dot(ka) + system.lambda() * alpha.squaredNorm()) -
         alpha.dot(g);
}

Eigen::VectorXd stochastic_dual_gradient(const GramSystem& system,
                                         const Eigen::VectorXd& probe,
                                         const std::vector<int>& batch) {
  const std::size_t n = system.size();
  const Eigen::VectorXd g = system.rhs();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  const double scale = static_cast<double>(n) / static_cast<double>(batch.size());
  for (int j : batch) {
    grad[j] += scale * (system.row(j).dot(probe) - g[j]);
  }
  return grad;
}

RepresenterWeights solve_sdd(const GramSystem& system, const SDDConfig& config,
                             const Eigen::VectorXd* warm_start,
                             std::vector<SDDTraceRecord>* trace,
                             std::vector<double>* iteration_seconds) {
  const std::size_t n = system.size();
  const int b = std::min<std::size_t>(config.batch_size, n);
  if (b < 1) throw Error("SDD batch size must be at least 1");
  const std::int64_t iters =
      config.iterations > 0 ? config.iterations
                            : 50 * static_cast<std::int64_t>(n) / b + 1;
  double beta = config.step_size > 0.0
                    ? config.step_size
                    : 0.5 * static_cast<double>(n) / system.trace();
  const double rho = config.momentum;
  const double r = config.averaging_weight;

  const Eigen::VectorXd g = system.rhs();
  const double inv_b_scale = static_cast<double>(n) / static_cast<double>(b);

  // Dense rows are reused directly; otherwise rows are fetched on demand.
  const bool dense = system.has_dense();

  const auto t0 = std::chrono::steady_clock::now();
  for (int attempt = 0; attempt <= config.max_step_halvings; ++attempt) {
    Rng rng(config.seed);
    Eigen::VectorXd alpha = warm_start != nullptr
                                ? *warm_start
                                : Eigen::VectorXd::Zero(n);
    Eigen::VectorXd velocity = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd averaged = alpha;
    Eigen::VectorXd probe(n);
    std::vector<int> batch(b);
    bool diverged = false;

    for (std::int64_t i = 1; i <= iters; ++i) {
      const auto it_start = std::chrono::steady_clock::now();
      probe = alpha + rho * velocity;
      for (int k = 0; k < b; ++k) batch[k] = rng.uniform_int(static_cast<int>(n));
      velocity *= rho;
      for (int k = 0; k < b; ++k) {
        const int j = batch[k];
        double rowdot;
        if (dense) {
          rowdot = system.dense().col(j).dot(probe) + system.lambda() * probe[j];
        } else {
          rowdot = system.row(j).dot(probe);
        }
        velocity[j] -= beta * inv_b_scale * (rowdot - g[j]);
      }
      alpha += velocity;
      averaged = r * alpha + (1.0 - r) * averaged;
      if (iteration_seconds != nullptr) {
        iteration_seconds->push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          it_start)
                .count());
      }

      if (!alpha.allFinite() || alpha.cwiseAbs().maxCoeff() > kDivergenceLimit) {
        diverged = true;
        break;
      }
      if (config.loss_check_every > 0 && trace != nullptr &&
          (i % config.loss_check_every == 0 || i == iters)) {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        trace->push_back({i, dual_loss(system, averaged),
                          primal_loss(system, averaged), wall});
      }
    }

    if (!diverged) {
      RepresenterWeights w;
      w.values = std::move(averaged);
      w.iterations_used = iters;
      if (config.loss_check_every > 0) {
        w.final_primal_loss = primal_loss(system, w.values);
      }
      return w;
    }
    beta *= 0.5;
    if (trace != nullptr) trace->clear();
    if (iteration_seconds != nullptr) iteration_seconds->clear();
  }
  throw StepSizeTooLargeError(beta);
}

}  // namespace gppde
