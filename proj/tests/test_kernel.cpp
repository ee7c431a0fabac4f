#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fd_oracle.hpp"
#include "gppde/errors.hpp"
#include "gppde/kernel.hpp"
#include "gppde/rng.hpp"

using namespace gppde;
using gppde::testing::fd_apply_op_both;
using gppde::testing::fd_apply_op_left;

namespace {

KernelParams iso_kernel(int dim, double signal, double ell) {
  KernelParams k;
  k.signal = signal;
  k.lengthscales = Eigen::VectorXd::Constant(dim, ell);
  return k;
}

Point random_point(Rng& rng, int dim, double lo, double hi) {
  Point p(dim);
  for (int r = 0; r < dim; ++r) p[r] = rng.uniform(lo, hi);
  return p;
}

}  // namespace

TEST_CASE("kernel value at zero separation is the squared signal") {
  const KernelParams k = iso_kernel(2, 1.0, 1.0);
  Point z(2);
  z << 0.3, -0.7;
  CHECK(kernel_eval(k, z, z) == doctest::Approx(1.0));
}

TEST_CASE("kernel closed form at unit separation") {
  const KernelParams k = iso_kernel(1, 2.0, 1.0);
  Point a(1), b(1);
  a << 0.0;
  b << 1.0;
  CHECK(kernel_eval(k, a, b) == doctest::Approx(4.0 * std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("kernel is symmetric in its arguments") {
  const KernelParams k = iso_kernel(3, 1.3, 0.6);
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const Point a = random_point(rng, 3, -1.0, 1.0);
    const Point b = random_point(rng, 3, -1.0, 1.0);
    CHECK(kernel_eval(k, a, b) == kernel_eval(k, b, a));
  }
}

TEST_CASE("kernel rejects mismatched dimensions") {
  const KernelParams k = iso_kernel(2, 1.0, 1.0);
  Point a(2), b(3);
  a.setZero();
  b.setZero();
  CHECK_THROWS_AS(kernel_eval(k, a, b), DimensionMismatchError);
}

TEST_CASE("per-dimension derivative factors at zero separation") {
  CHECK(dim_factor_derivative(1.0, 0.4, 0.4, 1, 0) == 0.0);
  CHECK(dim_factor_derivative(1.0, 0.4, 0.4, 2, 0) == doctest::Approx(-1.0));
  CHECK(dim_factor_derivative(1.0, 0.4, 0.4, 2, 2) == doctest::Approx(3.0));
  // Lengthscale scaling of the same identities.
  CHECK(dim_factor_derivative(0.5, 0.4, 0.4, 2, 0) == doctest::Approx(-4.0));
  CHECK(dim_factor_derivative(0.5, 0.4, 0.4, 2, 2) == doctest::Approx(3.0 / 0.0625));
}

TEST_CASE("derivative factors match nested finite differences") {
  // FD of the raw 1D Gaussian factor, nesting a central stencil per
  // argument; Richardson-extrapolated.
  auto factor = [](double ell, double a, double b) {
    const double d = a - b;
    return std::exp(-d * d / (2.0 * ell * ell));
  };
  auto fd = [&](double ell, double a, double b, int n, int m, double h) {
    auto db = [&](double aa) {
      if (m == 0) return factor(ell, aa, b);
      if (m == 1)
        return (factor(ell, aa, b + h) - factor(ell, aa, b - h)) / (2.0 * h);
      return (factor(ell, aa, b + h) - 2.0 * factor(ell, aa, b) +
              factor(ell, aa, b - h)) / (h * h);
    };
    if (n == 0) return db(a);
    if (n == 1) return (db(a + h) - db(a - h)) / (2.0 * h);
    return (db(a + h) - 2.0 * db(a) + db(a - h)) / (h * h);
  };
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const double ell = rng.uniform(0.3, 1.5);
    const double a = rng.uniform(-1.0, 1.0);
    const double b = rng.uniform(-1.0, 1.0);
    const int n = rng.uniform_int(3);
    const int m = rng.uniform_int(3);
    const double h = 0.02 * ell;
    const double coarse = fd(ell, a, b, n, m, h);
    const double fine = fd(ell, a, b, n, m, 0.5 * h);
    const double oracle = (4.0 * fine - coarse) / 3.0;
    const double got = dim_factor_derivative(ell, a, b, n, m);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-5).scale(1.0 / (ell * ell)));
  }
}

TEST_CASE("identity operator reproduces the kernel") {
  const KernelParams k = iso_kernel(2, 1.4, 0.8);
  const OperatorSpec id = OperatorSpec::identity(2);
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const Point a = random_point(rng, 2, -1.0, 1.0);
    const Point b = random_point(rng, 2, -1.0, 1.0);
    CHECK(apply_op_left(id, k, a, b) == doctest::Approx(kernel_eval(k, a, b)));
    CHECK(apply_op_both(id, id, k, a, b) == doctest::Approx(kernel_eval(k, a, b)));
  }
}

TEST_CASE("negative laplacian of the kernel at zero separation") {
  const KernelParams k = iso_kernel(2, 1.0, 1.0);
  const OperatorSpec neg_lap = OperatorSpec::negative_laplacian(2);
  Point z(2);
  z << 0.2, 0.9;
  CHECK(apply_op_left(neg_lap, k, z, z) == doctest::Approx(2.0));
  CHECK(apply_op_both(neg_lap, neg_lap, k, z, z) == doctest::Approx(8.0));
}

TEST_CASE("identity right operator reduces apply_op_both to apply_op_left") {
  const KernelParams k = iso_kernel(2, 1.0, 0.4);
  const OperatorSpec heat = OperatorSpec::heat(0.01);
  const OperatorSpec id = OperatorSpec::identity(2);
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const Point a = random_point(rng, 2, 0.0, 1.0);
    const Point b = random_point(rng, 2, 0.0, 1.0);
    CHECK(apply_op_both(heat, id, k, a, b) ==
          doctest::Approx(apply_op_left(heat, k, a, b)).epsilon(1e-13));
  }
}

TEST_CASE("operator-applied kernel matches the finite-difference oracle") {
  struct GeometryCase {
    KernelParams kernel;
    std::vector<OperatorSpec> ops;
    double lo, hi;
  };
  std::vector<GeometryCase> cases;
  {
    KernelParams k;
    k.signal = 1.0;
    k.lengthscales = Eigen::Vector2d(0.5, 0.5);
    cases.push_back({k,
                     {OperatorSpec::negative_laplacian(2), OperatorSpec::identity(2)},
                     -1.0, 1.0});
  }
  {
    KernelParams k;
    k.signal = 1.0;
    k.lengthscales = Eigen::Vector3d(0.4, 0.4, 0.4);
    cases.push_back({k,
                     {OperatorSpec::negative_laplacian(3), OperatorSpec::identity(3)},
                     0.0, 1.0});
  }
  {
    KernelParams k;
    k.signal = 1.0;
    k.lengthscales = Eigen::Vector2d(0.3, 0.6);
    cases.push_back({k,
                     {OperatorSpec::heat(0.01), OperatorSpec::identity(2),
                      OperatorSpec::partial(2, 1, 1)},
                     0.0, 1.0});
  }

  Rng rng(101);
  for (const GeometryCase& gc : cases) {
    const int d = gc.kernel.dim();
    for (int pair = 0; pair < 40; ++pair) {
      const Point a = random_point(rng, d, gc.lo, gc.hi);
      const Point b = random_point(rng, d, gc.lo, gc.hi);
      for (const OperatorSpec& opl : gc.ops) {
        const double left = apply_op_left(opl, gc.kernel, a, b);
        const double left_fd = fd_apply_op_left(opl, gc.kernel, a, b);
        CHECK(left == doctest::Approx(left_fd).epsilon(1e-5).scale(1e-3));
        for (const OperatorSpec& opr : gc.ops) {
          const double both = apply_op_both(opl, opr, gc.kernel, a, b);
          const double both_fd = fd_apply_op_both(opl, opr, gc.kernel, a, b);
          CHECK(both == doctest::Approx(both_fd).epsilon(1e-5).scale(1e-3));
        }
      }
    }
  }
}

TEST_CASE("adjoint symmetry of the factorized form") {
  const KernelParams k = iso_kernel(2, 1.1, 0.45);
  const OperatorSpec neg_lap = OperatorSpec::negative_laplacian(2);
  const OperatorSpec heat = OperatorSpec::heat(0.25);
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    const Point a = random_point(rng, 2, -1.0, 1.0);
    const Point b = random_point(rng, 2, -1.0, 1.0);
    CHECK(apply_op_both(neg_lap, heat, k, a, b) ==
          doctest::Approx(apply_op_both(heat, neg_lap, k, b, a))
              .epsilon(1e-14));
  }
}

TEST_CASE("small operator Gram matrices are positive semi-definite") {
  KernelParams k;
  k.signal = 1.0;
  k.lengthscales = Eigen::Vector2d(0.5, 0.5);
  const OperatorSpec neg_lap = OperatorSpec::negative_laplacian(2);
  const OperatorSpec id = OperatorSpec::identity(2);
  Rng rng(17);
  const int n = 60;
  Eigen::MatrixXd gram(n, n);
  std::vector<Point> pts;
  std::vector<const OperatorSpec*> ops;
  for (int i = 0; i < n; ++i) {
    pts.push_back(random_point(rng, 2, -1.0, 1.0));
    ops.push_back(i % 3 == 0 ? &id : &neg_lap);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      gram(i, j) = apply_op_both(*ops[i], *ops[j], k, pts[i], pts[j]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-8 * gram.trace() / n);
}
