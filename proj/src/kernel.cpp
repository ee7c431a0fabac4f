#include "gppde/kernel.hpp"

#include <cmath>

#include "gppde/errors.hpp"

namespace gppde {

namespace {

// Scaled polynomial part of the k-th derivative of the Gaussian factor:
// d^k/du^k exp(-u^2/(2 l^2)) = (-1/l)^k He_k(u/l) exp(-u^2/(2 l^2)),
// with He_k the probabilists' Hermite polynomials.  Returns the factor in
// front of the exponential for x = u/l.
double hermite_scaled(int k, double x, double inv_ell) {
  switch (k) {
    case 0: return 1.0;
    case 1: return -x * inv_ell;
    case 2: return (x * x - 1.0) * inv_ell * inv_ell;
    case 3: return -(x * x * x - 3.0 * x) * inv_ell * inv_ell * inv_ell;
    case 4: {
      const double x2 = x * x;
      const double i2 = inv_ell * inv_ell;
      return (x2 * x2 - 6.0 * x2 + 3.0) * i2 * i2;
    }
    default: throw Error("derivative order above 4 is unsupported");
  }
}

// Polynomial factor of d^n_a d^m_b exp(-(a-b)^2/(2 l^2)); the caller
// multiplies by the shared exponential.  d_b flips the sign of each inner
// derivative, so the total prefactor is (-1)^m (-1/l)^(n+m) He_{n+m}.
double dim_factor_poly(double inv_ell, double a, double b, int n, int m) {
  const double x = (a - b) * inv_ell;
  const double h = hermite_scaled(n + m, x, inv_ell);
  return (m % 2 == 0) ? h : -h;
}

void check_dims(const KernelParams& params, const Point& z, const Point& zp) {
  if (z.size() != params.dim())
    throw DimensionMismatchError(params.dim(), static_cast<int>(z.size()));
  if (zp.size() != params.dim())
    throw DimensionMismatchError(params.dim(), static_cast<int>(zp.size()));
}

double exp_factor(const KernelParams& params, const Point& z, const Point& zp) {
  double q = 0.0;
  for (int r = 0; r < params.dim(); ++r) {
    const double d = (z[r] - zp[r]) / params.lengthscales[r];
    q += d * d;
  }
  return std::exp(-0.5 * q);
}

}  // namespace

void KernelParams::validate() const {
  if (signal <= 0.0) throw Error("kernel signal strength must be positive");
  if (lengthscales.size() == 0) throw Error("kernel needs at least one lengthscale");
  for (int r = 0; r < dim(); ++r) {
    if (!(lengthscales[r] > 0.0)) throw Error("kernel lengthscales must be positive");
  }
}

OperatorSpec::OperatorSpec(std::vector<OperatorTerm> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw Error("operator needs at least one term");
  const std::size_t d = terms_.front().orders.size();
  for (const OperatorTerm& t : terms_) {
    if (t.orders.size() != d)
      throw DimensionMismatchError(static_cast<int>(d),
                                   static_cast<int>(t.orders.size()));
    int total = 0;
    for (int o : t.orders) {
      if (o < 0) throw Error("negative derivative order");
      total += o;
    }
    if (total > 2) throw Error("operator terms are limited to total order 2");
  }
}

bool OperatorSpec::is_identity() const {
  if (terms_.size() != 1 || terms_[0].coeff != 1.0) return false;
  for (int o : terms_[0].orders)
    if (o != 0) return false;
  return true;
}

OperatorSpec OperatorSpec::identity(int dim) {
  return OperatorSpec({{1.0, std::vector<int>(dim, 0)}});
}

OperatorSpec OperatorSpec::negative_laplacian(int dim) {
  std::vector<OperatorTerm> terms;
  for (int r = 0; r < dim; ++r) {
    std::vector<int> orders(dim, 0);
    orders[r] = 2;
    terms.push_back({-1.0, std::move(orders)});
  }
  return OperatorSpec(std::move(terms));
}

OperatorSpec OperatorSpec::partial(int dim, int axis, int order, double coeff) {
  std::vector<int> orders(dim, 0);
  orders[axis] = order;
  return OperatorSpec({{coeff, std::move(orders)}});
}

OperatorSpec OperatorSpec::heat(double alpha) {
  return OperatorSpec({{1.0, {0, 1}}, {-alpha, {2, 0}}});
}

double kernel_eval(const KernelParams& params, const Point& z, const Point& zp) {
  check_dims(params, z, zp);
  return params.signal * params.signal * exp_factor(params, z, zp);
}

double dim_factor_derivative(double ell, double a, double b, int n, int m) {
  const double inv_ell = 1.0 / ell;
  const double d = (a - b) * inv_ell;
  return dim_factor_poly(inv_ell, a, b, n, m) * std::exp(-0.5 * d * d);
}

double apply_op_left(const OperatorSpec& op, const KernelParams& params,
                     const Point& z, const Point& zp) {
  check_dims(params, z, zp);
  if (op.dim() != params.dim())
    throw DimensionMismatchError(params.dim(), op.dim());
  double sum = 0.0;
  for (const OperatorTerm& t : op.terms()) {
    double prod = t.coeff;
    for (int r = 0; r < params.dim(); ++r) {
      prod *= dim_factor_poly(1.0 / params.lengthscales[r], z[r], zp[r],
                              t.orders[r], 0);
    }
    sum += prod;
  }
  return params.signal * params.signal * sum * exp_factor(params, z, zp);
}

double apply_op_both(const OperatorSpec& opL, const OperatorSpec& opR,
                     const KernelParams& params, const Point& z,
                     const Point& zp) {
  check_dims(params, z, zp);
  if (opL.dim() != params.dim())
    throw DimensionMismatchError(params.dim(), opL.dim());
  if (opR.dim() != params.dim())
    throw DimensionMismatchError(params.dim(), opR.dim());
  double sum = 0.0;
  for (const OperatorTerm& tl : opL.terms()) {
    for (const OperatorTerm& tr : opR.terms()) {
      double prod = tl.coeff * tr.coeff;
      for (int r = 0; r < params.dim(); ++r) {
        prod *= dim_factor_poly(1.0 / params.lengthscales[r], z[r], zp[r],
                                tl.orders[r], tr.orders[r]);
      }
      sum += prod;
    }
  }
  return params.signal * params.signal * sum * exp_factor(params, z, zp);
}

}  // namespace gppde
