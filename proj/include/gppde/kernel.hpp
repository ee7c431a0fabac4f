#ifndef GPPDE_KERNEL_HPP_
#define GPPDE_KERNEL_HPP_

#include <Eigen/Core>
#include <vector>

#include "gppde/geometry.hpp"

namespace gppde {

// Hyperparameters of the squared-exponential ARD kernel
//   k(z, z') = s^2 exp(-1/2 sum_r (z_r - z'_r)^2 / l_r^2).
struct KernelParams {
  double signal = 1.0;          // s
  Eigen::VectorXd lengthscales; // l_r, one per coordinate

  int dim() const { return static_cast<int>(lengthscales.size()); }
  void validate() const;
};

// One term of a linear differential operator: coeff * prod_r d^orders[r].
struct OperatorTerm {
  double coeff;
  std::vector<int> orders;  // per-coordinate derivative order, total <= 2

  bool operator==(const OperatorTerm&) const = default;
};

// A constant-coefficient linear differential operator given as a weighted
// sum of coordinate partial derivatives of total order at most 2.  Covers
// the identity, the negative Laplacian, single partials, and the heat
// operator d/dt - alpha d^2/dx^2.
class OperatorSpec {
 public:
  OperatorSpec(std::vector<OperatorTerm> terms);

  const std::vector<OperatorTerm>& terms() const { return terms_; }
  int dim() const { return static_cast<int>(terms_.front().orders.size()); }
  bool is_identity() const;

  static OperatorSpec identity(int dim);
  static OperatorSpec negative_laplacian(int dim);
  // coeff * d^order along one axis, zero elsewhere.
  static OperatorSpec partial(int dim, int axis, int order, double coeff = 1.0);
  // d/dt - alpha d^2/dx^2 on coordinates (x, t).
  static OperatorSpec heat(double alpha);

  bool operator==(const OperatorSpec&) const = default;

 private:
  std::vector<OperatorTerm> terms_;
};

// k(z, z').
double kernel_eval(const KernelParams& params, const Point& z, const Point& zp);

// Closed-form mixed partial d^n/da^n d^m/db^m of the one-dimensional factor
// exp(-(a-b)^2 / (2 l^2)) for n, m in {0, 1, 2}.
double dim_factor_derivative(double ell, double a, double b, int n, int m);

// (O k)(z, z') with the operator acting on the first argument.
double apply_op_left(const OperatorSpec& op, const KernelParams& params,
                     const Point& z, const Point& zp);

// (O O' k)(z, z') with opL acting on z and opR acting on z'.
double apply_op_both(const OperatorSpec& opL, const OperatorSpec& opR,
                     const KernelParams& params, const Point& z,
                     const Point& zp);

}  // namespace gppde

#endif  // GPPDE_KERNEL_HPP_
