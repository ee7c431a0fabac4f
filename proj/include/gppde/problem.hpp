#ifndef GPPDE_PROBLEM_HPP_
#define GPPDE_PROBLEM_HPP_

#include <functional>
#include <string>
#include <vector>

#include "gppde/geometry.hpp"
#include "gppde/gram.hpp"
#include "gppde/kernel.hpp"

namespace gppde {

using ScalarField = std::function<double(const Point&)>;

struct BoundaryCondition {
  OperatorSpec op;
  ScalarField target;
};

// A linear PDE with per-face boundary conditions and, for the built-in
// benchmarks, a reference solution.
struct ProblemSpec {
  std::string name;
  Domain domain;
  OperatorSpec pde_operator;
  ScalarField source;
  std::vector<BoundaryCondition> boundary_conditions;  // one per face
  ScalarField ground_truth;  // may be empty

  void validate() const;

  CollocationEntry make_interior_entry(const Point& z) const;
  CollocationEntry make_boundary_entry(const Point& z, int face_id) const;
};

// -laplace(u) = 1 on the unit disk, u = 0 on the circle; the solution is
// (1 - |x|^2) / 4.
ProblemSpec make_poisson_disk();

// -laplace(u) = 3 pi^2 prod sin(pi x_r) on the unit cube with zero
// Dirichlet data; the solution is prod sin(pi x_r).
ProblemSpec make_poisson_3d();

// du/dt = alpha d2u/dx2 on (x, t) in [0,1]^2 with u(x,0) = sin(pi x),
// u(0,t) = u(1,t) = 0 and du/dt(x,1) = 0, alpha = 0.01.  The reference
// solution of the initial/Dirichlet problem is sin(pi x) exp(-alpha pi^2 t).
ProblemSpec make_heat_1d(double alpha = 0.01);

}  // namespace gppde

#endif  // GPPDE_PROBLEM_HPP_
