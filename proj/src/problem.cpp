#include "gppde/problem.hpp"

#include <cmath>

#include "gppde/errors.hpp"

namespace gppde {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void ProblemSpec::validate() const {
  if (boundary_conditions.size() != static_cast<std::size_t>(domain.face_count()))
    throw Error("problem '" + name + "' must define one boundary condition per face");
  if (!source) throw Error("problem '" + name + "' is missing a source term");
}

CollocationEntry ProblemSpec::make_interior_entry(const Point& z) const {
  return CollocationEntry{z, pde_operator, source(z)};
}

CollocationEntry ProblemSpec::make_boundary_entry(const Point& z,
                                                  int face_id) const {
  const BoundaryCondition& bc = boundary_conditions.at(face_id);
  return CollocationEntry{z, bc.op, bc.target(z)};
}

ProblemSpec make_poisson_disk() {
  Domain domain = Domain::unit_disk();
  ProblemSpec p{
      "poisson-disk",
      domain,
      OperatorSpec::negative_laplacian(2),
      [](const Point&) { return 1.0; },
      {{OperatorSpec::identity(2), [](const Point&) { return 0.0; }}},
      [](const Point& x) { return 0.25 * (1.0 - x.squaredNorm()); }};
  p.validate();
  return p;
}

ProblemSpec make_poisson_3d() {
  Domain domain = Domain::unit_cube();
  auto truth = [](const Point& x) {
    return std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::sin(kPi * x[2]);
  };
  std::vector<BoundaryCondition> bcs;
  for (int f = 0; f < 6; ++f) {
    bcs.push_back({OperatorSpec::identity(3), [](const Point&) { return 0.0; }});
  }
  ProblemSpec p{
      "poisson-3d",
      domain,
      OperatorSpec::negative_laplacian(3),
      [truth](const Point& x) { return 3.0 * kPi * kPi * truth(x); },
      std::move(bcs),
      truth};
  p.validate();
  return p;
}

ProblemSpec make_heat_1d(double alpha) {
  Domain domain = Domain::space_time_rect();
  auto truth = [alpha](const Point& z) {
    return std::sin(kPi * z[0]) * std::exp(-alpha * kPi * kPi * z[1]);
  };
  std::vector<BoundaryCondition> bcs;
  // Faces: x=0 and x=1 homogeneous Dirichlet, t=0 initial profile,
  // t=1 vanishing time derivative.
  bcs.push_back({OperatorSpec::identity(2), [](const Point&) { return 0.0; }});
  bcs.push_back({OperatorSpec::identity(2), [](const Point&) { return 0.0; }});
  bcs.push_back({OperatorSpec::identity(2),
                 [](const Point& z) { return std::sin(kPi * z[0]); }});
  bcs.push_back({OperatorSpec::partial(2, 1, 1), [](const Point&) { return 0.0; }});
  ProblemSpec p{
      "heat-1d",
      domain,
      OperatorSpec::heat(alpha),
      [](const Point&) { return 0.0; },
      std::move(bcs),
      truth};
  p.validate();
  return p;
}

}  // namespace gppde
