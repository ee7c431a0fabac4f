#ifndef GPPDE_GEOMETRY_HPP_
#define GPPDE_GEOMETRY_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

namespace gppde {

// A point in the (space or space-time) computational domain.
using Point = Eigen::VectorXd;

enum class DomainKind { UnitDisk2D, UnitCube3D, SpaceTimeRect1Dx1T };

enum class Membership { Interior, Boundary, Outside };

// Identifies one face of a domain boundary together with the dimension of
// its parameter space.  Face points are produced by Domain::face_point.
struct BoundaryFace {
  int face_id;
  int param_dim;
};

// Tolerance for boundary membership on unit-scale domains.
inline constexpr double kBoundaryTol = 1e-12;

class Domain {
 public:
  static Domain unit_disk();
  static Domain unit_cube();
  static Domain space_time_rect();

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<BoundaryFace>& faces() const { return faces_; }
  int face_count() const { return static_cast<int>(faces_.size()); }

  // Exact classification with tolerance kBoundaryTol.
  Membership contains(const Point& p) const;

  // Maps a parameter vector in [0,1]^param_dim onto the given face.  The
  // returned point satisfies the face's defining equation to within 1e-12.
  Point face_point(int face_id, const std::vector<double>& params) const;

 private:
  Domain(DomainKind kind, int dim, std::vector<BoundaryFace> faces)
      : kind_(kind), dim_(dim), faces_(std::move(faces)) {}

  DomainKind kind_;
  int dim_;
  std::vector<BoundaryFace> faces_;
};

// First `n` points of the Sobol sequence in [0,1]^dims after discarding
// `skip` points.  The all-zeros point at index 0 is always discarded, so
// (n=1, dims=2, skip=0) yields {(0.5, 0.5)}.  Deterministic; direction
// numbers are embedded constants, dims <= 6.
std::vector<Point> sobol_sequence(int n, int dims, std::int64_t skip);

// `n` strictly interior points.  The disk rejects Sobol points mapped to
// the bounding square [-1,1]^2 (accepted subsequence keeps Sobol order);
// the cube and the space-time rectangle map Sobol points directly.
// `consumed`, when non-null, receives the number of raw Sobol points
// drawn, so callers can advance a shared skip cursor.
std::vector<Point> sample_interior(const Domain& domain, int n,
                                   std::int64_t skip,
                                   std::int64_t* consumed = nullptr);

// `n` boundary points with their face ids, distributed round-robin across
// faces (all faces of the supported domains have equal measure).  The disk
// maps a 1D Sobol stream to the angle theta = 2*pi*u.
std::vector<std::pair<Point, int>> sample_boundary(const Domain& domain,
                                                   int n, std::int64_t skip);

}  // namespace gppde

#endif  // GPPDE_GEOMETRY_HPP_
