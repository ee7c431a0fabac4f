#include "gppde/geometry.hpp"

#include <cmath>
#include <cstdint>

#include "gppde/errors.hpp"

namespace gppde {

namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr int kMaxDims = 6;
constexpr int kBits = 32;

// Primitive polynomial degree, polynomial code, and initial direction
// values m_k for dimensions 2..6 (dimension 1 is the van der Corput
// sequence, m_k = 1 for all k).
struct PolyEntry {
  int degree;
  unsigned poly;
  unsigned m[4];
};

constexpr PolyEntry kPoly[kMaxDims - 1] = {
    {1, 0, {1, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0}},
    {3, 1, {1, 3, 1, 0}},
    {3, 2, {1, 1, 1, 0}},
    {4, 1, {1, 1, 3, 3}},
};

// Direction numbers v_k = m_k * 2^(kBits-k) for one dimension.
void build_direction_numbers(int dim_index, std::uint32_t v[kBits]) {
  unsigned m[kBits];
  if (dim_index == 0) {
    for (int k = 0; k < kBits; ++k) m[k] = 1;
  } else {
    const PolyEntry& e = kPoly[dim_index - 1];
    const int s = e.degree;
    for (int k = 0; k < s; ++k) m[k] = e.m[k];
    for (int k = s; k < kBits; ++k) {
      unsigned val = m[k - s] ^ (m[k - s] << s);
      for (int i = 1; i < s; ++i) {
        if ((e.poly >> (s - 1 - i)) & 1u) val ^= m[k - i] << i;
      }
      m[k] = val;
    }
  }
  for (int k = 0; k < kBits; ++k) {
    v[k] = static_cast<std::uint32_t>(m[k]) << (kBits - 1 - k);
  }
}

// Gray-code Sobol generator with O(1) jump to an arbitrary index: the
// state at index n is the XOR of the direction numbers selected by the
// bits of gray(n) = n ^ (n >> 1).
class SobolStream {
 public:
  SobolStream(int dims, std::int64_t start_index) : dims_(dims) {
    if (dims < 1 || dims > kMaxDims) throw UnsupportedDimensionError(dims);
    for (int d = 0; d < dims; ++d) build_direction_numbers(d, v_[d]);
    index_ = start_index;
    const std::uint64_t gray =
        static_cast<std::uint64_t>(index_) ^ (static_cast<std::uint64_t>(index_) >> 1);
    for (int d = 0; d < dims; ++d) {
      state_[d] = 0;
      for (int k = 0; k < kBits; ++k) {
        if ((gray >> k) & 1u) state_[d] ^= v_[d][k];
      }
    }
  }

  // Advances to the next index and writes the point.
  void next(Point& out) {
    // Position of the lowest zero bit of the current index.
    std::uint64_t i = static_cast<std::uint64_t>(index_);
    int c = 0;
    while (i & 1u) {
      i >>= 1;
      ++c;
    }
    if (c >= kBits) throw Error("Sobol index space exhausted");
    ++index_;
    for (int d = 0; d < dims_; ++d) {
      state_[d] ^= v_[d][c];
      out[d] = static_cast<double>(state_[d]) * 0x1.0p-32;
    }
  }

 private:
  int dims_;
  std::int64_t index_;
  std::uint32_t state_[kMaxDims];
  std::uint32_t v_[kMaxDims][kBits];
};

}  // namespace

std::vector<Point> sobol_sequence(int n, int dims, std::int64_t skip) {
  SobolStream stream(dims, skip);
  std::vector<Point> points(n, Point(dims));
  for (int i = 0; i < n; ++i) stream.next(points[i]);
  return points;
}

Domain Domain::unit_disk() {
  return Domain(DomainKind::UnitDisk2D, 2, {{0, 1}});
}

Domain Domain::unit_cube() {
  std::vector<BoundaryFace> faces;
  for (int f = 0; f < 6; ++f) faces.push_back({f, 2});
  return Domain(DomainKind::UnitCube3D, 3, faces);
}

Domain Domain::space_time_rect() {
  std::vector<BoundaryFace> faces;
  for (int f = 0; f < 4; ++f) faces.push_back({f, 1});
  return Domain(DomainKind::SpaceTimeRect1Dx1T, 2, faces);
}

Membership Domain::contains(const Point& p) const {
  if (p.size() != dim_) throw DimensionMismatchError(dim_, static_cast<int>(p.size()));
  if (kind_ == DomainKind::UnitDisk2D) {
    const double r2 = p.squaredNorm();
    if (r2 > 1.0 + kBoundaryTol) return Membership::Outside;
    if (r2 >= 1.0 - kBoundaryTol) return Membership::Boundary;
    return Membership::Interior;
  }
  // Axis-aligned unit box (cube or space-time rectangle).
  bool on_face = false;
  for (int i = 0; i < dim_; ++i) {
    const double c = p[i];
    if (c < -kBoundaryTol || c > 1.0 + kBoundaryTol) return Membership::Outside;
    if (c <= kBoundaryTol || c >= 1.0 - kBoundaryTol) on_face = true;
  }
  return on_face ? Membership::Boundary : Membership::Interior;
}

Point Domain::face_point(int face_id, const std::vector<double>& params) const {
  Point p(dim_);
  switch (kind_) {
    case DomainKind::UnitDisk2D: {
      const double theta = 2.0 * kPi * params[0];
      p << std::cos(theta), std::sin(theta);
      return p;
    }
    case DomainKind::UnitCube3D: {
      // Faces 2f and 2f+1 fix coordinate f at 0 and 1 respectively.
      const int axis = face_id / 2;
      const double value = (face_id % 2 == 0) ? 0.0 : 1.0;
      int k = 0;
      for (int i = 0; i < 3; ++i) p[i] = (i == axis) ? value : params[k++];
      return p;
    }
    case DomainKind::SpaceTimeRect1Dx1T: {
      // Faces: 0 -> x=0, 1 -> x=1, 2 -> t=0, 3 -> t=1.
      switch (face_id) {
        case 0: p << 0.0, params[0]; break;
        case 1: p << 1.0, params[0]; break;
        case 2: p << params[0], 0.0; break;
        default: p << params[0], 1.0; break;
      }
      return p;
    }
  }
  throw Error("unreachable domain kind");
}

std::vector<Point> sample_interior(const Domain& domain, int n,
                                   std::int64_t skip, std::int64_t* consumed) {
  std::vector<Point> points;
  points.reserve(n);
  std::int64_t used = 0;
  if (domain.kind() == DomainKind::UnitDisk2D) {
    SobolStream stream(2, skip);
    Point u(2), x(2);
    while (static_cast<int>(points.size()) < n) {
      stream.next(u);
      ++used;
      x << 2.0 * u[0] - 1.0, 2.0 * u[1] - 1.0;
      if (domain.contains(x) == Membership::Interior) points.push_back(x);
    }
  } else {
    SobolStream stream(domain.dim(), skip);
    Point u(domain.dim());
    for (int i = 0; i < n; ++i) {
      stream.next(u);
      ++used;
      points.push_back(u);
    }
  }
  if (consumed != nullptr) *consumed = used;
  return points;
}

std::vector<std::pair<Point, int>> sample_boundary(const Domain& domain,
                                                   int n, std::int64_t skip) {
  const int nf = domain.face_count();
  const int pdim = domain.faces()[0].param_dim;
  SobolStream stream(pdim, skip);
  Point u(pdim);
  std::vector<double> params(pdim);
  std::vector<std::pair<Point, int>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    stream.next(u);
    for (int k = 0; k < pdim; ++k) params[k] = u[k];
    const int face = i % nf;
    out.emplace_back(domain.face_point(face, params), face);
  }
  return out;
}

}  // namespace gppde
