#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "gppde/errors.hpp"
#include "gppde/geometry.hpp"
#include "gppde/rng.hpp"

using namespace gppde;

namespace {

bool bits_equal(const Point& a, const Point& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

// Star discrepancy of a 1D point set.
double star_discrepancy_1d(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    worst = std::max(worst, std::abs((static_cast<double>(i) + 1.0) / n - xs[i]));
    worst = std::max(worst, std::abs(xs[i] - static_cast<double>(i) / n));
  }
  return worst;
}

}  // namespace

TEST_CASE("sobol first point follows the origin-discarding convention") {
  const auto pts = sobol_sequence(1, 2, 0);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0][0] == 0.5);
  CHECK(pts[0][1] == 0.5);
}

TEST_CASE("sobol points stay in the unit cube for all supported dims") {
  for (int d = 1; d <= 6; ++d) {
    for (const Point& p : sobol_sequence(300, d, 0)) {
      REQUIRE(p.size() == d);
      for (int r = 0; r < d; ++r) {
        CHECK(p[r] > 0.0);
        CHECK(p[r] < 1.0);
      }
    }
  }
}

TEST_CASE("sobol rejects unsupported dimension counts") {
  CHECK_THROWS_AS(sobol_sequence(1, 0, 0), UnsupportedDimensionError);
  CHECK_THROWS_AS(sobol_sequence(1, 7, 0), UnsupportedDimensionError);
}

TEST_CASE("sobol is deterministic and consistent with skipping") {
  const auto a = sobol_sequence(16, 3, 5);
  const auto b = sobol_sequence(16, 3, 5);
  for (int i = 0; i < 16; ++i) {
    CHECK(bits_equal(a[i], b[i]));
  }
  // skip=k drops exactly the first k points.
  const auto full = sobol_sequence(20, 3, 0);
  const auto tail = sobol_sequence(15, 3, 5);
  for (int i = 0; i < 15; ++i) CHECK(bits_equal(full[i + 5], tail[i]));
}

TEST_CASE("4 sobol points beat average uniform draws on star discrepancy") {
  std::vector<double> xs;
  for (const Point& p : sobol_sequence(4, 1, 0)) xs.push_back(p[0]);
  const double sobol_disc = star_discrepancy_1d(xs);

  double total = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(seed + 1);
    std::vector<double> draw(4);
    for (double& v : draw) v = rng.uniform();
    total += star_discrepancy_1d(draw);
  }
  CHECK(sobol_disc < total / 100.0);
}

TEST_CASE("disk interior sampling yields strictly interior points in order") {
  const Domain disk = Domain::unit_disk();
  std::int64_t consumed = 0;
  const auto pts = sample_interior(disk, 100, 0, &consumed);
  REQUIRE(pts.size() == 100);
  for (const Point& p : pts) {
    CHECK(p.squaredNorm() < 1.0);
    CHECK(disk.contains(p) == Membership::Interior);
  }
  CHECK(consumed >= 100);

  // The accepted subsequence preserves Sobol order.
  const auto raw = sobol_sequence(static_cast<int>(consumed), 2, 0);
  std::size_t k = 0;
  for (const Point& u : raw) {
    Point x(2);
    x << 2.0 * u[0] - 1.0, 2.0 * u[1] - 1.0;
    if (disk.contains(x) == Membership::Interior) {
      REQUIRE(k < pts.size());
      CHECK(bits_equal(pts[k], x));
      ++k;
    }
  }
  CHECK(k == pts.size());

  // Determinism.
  const auto again = sample_interior(disk, 100, 0);
  for (int i = 0; i < 100; ++i) CHECK(bits_equal(pts[i], again[i]));
}

TEST_CASE("cube interior sampling is direct") {
  const Domain cube = Domain::unit_cube();
  std::int64_t consumed = 0;
  const auto pts = sample_interior(cube, 50, 0, &consumed);
  CHECK(consumed == 50);
  for (const Point& p : pts) {
    CHECK(cube.contains(p) == Membership::Interior);
    for (int r = 0; r < 3; ++r) {
      CHECK(p[r] > 0.0);
      CHECK(p[r] < 1.0);
    }
  }
}

TEST_CASE("disk boundary points satisfy the circle equation") {
  const Domain disk = Domain::unit_disk();
  const auto pts = sample_boundary(disk, 13, 0);
  REQUIRE(pts.size() == 13);
  for (const auto& [p, face] : pts) {
    CHECK(face == 0);
    CHECK(std::abs(p.squaredNorm() - 1.0) <= 1e-12);
    CHECK(disk.contains(p) == Membership::Boundary);
  }
}

TEST_CASE("boundary sampling stratifies across faces") {
  const Domain rect = Domain::space_time_rect();
  std::vector<int> rect_counts(4, 0);
  for (const auto& [p, face] : sample_boundary(rect, 8, 0)) {
    ++rect_counts[face];
    CHECK(rect.contains(p) == Membership::Boundary);
  }
  for (int c : rect_counts) CHECK(c == 2);

  const Domain cube = Domain::unit_cube();
  std::vector<int> cube_counts(6, 0);
  for (const auto& [p, face] : sample_boundary(cube, 12, 0)) {
    ++cube_counts[face];
    CHECK(cube.contains(p) == Membership::Boundary);
    // The fixed coordinate sits exactly on the face.
    const int axis = face / 2;
    const double want = face % 2 == 0 ? 0.0 : 1.0;
    CHECK(p[axis] == want);
  }
  for (int c : cube_counts) CHECK(c == 2);
}

TEST_CASE("membership classification on the disk") {
  const Domain disk = Domain::unit_disk();
  Point p(2);
  p << 0.0, 0.0;
  CHECK(disk.contains(p) == Membership::Interior);
  p << 1.0, 0.0;
  CHECK(disk.contains(p) == Membership::Boundary);
  p << 1.1, 0.0;
  CHECK(disk.contains(p) == Membership::Outside);

  Point wrong(3);
  wrong << 0.0, 0.0, 0.0;
  CHECK_THROWS_AS(disk.contains(wrong), DimensionMismatchError);
}

TEST_CASE("space-time rectangle faces carry the right fixed coordinate") {
  const Domain rect = Domain::space_time_rect();
  CHECK(rect.face_point(0, {0.3})[0] == 0.0);
  CHECK(rect.face_point(1, {0.3})[0] == 1.0);
  CHECK(rect.face_point(2, {0.3})[1] == 0.0);
  CHECK(rect.face_point(3, {0.3})[1] == 1.0);
}
