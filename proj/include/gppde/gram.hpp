#ifndef GPPDE_GRAM_HPP_
#define GPPDE_GRAM_HPP_

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <vector>

#include "gppde/geometry.hpp"
#include "gppde/kernel.hpp"

namespace gppde {

// One residual observation: the entry's operator applied to the solution
// at `point` equals `target`.  Interior entries carry the PDE operator,
// boundary entries the boundary operator of their face.
struct CollocationEntry {
  Point point;
  OperatorSpec op;
  double target;
};

// Interior and boundary collocation entries.  The system ordering is
// always interior entries first, then boundary entries.
class CollocationSet {
 public:
  void add_interior(CollocationEntry entry) { interior_.push_back(std::move(entry)); }
  void add_boundary(CollocationEntry entry) { boundary_.push_back(std::move(entry)); }

  std::size_t n_interior() const { return interior_.size(); }
  std::size_t n_boundary() const { return boundary_.size(); }
  std::size_t size() const { return interior_.size() + boundary_.size(); }

  // Entry in system order (interior block, then boundary block).
  const CollocationEntry& entry(std::size_t i) const {
    return i < interior_.size() ? interior_[i] : boundary_[i - interior_.size()];
  }
  const std::vector<CollocationEntry>& interior() const { return interior_; }
  const std::vector<CollocationEntry>& boundary() const { return boundary_; }

  // Throws DuplicatePointError if two entries share a point (within
  // distance `tol`) and the same operator; such pairs give identical Gram
  // rows and a singular system.
  void check_duplicates(double tol = 1e-10) const;

 private:
  std::vector<CollocationEntry> interior_;
  std::vector<CollocationEntry> boundary_;
};

// Concatenated target vector g, interior targets first.
Eigen::VectorXd rhs_vector(const CollocationSet& colset);

// Prediction cross-vector: entry i = (query_op op_i' k)(z, z_i).  With the
// identity query operator this is the vector pairing a test point with
// every collocation entry.
Eigen::VectorXd cross_vector(const CollocationSet& colset,
                             const KernelParams& kernel, const Point& z,
                             const OperatorSpec& query_op);
Eigen::VectorXd cross_vector(const CollocationSet& colset,
                             const KernelParams& kernel, const Point& z);

// The regularized operator-valued kernel Gram system.  The dense matrix
// stores K itself; the regularizer lambda is applied on row access and in
// the solvers.
class GramSystem {
 public:
  // Materializes the dense N x N matrix (symmetric fill).  Throws
  // DenseCapExceededError when N exceeds `dense_cap`.
  static GramSystem assemble_dense(CollocationSet colset, KernelParams kernel,
                                   double lambda, std::size_t dense_cap = 20000);

  // Matrix-free system: rows are computed on demand in O(N) kernel
  // evaluations.
  static GramSystem matrix_free(CollocationSet colset, KernelParams kernel,
                                double lambda);

  std::size_t size() const { return colset_.size(); }
  const CollocationSet& colset() const { return colset_; }
  const KernelParams& kernel() const { return kernel_; }
  double lambda() const { return lambda_; }
  bool has_dense() const { return dense_.has_value(); }
  const Eigen::MatrixXd& dense() const { return *dense_; }

  // Row j of K + lambda I.
  Eigen::VectorXd row(std::size_t j) const;

  // Trace of K + lambda I in O(N) kernel evaluations.
  double trace() const;

  // g.
  Eigen::VectorXd rhs() const { return rhs_vector(colset_); }

 private:
  GramSystem(CollocationSet colset, KernelParams kernel, double lambda)
      : colset_(std::move(colset)), kernel_(std::move(kernel)), lambda_(lambda) {}

  CollocationSet colset_;
  KernelParams kernel_;
  double lambda_;
  std::optional<Eigen::MatrixXd> dense_;
};

// Default regularizer floor; the fourth-derivative Gram blocks are badly
// conditioned and need one.
inline double default_lambda(const KernelParams& kernel) {
  const double s2 = kernel.signal * kernel.signal;
  return 1e-8 * s2 * s2;
}

}  // namespace gppde

#endif  // GPPDE_GRAM_HPP_
