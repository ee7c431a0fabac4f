#include "gppde/gram.hpp"

#include "gppde/errors.hpp"

namespace gppde {

void CollocationSet::check_duplicates(double tol) const {
  const std::size_t n = size();
  const double tol2 = tol * tol;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const CollocationEntry& a = entry(i);
      const CollocationEntry& b = entry(j);
      if ((a.point - b.point).squaredNorm() <= tol2 && a.op == b.op) {
        throw DuplicatePointError(i, j);
      }
    }
  }
}

Eigen::VectorXd rhs_vector(const CollocationSet& colset) {
  Eigen::VectorXd g(colset.size());
  std::size_t k = 0;
  for (const CollocationEntry& e : colset.interior()) g[k++] = e.target;
  for (const CollocationEntry& e : colset.boundary()) g[k++] = e.target;
  return g;
}

Eigen::VectorXd cross_vector(const CollocationSet& colset,
                             const KernelParams& kernel, const Point& z,
                             const OperatorSpec& query_op) {
  Eigen::VectorXd a(colset.size());
  for (std::size_t i = 0; i < colset.size(); ++i) {
    const CollocationEntry& e = colset.entry(i);
    a[i] = apply_op_both(query_op, e.op, kernel, z, e.point);
  }
  return a;
}

Eigen::VectorXd cross_vector(const CollocationSet& colset,
                             const KernelParams& kernel, const Point& z) {
  return cross_vector(colset, kernel, z,
                      OperatorSpec::identity(kernel.dim()));
}

GramSystem GramSystem::assemble_dense(CollocationSet colset,
                                      KernelParams kernel, double lambda,
                                      std::size_t dense_cap) {
  kernel.validate();
  if (colset.size() == 0) throw Error("collocation set is empty");
  if (colset.size() > dense_cap)
    throw DenseCapExceededError(colset.size(), dense_cap);
  colset.check_duplicates();

  GramSystem sys(std::move(colset), std::move(kernel), lambda);
  const std::size_t n = sys.colset_.size();
  Eigen::MatrixXd k_mat(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const CollocationEntry& ei = sys.colset_.entry(i);
    for (std::size_t j = i; j < n; ++j) {
      const CollocationEntry& ej = sys.colset_.entry(j);
      const double v = apply_op_both(ei.op, ej.op, sys.kernel_, ei.point, ej.point);
      k_mat(i, j) = v;
      k_mat(j, i) = v;
    }
  }
  sys.dense_ = std::move(k_mat);
  return sys;
}

GramSystem GramSystem::matrix_free(CollocationSet colset, KernelParams kernel,
                                   double lambda) {
  kernel.validate();
  if (colset.size() == 0) throw Error("collocation set is empty");
  colset.check_duplicates();
  return GramSystem(std::move(colset), std::move(kernel), lambda);
}

Eigen::VectorXd GramSystem::row(std::size_t j) const {
  const std::size_t n = size();
  if (j >= n) throw Error("gram row index out of range");
  Eigen::VectorXd r(n);
  if (dense_) {
    r = dense_->col(j);  // symmetric, and columns are contiguous
  } else {
    const CollocationEntry& ej = colset_.entry(j);
    for (std::size_t i = 0; i < n; ++i) {
      const CollocationEntry& ei = colset_.entry(i);
      r[i] = apply_op_both(ej.op, ei.op, kernel_, ej.point, ei.point);
    }
  }
  r[j] += lambda_;
  return r;
}

double GramSystem::trace() const {
  double t = 0.0;
  if (dense_) {
    t = dense_->trace();
  } else {
    for (std::size_t i = 0; i < size(); ++i) {
      const CollocationEntry& e = colset_.entry(i);
      t += apply_op_both(e.op, e.op, kernel_, e.point, e.point);
    }
  }
  return t + lambda_ * static_cast<double>(size());
}

}  // namespace gppde
