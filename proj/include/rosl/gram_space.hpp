#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>

#include "rosl/errors.hpp"

namespace rosl {

using Vector = Eigen::VectorXd;

/// A bounded linear functional, stored through its action on the basis
/// vectors, i.e. coords[i] = <phi, e_i>.
using Functional = Eigen::VectorXd;

/// A finite-dimensional Hilbert space: dimension plus a symmetric positive
/// definite Gram matrix defining the inner product. The symmetric
/// factorization is computed once at construction and reused by every solve.
///
/// Copies are cheap and share the factorization; all operations are const
/// and safe to call concurrently.
class GramSpace {
 public:
  explicit GramSpace(const Eigen::MatrixXd& gram);
  explicit GramSpace(const Eigen::SparseMatrix<double>& gram);

  static GramSpace euclidean(int dim);

  int dim() const;
  const Eigen::SparseMatrix<double>& gram() const;

  /// (a, b) = a' * gram * b.
  double inner(const Vector& a, const Vector& b) const;
  double norm(const Vector& a) const;

  Vector matvec(const Vector& x) const;

  /// Solves gram * c = rhs.
  Vector solve(const Vector& rhs) const;

  /// Largest / smallest eigenvalue estimates (power iteration, cached).
  double lambda_max() const;
  double lambda_min() const;
  double condition() const;

  /// Certified upper bound on lambda_max (Gershgorin); safe for gradient
  /// step sizes where the power-iteration estimate may still be low.
  double lambda_max_bound() const;

  /// True if both spaces share the same Gram matrix (same factorization or
  /// entrywise equal up to 1e-12 relative).
  bool same_metric(const GramSpace& other) const;

  void check_vector(const Vector& v, const char* what) const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Riesz representative: the c with gram * c = phi, so that
/// inner(riesz(phi), v) = <phi, v> for all v.
Vector riesz(const GramSpace& space, const Functional& phi);

/// Dual norm sqrt(phi' * gram^{-1} * phi) = ||riesz(phi)||.
double dual_norm(const GramSpace& space, const Functional& phi);

}  // namespace rosl
