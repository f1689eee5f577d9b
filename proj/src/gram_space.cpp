#include "rosl/gram_space.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

namespace rosl {

namespace {
constexpr double kSymmetryTol = 1e-12;
constexpr double kConditionLimit = 1e14;
constexpr int kPowerIters = 60;
}  // namespace

struct GramSpace::Impl {
  Eigen::SparseMatrix<double> gram;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor;
  double lmax = 0.0;
  double lmin = 0.0;
  double lmax_bound = 0.0;
};

namespace {

void check_symmetric(const Eigen::SparseMatrix<double>& g) {
  Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(g.transpose()) - g;
  double scale = 0.0;
  for (int k = 0; k < g.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(g, k); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  if (scale == 0.0 || worst > kSymmetryTol * scale)
    throw PreconditionError("GramSpace: matrix is not symmetric");
}

std::shared_ptr<const GramSpace::Impl> build(Eigen::SparseMatrix<double> g) {
  if (g.rows() != g.cols() || g.rows() == 0)
    throw PreconditionError("GramSpace: matrix must be square and nonempty");
  g.makeCompressed();
  check_symmetric(g);
  auto impl = std::make_shared<GramSpace::Impl>();
  impl->gram = std::move(g);
  impl->factor.compute(impl->gram);
  if (impl->factor.info() != Eigen::Success ||
      impl->factor.vectorD().minCoeff() <= 0.0)
    throw PreconditionError("GramSpace: matrix is not positive definite");

  const int n = static_cast<int>(impl->gram.rows());
  Vector v = Vector::Ones(n).normalized();
  for (int i = 0; i < kPowerIters; ++i) v = (impl->gram * v).normalized();
  impl->lmax = v.dot(impl->gram * v);
  v = Vector::Ones(n).normalized();
  for (int i = 0; i < kPowerIters; ++i) v = impl->factor.solve(v).normalized();
  impl->lmin = v.dot(impl->gram * v);

  Vector abs_row_sum = Vector::Zero(n);
  for (int k = 0; k < impl->gram.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(impl->gram, k); it; ++it)
      abs_row_sum[it.row()] += std::abs(it.value());
  impl->lmax_bound = abs_row_sum.maxCoeff();

  if (impl->lmin <= 0.0 || impl->lmax / impl->lmin > kConditionLimit)
    throw IllConditionedError("GramSpace: condition estimate exceeds 1e14");
  return impl;
}

}  // namespace

GramSpace::GramSpace(const Eigen::MatrixXd& gram)
    : impl_(build(gram.sparseView())) {}

GramSpace::GramSpace(const Eigen::SparseMatrix<double>& gram)
    : impl_(build(gram)) {}

GramSpace GramSpace::euclidean(int dim) {
  Eigen::SparseMatrix<double> id(dim, dim);
  id.setIdentity();
  return GramSpace(id);
}

int GramSpace::dim() const { return static_cast<int>(impl_->gram.rows()); }

const Eigen::SparseMatrix<double>& GramSpace::gram() const {
  return impl_->gram;
}

void GramSpace::check_vector(const Vector& v, const char* what) const {
  if (v.size() != dim())
    throw DimensionMismatch(std::string(what) + ": expected length " +
                            std::to_string(dim()) + ", got " +
                            std::to_string(v.size()));
}

double GramSpace::inner(const Vector& a, const Vector& b) const {
  check_vector(a, "inner");
  check_vector(b, "inner");
  return a.dot(impl_->gram * b);
}

double GramSpace::norm(const Vector& a) const {
  return std::sqrt(std::max(0.0, inner(a, a)));
}

Vector GramSpace::matvec(const Vector& x) const {
  check_vector(x, "matvec");
  return impl_->gram * x;
}

Vector GramSpace::solve(const Vector& rhs) const {
  check_vector(rhs, "solve");
  return impl_->factor.solve(rhs);
}

double GramSpace::lambda_max() const { return impl_->lmax; }
double GramSpace::lambda_min() const { return impl_->lmin; }
double GramSpace::condition() const { return impl_->lmax / impl_->lmin; }
double GramSpace::lambda_max_bound() const { return impl_->lmax_bound; }

bool GramSpace::same_metric(const GramSpace& other) const {
  if (impl_ == other.impl_) return true;
  if (dim() != other.dim()) return false;
  Eigen::SparseMatrix<double> diff = impl_->gram - other.impl_->gram;
  double scale = std::max(impl_->lmax, other.impl_->lmax);
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      if (std::abs(it.value()) > 1e-12 * scale) return false;
  return true;
}

Vector riesz(const GramSpace& space, const Functional& phi) {
  space.check_vector(phi, "riesz");
  return space.solve(phi);
}

double dual_norm(const GramSpace& space, const Functional& phi) {
  space.check_vector(phi, "dual_norm");
  return std::sqrt(std::max(0.0, phi.dot(space.solve(phi))));
}

}  // namespace rosl
