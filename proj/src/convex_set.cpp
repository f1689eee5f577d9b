#include "rosl/convex_set.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

namespace rosl {

namespace {

void check_dims(const ConvexSet& set, const Vector& v, const GramSpace& space,
                const char* what) {
  space.check_vector(v, what);
  if (set.dim() != space.dim())
    throw DimensionMismatch(std::string(what) + ": set/space dimension mismatch");
}

bool is_diagonal(const Eigen::SparseMatrix<double>& g) {
  for (int k = 0; k < g.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(g, k); it; ++it)
      if (it.row() != it.col() && it.value() != 0.0) return false;
  return true;
}

// Euclidean projection onto the probability simplex (sort-based).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cssv = 0.0, theta = 0.0;
  int rho = 0;
  for (int i = 0; i < n; ++i) {
    cssv += u[i];
    double t = (cssv - 1.0) / (i + 1);
    if (u[i] - t > 0.0) {
      rho = i + 1;
      theta = t;
    }
  }
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = std::max(0.0, v[i] - theta);
  return w;
}

// min over the simplex of 1/2 (V*lam - x)' G (V*lam - x), returns V*lam.
// FISTA with restart; stops on the Frank-Wolfe gap, which upper-bounds the
// objective error and hence 1/2 ||y - y*||_G^2.
Vector hull_qp(const std::vector<Vector>& verts, const Vector& x,
               const GramSpace& space, const ProjectOptions& opts) {
  const int m = static_cast<int>(verts.size());
  if (m == 1) return verts[0];
  const int d = static_cast<int>(x.size());
  Eigen::MatrixXd V(d, m), GV(d, m);
  for (int j = 0; j < m; ++j) {
    V.col(j) = verts[j];
    GV.col(j) = space.matvec(verts[j]);
  }
  Eigen::MatrixXd A = V.transpose() * GV;
  Eigen::VectorXd c = GV.transpose() * x;

  Eigen::VectorXd pv = Eigen::VectorXd::Ones(m).normalized();
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd Av = A * pv;
    double nrm = Av.norm();
    if (nrm == 0.0) break;
    pv = Av / nrm;
  }
  const double L = std::max(pv.dot(A * pv), 1e-300) * 1.000001;

  auto obj = [&](const Eigen::VectorXd& lam) {
    return 0.5 * lam.dot(A * lam) - c.dot(lam);
  };
  const double scale = 0.5 * std::abs(x.dot(space.matvec(x))) +
                       A.cwiseAbs().maxCoeff() + 1.0;
  const double gap_target = std::max(0.5 * opts.tol * opts.tol, 5e-15 * scale);

  Eigen::VectorXd lam = Eigen::VectorXd::Constant(m, 1.0 / m);
  Eigen::VectorXd y = lam, lam_old = lam;
  double t = 1.0, f_prev = obj(lam), last_gap = 0.0;
  int stall = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    Eigen::VectorXd g = A * y - c;
    lam_old = lam;
    lam = project_simplex(y - g / L);
    double f = obj(lam);
    if (f > f_prev) {  // restart momentum
      t = 1.0;
      lam = project_simplex(lam_old - (A * lam_old - c) / L);
      f = obj(lam);
    }
    double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = lam + ((t - 1.0) / tn) * (lam - lam_old);
    t = tn;
    f_prev = f;

    Eigen::VectorXd gl = A * lam - c;
    last_gap = lam.dot(gl) - gl.minCoeff();
    if (last_gap <= gap_target) return V * lam;
    if (last_gap < 0.999 * best_gap) {
      best_gap = last_gap;
      stall = 0;
    } else if (++stall > 2000) {
      break;  // machine-precision plateau
    }
  }
  if (last_gap <= std::max(gap_target, 1e-10 * scale)) return V * lam;
  throw NonConvergenceError("hull projection did not reach tolerance",
                            last_gap);
}

// Euclidean projection onto the ellipsoid {q : q' G^{-1} q <= R^2} + center.
Vector project_ellipsoid(const GramSpace& metric, double R,
                         const Vector& center, const Vector& w) {
  Eigen::MatrixXd Gd = Eigen::MatrixXd(metric.gram());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Gd);
  const Eigen::VectorXd lam = eig.eigenvalues();
  const Eigen::MatrixXd Q = eig.eigenvectors();
  Eigen::VectorXd wt = Q.transpose() * (w - center);
  Eigen::VectorXd a2 = lam * (R * R);  // squared semi-axes
  double inside = 0.0;
  for (int i = 0; i < wt.size(); ++i) inside += wt[i] * wt[i] / a2[i];
  if (inside <= 1.0) return w;
  const double amax = std::sqrt(a2.maxCoeff());
  double lo = 0.0, hi = wt.norm() * amax + amax * amax;
  for (int it = 0; it < 300; ++it) {
    double nu = 0.5 * (lo + hi);
    double f = 0.0;
    for (int i = 0; i < wt.size(); ++i) {
      double r = wt[i] * a2[i] / (a2[i] + nu);
      f += r * r / a2[i];
    }
    if (f > 1.0)
      lo = nu;
    else
      hi = nu;
  }
  const double nu = 0.5 * (lo + hi);
  Eigen::VectorXd pt(wt.size());
  for (int i = 0; i < wt.size(); ++i) pt[i] = wt[i] * a2[i] / (a2[i] + nu);
  return Q * pt + center;
}

double vdc2(uint64_t i) {
  double r = 0.0, f = 0.5;
  while (i) {
    r += f * static_cast<double>(i & 1);
    i >>= 1;
    f *= 0.5;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Point

Point::Point(Vector p) : p_(std::move(p)) {
  if (p_.size() == 0) throw PreconditionError("Point: empty coordinates");
}
int Point::dim() const { return static_cast<int>(p_.size()); }
double Point::support(const Vector& v, const GramSpace& space) const {
  check_dims(*this, v, space, "support");
  return space.inner(v, p_);
}
Vector Point::support_point(const Vector& v, const GramSpace& space) const {
  check_dims(*this, v, space, "support_point");
  return p_;
}
Vector Point::project(const Vector& x, const GramSpace& space,
                      const ProjectOptions&) const {
  check_dims(*this, x, space, "project");
  return p_;
}

// ---------------------------------------------------------------- Ball

Ball::Ball(Vector center, double radius, GramSpace metric)
    : center_(std::move(center)), radius_(radius), metric_(std::move(metric)) {
  if (radius_ < 0.0) throw PreconditionError("Ball: negative radius");
  metric_.check_vector(center_, "Ball center");
}
int Ball::dim() const { return static_cast<int>(center_.size()); }

namespace {
void check_ball_metric(const Ball& b, const GramSpace& space) {
  if (!b.metric().same_metric(space))
    throw PreconditionError(
        "Ball queried in a metric different from its own");
}
}  // namespace

double Ball::support(const Vector& v, const GramSpace& space) const {
  check_dims(*this, v, space, "support");
  check_ball_metric(*this, space);
  return space.inner(v, center_) + radius_ * space.norm(v);
}
Vector Ball::support_point(const Vector& v, const GramSpace& space) const {
  check_dims(*this, v, space, "support_point");
  check_ball_metric(*this, space);
  const double nv = space.norm(v);
  if (nv == 0.0) return center_;
  return center_ + (radius_ / nv) * v;
}
Vector Ball::project(const Vector& x, const GramSpace& space,
                     const ProjectOptions&) const {
  check_dims(*this, x, space, "project");
  check_ball_metric(*this, space);
  const Vector d = x - center_;
  const double nd = space.norm(d);
  if (nd <= radius_) return x;
  return center_ + (radius_ / nd) * d;
}

// ---------------------------------------------------------------- Box

Box::Box(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0)
    throw PreconditionError("Box: bound length mismatch");
  if ((lower_.array() > upper_.array()).any())
    throw PreconditionError("Box: lower bound exceeds upper bound");
}
int Box::dim() const { return static_cast<int>(lower_.size()); }

std::vector<Vector> Box::vertices() const {
  const int d = dim();
  if (d > 20) throw PreconditionError("Box: vertex enumeration refused for dim > 20");
  std::vector<Vector> out;
  out.reserve(size_t(1) << d);
  for (uint64_t mask = 0; mask < (uint64_t(1) << d); ++mask) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = (mask >> i) & 1 ? upper_[i] : lower_[i];
    out.push_back(std::move(v));
  }
  return out;
}

double Box::support(const Vector& v, const GramSpace& space) const {
  check_dims(*this, v, space, "support");
  const Vector w = space.matvec(v);
  if (is_diagonal(space.gram())) {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += (w[i] > 0.0 ? upper_[i] : lower_[i]) * w[i];
    return s;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& vert : vertices()) best = std::max(best, w.dot(vert));
  return best;
}
Vector Box::support_point(const Vector& v, const GramSpace& space) const {
  check_dims(*this, v, space, "support_point");
  const Vector w = space.matvec(v);
  if (is_diagonal(space.gram())) {
    Vector p(dim());
    for (int i = 0; i < dim(); ++i) p[i] = w[i] > 0.0 ? upper_[i] : lower_[i];
    return p;
  }
  double best = -std::numeric_limits<double>::infinity();
  Vector arg;
  for (const auto& vert : vertices()) {
    double s = w.dot(vert);
    if (s > best) {
      best = s;
      arg = vert;
    }
  }
  return arg;
}
Vector Box::project(const Vector& x, const GramSpace& space,
                    const ProjectOptions& opts) const {
  check_dims(*this, x, space, "project");
  if (is_diagonal(space.gram()))
    return x.cwiseMax(lower_).cwiseMin(upper_);
  if (dim() > 12)
    throw PreconditionError("Box: projection in a non-diagonal metric refused for dim > 12");
  return hull_qp(vertices(), x, space, opts);
}

// ---------------------------------------------------------------- Hull

Hull::Hull(std::vector<Vector> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw PreconditionError("Hull: needs at least one vertex");
  for (const auto& v : vertices_)
    if (v.size() != vertices_.front().size())
      throw PreconditionError("Hull: inconsistent vertex dimensions");
}
int Hull::dim() const { return static_cast<int>(vertices_.front().size()); }
double Hull::support(const Vector& v, const GramSpace& space) const {
  check_dims(*this, v, space, "support");
  const Vector w = space.matvec(v);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& vert : vertices_) best = std::max(best, w.dot(vert));
  return best;
}
Vector Hull::support_point(const Vector& v, const GramSpace& space) const {
  check_dims(*this, v, space, "support_point");
  const Vector w = space.matvec(v);
  size_t arg = 0;
  double best = w.dot(vertices_[0]);
  for (size_t j = 1; j < vertices_.size(); ++j) {
    double s = w.dot(vertices_[j]);
    if (s > best) {  // ties keep the lowest index
      best = s;
      arg = j;
    }
  }
  return vertices_[arg];
}
Vector Hull::project(const Vector& x, const GramSpace& space,
                     const ProjectOptions& opts) const {
  check_dims(*this, x, space, "project");
  return hull_qp(vertices_, x, space, opts);
}

// ---------------------------------------------------------------- MinkowskiSum

MinkowskiSum::MinkowskiSum(ConvexSetPtr left, ConvexSetPtr right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (!left_ || !right_) throw PreconditionError("MinkowskiSum: null summand");
  if (left_->dim() != right_->dim())
    throw DimensionMismatch("MinkowskiSum: summand dimension mismatch");
}
int MinkowskiSum::dim() const { return left_->dim(); }
double MinkowskiSum::support(const Vector& v, const GramSpace& space) const {
  return left_->support(v, space) + right_->support(v, space);
}
Vector MinkowskiSum::support_point(const Vector& v,
                                   const GramSpace& space) const {
  return left_->support_point(v, space) + right_->support_point(v, space);
}

namespace {

ConvexSetPtr combine_minkowski(const ConvexSetPtr& a, const ConvexSetPtr& b) {
  if (auto pa = std::dynamic_pointer_cast<const Point>(a))
    return translate(b, pa->value());
  if (auto pb = std::dynamic_pointer_cast<const Point>(b))
    return translate(a, pb->value());
  auto ba = std::dynamic_pointer_cast<const Ball>(a);
  auto bb = std::dynamic_pointer_cast<const Ball>(b);
  if (ba && bb && ba->metric().same_metric(bb->metric()))
    return make_ball(ba->center() + bb->center(), ba->radius() + bb->radius(),
                     ba->metric());
  auto xa = std::dynamic_pointer_cast<const Box>(a);
  auto xb = std::dynamic_pointer_cast<const Box>(b);
  if (xa && xb)
    return make_box(xa->lower() + xb->lower(), xa->upper() + xb->upper());
  auto ha = std::dynamic_pointer_cast<const Hull>(a);
  auto hb = std::dynamic_pointer_cast<const Hull>(b);
  if (ha && hb &&
      ha->vertex_list().size() * hb->vertex_list().size() <= 1024) {
    std::vector<Vector> verts;
    verts.reserve(ha->vertex_list().size() * hb->vertex_list().size());
    for (const auto& u : ha->vertex_list())
      for (const auto& v : hb->vertex_list()) verts.push_back(u + v);
    return make_hull(std::move(verts));
  }
  return std::make_shared<MinkowskiSum>(a, b);
}

}  // namespace

Vector MinkowskiSum::project(const Vector& x, const GramSpace& space,
                             const ProjectOptions& opts) const {
  check_dims(*this, x, space, "project");
  ConvexSetPtr ls = simplify(left_), rs = simplify(right_);
  ConvexSetPtr combined = combine_minkowski(ls, rs);
  if (!std::dynamic_pointer_cast<const MinkowskiSum>(combined))
    return combined->project(x, space, opts);

  // S + Ball reduces to a projection onto S and a radial step.
  auto try_ball = [&](const ConvexSetPtr& ball_side,
                      const ConvexSetPtr& other) -> std::optional<Vector> {
    auto ball = std::dynamic_pointer_cast<const Ball>(ball_side);
    if (!ball || !ball->metric().same_metric(space)) return std::nullopt;
    const Vector q = other->project(x - ball->center(), space, opts);
    const Vector w = x - ball->center() - q;
    const double d = space.norm(w);
    if (d <= ball->radius()) return x;
    return Vector(q + ball->center() + (ball->radius() / d) * w);
  };
  if (auto r = try_ball(rs, ls)) return *r;
  if (auto r = try_ball(ls, rs)) return *r;

  // Generic fallback: alternating minimization over the two summands.
  Vector e1 = Vector::Zero(dim());
  e1[0] = 1.0;
  Vector a = ls->support_point(e1, space);
  Vector b = rs->support_point(e1, space);
  double move = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iters; ++it) {
    Vector an = ls->project(x - b, space, opts);
    Vector bn = rs->project(x - an, space, opts);
    move = space.norm(an - a) + space.norm(bn - b);
    a = std::move(an);
    b = std::move(bn);
    if (move <= opts.tol * (1.0 + space.norm(a + b))) return a + b;
  }
  throw NonConvergenceError("Minkowski projection did not converge", move);
}

// ---------------------------------------------------------------- factories

ConvexSetPtr make_point(Vector p) { return std::make_shared<Point>(std::move(p)); }
ConvexSetPtr make_ball(Vector center, double radius, GramSpace metric) {
  return std::make_shared<Ball>(std::move(center), radius, std::move(metric));
}
ConvexSetPtr make_box(Vector lower, Vector upper) {
  return std::make_shared<Box>(std::move(lower), std::move(upper));
}
ConvexSetPtr make_hull(std::vector<Vector> vertices) {
  return std::make_shared<Hull>(std::move(vertices));
}
ConvexSetPtr make_minkowski_sum(ConvexSetPtr left, ConvexSetPtr right) {
  return std::make_shared<MinkowskiSum>(std::move(left), std::move(right));
}

double support(const ConvexSet& set, const Vector& v, const GramSpace& space) {
  return set.support(v, space);
}
Vector support_point(const ConvexSet& set, const Vector& v,
                     const GramSpace& space) {
  return set.support_point(v, space);
}
ProjectionResult project(const ConvexSet& set, const Vector& x,
                         const GramSpace& space, const ProjectOptions& opts) {
  ProjectionResult r;
  r.point = set.project(x, space, opts);
  r.distance = space.norm(x - r.point);
  return r;
}

ConvexSetPtr translate(const ConvexSetPtr& set, const Vector& t) {
  if (auto p = std::dynamic_pointer_cast<const Point>(set))
    return make_point(p->value() + t);
  if (auto b = std::dynamic_pointer_cast<const Ball>(set))
    return make_ball(b->center() + t, b->radius(), b->metric());
  if (auto x = std::dynamic_pointer_cast<const Box>(set))
    return make_box(x->lower() + t, x->upper() + t);
  if (auto h = std::dynamic_pointer_cast<const Hull>(set)) {
    std::vector<Vector> verts = h->vertex_list();
    for (auto& v : verts) v += t;
    return make_hull(std::move(verts));
  }
  if (auto m = std::dynamic_pointer_cast<const MinkowskiSum>(set))
    return make_minkowski_sum(translate(m->left(), t), m->right());
  throw PreconditionError("translate: unknown set variant");
}

ConvexSetPtr simplify(const ConvexSetPtr& set) {
  if (auto m = std::dynamic_pointer_cast<const MinkowskiSum>(set))
    return combine_minkowski(simplify(m->left()), simplify(m->right()));
  return set;
}

namespace {

ConvexSetPtr clone_set(const ConvexSet& s) {
  if (auto p = dynamic_cast<const Point*>(&s)) return make_point(p->value());
  if (auto b = dynamic_cast<const Ball*>(&s))
    return make_ball(b->center(), b->radius(), b->metric());
  if (auto x = dynamic_cast<const Box*>(&s))
    return make_box(x->lower(), x->upper());
  if (auto h = dynamic_cast<const Hull*>(&s))
    return make_hull(h->vertex_list());
  if (auto m = dynamic_cast<const MinkowskiSum*>(&s))
    return make_minkowski_sum(m->left(), m->right());
  throw PreconditionError("clone: unknown set variant");
}

}  // namespace

// ---------------------------------------------------------------- dual route

namespace {

// Euclidean projection onto the linear image G * T of a structural set T.
Vector project_image(const GramSpace& space, const ConvexSetPtr& T,
                     const Vector& w, const ProjectOptions& opts) {
  if (auto p = std::dynamic_pointer_cast<const Point>(T))
    return space.matvec(p->value());
  if (auto b = std::dynamic_pointer_cast<const Ball>(T)) {
    if (!b->metric().same_metric(space))
      throw PreconditionError("project_dual: ball metric differs from query space");
    return project_ellipsoid(space, b->radius(), space.matvec(b->center()), w);
  }
  if (auto h = std::dynamic_pointer_cast<const Hull>(T)) {
    std::vector<Vector> verts;
    verts.reserve(h->vertex_list().size());
    for (const auto& v : h->vertex_list()) verts.push_back(space.matvec(v));
    return hull_qp(verts, w, GramSpace::euclidean(space.dim()), opts);
  }
  if (auto x = std::dynamic_pointer_cast<const Box>(T)) {
    if (is_diagonal(space.gram())) {
      Vector lo = space.matvec(x->lower()), hi = space.matvec(x->upper());
      return w.cwiseMax(lo).cwiseMin(hi);
    }
    if (x->dim() <= 12) {
      std::vector<Vector> verts;
      for (const auto& v : x->vertices()) verts.push_back(space.matvec(v));
      return hull_qp(verts, w, GramSpace::euclidean(space.dim()), opts);
    }
  }
  throw PreconditionError("project_dual: unsupported set structure");
}

}  // namespace

ProjectionResult project_dual(const ConvexSet& set, const Vector& x,
                              const GramSpace& space,
                              const ProjectOptions& opts) {
  check_dims(set, x, space, "project_dual");
  // Minimize 1/2 h'Gh + sigma(-h, T), T = set - x; the minimizer is
  // Proj(x, set) - x. The nonsmooth term is the Euclidean support function
  // of D = G*T, so its prox follows from a Moreau decomposition.
  ConvexSetPtr T = simplify(translate(simplify(clone_set(set)), -x));

  const double L = space.lambda_max_bound();
  const double mu = std::min(space.lambda_min(), L);
  const double tau = 1.0 / (L * 1.000001);
  const double beta =
      (std::sqrt(L) - std::sqrt(mu)) / (std::sqrt(L) + std::sqrt(mu));

  auto objective = [&](const Vector& h) {
    return 0.5 * space.inner(h, h) + T->support(-h, space);
  };

  Vector h = Vector::Zero(space.dim());
  Vector y = h;
  double f_prev = objective(h);
  double move = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iters; ++it) {
    Vector z = y - tau * space.matvec(y);
    Vector hn = z + tau * project_image(space, T, -z / tau, opts);
    double f = objective(hn);
    if (f > f_prev) {  // restart from the last accepted iterate
      z = h - tau * space.matvec(h);
      hn = z + tau * project_image(space, T, -z / tau, opts);
      f = objective(hn);
      y = hn;
    } else {
      y = hn + beta * (hn - h);
    }
    move = space.norm(hn - h);
    h = std::move(hn);
    f_prev = f;
    if (move <= opts.tol * (1.0 + space.norm(h))) {
      ProjectionResult r;
      r.point = x + h;
      r.distance = space.norm(h);
      return r;
    }
  }
  throw NonConvergenceError("dual projection did not converge", move);
}

Vector prox_support(const ConvexSet& set, const Vector& z,
                    const GramSpace& space, double t,
                    const ProjectOptions& opts) {
  if (t <= 0.0) throw PreconditionError("prox_support: step must be positive");
  return z - t * set.project(z / t, space, opts);
}

// ---------------------------------------------------------------- directions

std::vector<Vector> unit_directions(int dim, int n, uint64_t seed) {
  if (dim < 1 || n < 1)
    throw PreconditionError("unit_directions: dim and n must be positive");
  std::vector<Vector> dirs;
  dirs.reserve(n);
  constexpr double kGolden = 0.6180339887498949;  // 1/phi
  const double phase = std::fmod(static_cast<double>(seed) * kGolden, 1.0);
  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      Vector v(1);
      v[0] = (i % 2 == 0) ? 1.0 : -1.0;
      dirs.push_back(v);
    }
  } else if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      double th = 2.0 * M_PI * std::fmod(phase + (i + 1) * kGolden, 1.0);
      Vector v(2);
      v << std::cos(th), std::sin(th);
      dirs.push_back(v);
    }
  } else if (dim == 3) {
    for (int i = 0; i < n; ++i) {
      double z = 1.0 - 2.0 * vdc2(static_cast<uint64_t>(i) + 1);
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double th = 2.0 * M_PI * std::fmod(phase + (i + 1) * kGolden, 1.0);
      Vector v(3);
      v << r * std::cos(th), r * std::sin(th), z;
      dirs.push_back(v);
    }
  } else {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      Vector v(dim);
      for (int k = 0; k < dim; ++k) v[k] = gauss(rng);
      double nrm = v.norm();
      dirs.push_back(nrm > 0.0 ? Vector(v / nrm) : Vector(Vector::Unit(dim, 0)));
    }
  }
  return dirs;
}

double excess_estimate(const ConvexSet& A, const ConvexSet& B,
                       const GramSpace& space, int ndirs, uint64_t seed) {
  if (ndirs < 1) throw PreconditionError("excess_estimate: ndirs must be >= 1");
  if (A.dim() != B.dim() || A.dim() != space.dim())
    throw DimensionMismatch("excess_estimate: dimension mismatch");
  double best = -std::numeric_limits<double>::infinity();
  for (const Vector& raw : unit_directions(space.dim(), ndirs, seed)) {
    const double nrm = space.norm(raw);
    if (nrm == 0.0) continue;
    const Vector v = raw / nrm;
    best = std::max(best, A.support(v, space) - B.support(v, space));
  }
  return best;
}

}  // namespace rosl
