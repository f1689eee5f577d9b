#include "rosl/elliptic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rosl/parallel.hpp"

namespace rosl {

namespace {

const GramSpace& euclid2() {
  static const GramSpace g = GramSpace::euclidean(2);
  return g;
}

// Per-node right-hand-side set with a closed-form fast path for the common
// point + ball case (which simplify() collapses to a single Ball).
struct NodeSet {
  ConvexSetPtr set;
  bool is_ball = false;
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  double R = 0.0;
};

std::vector<NodeSet> node_sets(const GelfandGrid& grid, const Vector& u) {
  std::vector<NodeSet> out(grid.nodes);
  parallel_for(grid.nodes, [&](int i) {
    NodeSet ns;
    ns.set = simplify(grid.rhs.eval(grid.node_x[i], grid.value_at(u, i)));
    if (const auto* b = dynamic_cast<const Ball*>(ns.set.get())) {
      if (b->dim() == 2 && b->metric().same_metric(euclid2())) {
        ns.is_ball = true;
        ns.c = b->center();
        ns.R = b->radius();
      }
    } else if (const auto* p = dynamic_cast<const Point*>(ns.set.get())) {
      if (p->dim() == 2) {
        ns.is_ball = true;
        ns.c = p->value();
        ns.R = 0.0;
      }
    }
    out[i] = std::move(ns);
  });
  return out;
}

double node_support(const NodeSet& ns, const Eigen::Vector2d& v) {
  if (ns.is_ball) return v.dot(ns.c) + ns.R * v.norm();
  Vector vv(2);
  vv << v[0], v[1];
  return ns.set->support(vv, euclid2());
}

Eigen::Vector2d node_project(const NodeSet& ns, const Eigen::Vector2d& w,
                             const ProjectOptions& opts) {
  if (ns.is_ball) {
    const Eigen::Vector2d d = w - ns.c;
    const double dn = d.norm();
    if (dn <= ns.R) return w;
    if (dn == 0.0) return ns.c;
    return ns.c + (ns.R / dn) * d;
  }
  Vector ww(2);
  ww << w[0], w[1];
  const Vector p = ns.set->project(ww, euclid2(), opts);
  return {p[0], p[1]};
}

double support_sum(const GelfandGrid& grid, const std::vector<NodeSet>& sets,
                   const Vector& v, std::vector<double>& scratch) {
  const int nodes = grid.nodes;
  parallel_for(nodes, [&](int i) {
    scratch[i] = node_support(sets[i], {v[i], v[nodes + i]});
  });
  double total = 0.0;
  for (int i = 0; i < nodes; ++i) total += scratch[i];
  return grid.h * total;
}

}  // namespace

GelfandGrid build_grid(int N, PointwiseMap f) {
  if (N < 4) throw PreconditionError("build_grid: N must be >= 4");
  if (!f.eval) throw PreconditionError("build_grid: rhs has no eval function");
  const int nodes = N - 1;
  const int dim = 2 * nodes;
  const double h = 1.0 / N;

  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(3 * dim);
  mt.reserve(dim);
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < nodes; ++i) {
      const int r = b * nodes + i;
      kt.emplace_back(r, r, 2.0 / h);
      if (i + 1 < nodes) {
        kt.emplace_back(r, r + 1, -1.0 / h);
        kt.emplace_back(r + 1, r, -1.0 / h);
      }
      mt.emplace_back(r, r, h);
    }
  }
  Eigen::SparseMatrix<double> K(dim, dim), M(dim, dim);
  K.setFromTriplets(kt.begin(), kt.end());
  M.setFromTriplets(mt.begin(), mt.end());

  const double l_f = f.l_f;
  std::vector<double> node_x(nodes);
  for (int i = 0; i < nodes; ++i) node_x[i] = (i + 1) * h;

  return GelfandGrid{N,
                     h,
                     nodes,
                     std::move(node_x),
                     GelfandData(GramSpace(K), GramSpace(M), -1.0, l_f),
                     std::move(f)};
}

double nemytskii_support(const GelfandGrid& grid, const Vector& u,
                         const Vector& v) {
  grid.W().check_vector(u, "nemytskii_support");
  grid.W().check_vector(v, "nemytskii_support");
  const auto sets = node_sets(grid, u);
  std::vector<double> scratch(grid.nodes);
  return support_sum(grid, sets, v, scratch);
}

double dual_functional(const GelfandGrid& grid, const Vector& u,
                       const Vector& h) {
  grid.W().check_vector(u, "dual_functional");
  grid.W().check_vector(h, "dual_functional");
  return 0.5 * h.dot(grid.W().matvec(h)) + h.dot(grid.V().matvec(u)) +
         nemytskii_support(grid, u, -h);
}

ProjectionStepResult projection_step(const GelfandGrid& grid, const Vector& u,
                                     const PdiOptions& opts) {
  grid.W().check_vector(u, "projection_step");
  if (opts.inner_tol <= 0.0 || opts.inner_max_iters < 1)
    throw PreconditionError("projection_step: tolerances must be positive");

  const int n = grid.dim();
  const int nodes = grid.nodes;
  const auto sets = node_sets(grid, u);
  const Vector Ku = grid.V().matvec(u);
  const Eigen::SparseMatrix<double>& Wm = grid.W().gram();

  // Certified step bound; the power-iteration estimate can lag on fine grids
  // where the top of the spectrum clusters.
  const double L = grid.W().lambda_max_bound();
  const double mu = std::min(grid.W().lambda_min(), L);
  const double tau = 1.0 / L;
  const double beta =
      (std::sqrt(L) - std::sqrt(mu)) / (std::sqrt(L) + std::sqrt(mu));
  const double s = tau * grid.h;  // per-node prox weight
  const ProjectOptions popts{std::max(1e-13, opts.inner_tol * 1e-3), 200000};

  std::vector<double> scratch(nodes);

  auto prox = [&](const Vector& z, Vector& out) {
    parallel_for(nodes, [&](int i) {
      const Eigen::Vector2d zi(z[i], z[nodes + i]);
      const Eigen::Vector2d pi = zi + s * node_project(sets[i], -zi / s, popts);
      out[i] = pi[0];
      out[nodes + i] = pi[1];
    });
  };

  auto objective = [&](const Vector& hh, const Vector& Whh) {
    return 0.5 * hh.dot(Whh) + hh.dot(Ku) +
           support_sum(grid, sets, -hh, scratch);
  };

  Vector hcur = Vector::Zero(n);
  Vector y = hcur;
  Vector Wh = Vector::Zero(n);
  Vector hnew(n), z(n);
  double fcur = 0.0;  // I(0) = 0: every term vanishes at the origin
  double rW2 = 0.0;
  double duality = std::numeric_limits<double>::infinity();

  ProjectionStepResult result;
  bool done = false;
  for (int it = 1; it <= opts.inner_max_iters; ++it) {
    z = y - tau * (Wm * y + Ku);
    prox(z, hnew);
    Vector Whn = Wm * hnew;
    double f = objective(hnew, Whn);
    if (f > fcur + 1e-12 * (1.0 + std::abs(fcur))) {
      // restart: plain proximal step from the last accepted iterate
      z = hcur - tau * (Wh + Ku);
      prox(z, hnew);
      Whn = Wm * hnew;
      f = objective(hnew, Whn);
      y = hnew;
    } else {
      y = hnew + beta * (hnew - hcur);
    }

    const double move2 = (hnew - hcur).dot(Whn - Wh);
    rW2 = std::max(0.0, hnew.dot(Whn));
    duality = std::abs(f + 0.5 * rW2);
    hcur.swap(hnew);
    Wh.swap(Whn);
    fcur = f;
    result.inner_iters = it;
    if (std::sqrt(std::max(0.0, move2)) <=
            opts.inner_tol * (1.0 + std::sqrt(rW2)) &&
        duality <= opts.inner_tol * (1.0 + rW2)) {
      done = true;
      break;
    }
  }
  if (!done)
    throw NonConvergenceError(
        "projection_step: inner solver did not reach tolerance within " +
            std::to_string(opts.inner_max_iters) + " iterations",
        duality);

  result.h_star = std::move(hcur);
  result.residual = std::sqrt(rW2);
  result.dual_value = fcur;
  return result;
}

PdiReport solve_pdi(const GelfandGrid& grid, const Vector& u0,
                    const PdiOptions& opts) {
  grid.W().check_vector(u0, "solve_pdi");
  if (opts.max_steps < 0)
    throw PreconditionError("solve_pdi: max_steps must be >= 0");

  PdiReport rep;
  rep.kappa = std::numeric_limits<double>::quiet_NaN();
  if (grid.rhs.L_f) {
    const CompositeConstants cc = composite_constants(
        -1.0, grid.rhs.l_f, *grid.rhs.L_f, grid.gelfand.cVH());
    rep.kappa = cc.kappa;
    rep.kappa_certified = cc.admissible;
  }
  if (!rep.kappa_certified && !opts.allow_unjustified)
    throw PreconditionError(
        "solve_pdi: contraction factor not certified (L_f unknown or "
        "kappa >= 1); set allow_unjustified to run with divergence "
        "detection only");

  Vector u = u0;
  if (opts.record_iterates) rep.iterates.push_back(u);
  int increases = 0;
  double prev = std::numeric_limits<double>::infinity();
  for (int step = 0;; ++step) {
    const ProjectionStepResult res = projection_step(grid, u, opts);
    rep.residuals.push_back(res.residual);
    rep.inner_iters.push_back(res.inner_iters);
    rep.dual_values.push_back(res.dual_value);
    rep.xi_norm_bounds.push_back(opts.inner_tol * (1.0 + grid.W().norm(u)));

    if (res.residual > prev) {
      if (++increases > 3)
        throw DivergenceError(
            "solve_pdi: residual increased for more than 3 consecutive "
            "steps (last residual " +
            std::to_string(res.residual) + " at step " +
            std::to_string(step) + ")");
    } else {
      increases = 0;
    }
    prev = res.residual;

    if (res.residual <= opts.outer_tol) {
      rep.converged = true;
      break;
    }
    if (step >= opts.max_steps) break;
    u += 0.5 * res.h_star;
    if (opts.record_iterates) rep.iterates.push_back(u);
  }
  rep.solution = std::move(u);
  return rep;
}

PointwiseMap builtin_rhs(const std::string& name, const RhsParams& params) {
  if (name == "bsp1") {
    const double lf = params.l_f;
    const double R = params.R.value_or(10.0);
    if (R < 0.0) throw PreconditionError("builtin_rhs: R must be >= 0");
    PointwiseMap f;
    f.l_f = lf;
    f.L_f = 0.5 - lf;
    f.alpha_bound = R;
    f.beta = 4.0 / 9.0 + std::abs(lf);
    f.eval = [lf, R](double, const Eigen::Vector2d& s) {
      const double s2 = s.squaredNorm();
      const double factor = -(4.0 / 9.0) * s2 / (1.0 + s2) + lf;
      Vector p(2);
      p << factor * s[0], factor * s[1];
      return make_minkowski_sum(make_point(std::move(p)),
                                make_ball(Vector::Zero(2), R, euclid2()));
    };
    return f;
  }
  if (name == "bsp2") {
    const double R = params.R.value_or(5.0);
    if (R < 0.0) throw PreconditionError("builtin_rhs: R must be >= 0");
    PointwiseMap f;
    // the linear part -u_i is -1-ROSL; the product term has no global
    // one-sided bound, so no L_f is declared and runs are unjustified
    f.l_f = -1.0;
    f.L_f = std::nullopt;
    f.alpha_bound = 1.0 + R;
    f.beta = 1.0;
    f.eval = [R](double x, const Eigen::Vector2d& s) {
      Vector p(2);
      p << -s[0] * s[1] + 1.0 - s[0] + x, -s[0] * s[1] + 1.0 - s[1] + x;
      return make_minkowski_sum(make_point(std::move(p)),
                                make_ball(Vector::Zero(2), R, euclid2()));
    };
    return f;
  }
  throw PreconditionError("builtin_rhs: unknown name '" + name + "'");
}

Vector builtin_initial_data(const GelfandGrid& grid, const std::string& name) {
  Vector u(grid.dim());
  const double pi = std::numbers::pi;
  for (int i = 0; i < grid.nodes; ++i) {
    const double x = grid.node_x[i];
    if (name == "bsp1") {
      u[i] = 0.5 * std::sin(2.0 * pi * x);
      u[grid.nodes + i] = 0.5 * std::sin(16.0 * pi * x);
    } else if (name == "bsp2") {
      const double bump = x * (1.0 - x);
      u[i] = bump * std::exp(-(x - 0.1) * (x - 0.1) / 0.1);
      u[grid.nodes + i] = bump * std::exp(-(x - 0.8) * (x - 0.8) / 0.01);
    } else {
      throw PreconditionError("builtin_initial_data: unknown name '" + name +
                              "'");
    }
  }
  return u;
}

}  // namespace rosl
