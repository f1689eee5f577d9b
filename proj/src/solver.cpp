#include "rosl/solver.hpp"

#include <cmath>

namespace rosl {

namespace {

double require_kappa(double l, double L) {
  if (l >= 0.0)
    throw PreconditionError("solve: requires a negative ROSL constant l");
  if (L < 0.0) throw PreconditionError("solve: negative Lipschitz constant");
  const double kappa = -L / (2.0 * l);
  if (kappa >= 1.0)
    throw PreconditionError("solve: kappa = -L/(2l) = " +
                            std::to_string(kappa) + " is not < 1");
  return kappa;
}

}  // namespace

LocalizationBall localization_ball(const Vector& xt, const Vector& yt,
                                   const Vector& ybar, double l,
                                   const GramSpace& space) {
  if (l >= 0.0) throw PreconditionError("localization_ball: requires l < 0");
  space.check_vector(xt, "localization_ball");
  space.check_vector(yt, "localization_ball");
  space.check_vector(ybar, "localization_ball");
  LocalizationBall ball;
  ball.center = xt + (ybar - yt) / (2.0 * l);
  ball.radius = -space.norm(ybar - yt) / (2.0 * l);
  return ball;
}

AprioriBounds apriori_bounds(double v0_norm, double l, double L,
                             const std::vector<double>& xi_norms, int n) {
  if (n < 0) throw PreconditionError("apriori_bounds: n must be >= 0");
  const double kappa = require_kappa(l, L);

  auto eta = [&](int j) {
    if (j < 0) return 0.0;
    double s = 0.0;
    for (int k = 0; k <= j; ++k) {
      const int idx = j - k;
      const double xi = idx < static_cast<int>(xi_norms.size()) ? xi_norms[idx] : 0.0;
      s += std::pow(kappa, k) * xi;
    }
    return s;
  };

  AprioriBounds out;
  out.eta_n = eta(n);

  // dist(x_n, F^{-1}) <= -kappa^{n-1}/(2l) ||v_0|| + eta_{n-1}; at n = 0 the
  // trivial bound from the first projection, -||v_0||/(2l), applies.
  if (n == 0)
    out.dist_set_bound = -v0_norm / (2.0 * l);
  else
    out.dist_set_bound = -std::pow(kappa, n - 1) / (2.0 * l) * v0_norm + eta(n - 1);

  // sum_{j >= n} eta_j = sum_i ||xi_i|| kappa^{max(n-i,0)} / (1 - kappa).
  double tail = 0.0;
  for (size_t i = 0; i < xi_norms.size(); ++i) {
    const int ex = std::max(n - static_cast<int>(i), 0);
    tail += xi_norms[i] * std::pow(kappa, ex) / (1.0 - kappa);
  }
  out.dist_point_bound =
      -std::pow(kappa, n) / (2.0 * l * (1.0 - kappa)) * v0_norm + tail;
  return out;
}

double solution_distance_lower_bound(double omega_inverse_min,
                                     double dist_to_Fxt) {
  if (omega_inverse_min < 0.0 || dist_to_Fxt < 0.0)
    throw PreconditionError("solution_distance_lower_bound: negative input");
  if (dist_to_Fxt == 0.0) return 0.0;
  return omega_inverse_min;
}

SolveReport solve(const SetValuedMap& map, const Vector& ybar,
                  const Vector& x0, const SolveOptions& opts) {
  if (!map.declared_l)
    throw PreconditionError("solve: map has no declared ROSL constant");
  if (!map.declared_L)
    throw PreconditionError(
        "solve: map has no declared Lipschitz constant; pass an estimate explicitly");
  const double l = *map.declared_l;
  const double L = *map.declared_L;
  const double kappa = require_kappa(l, L);
  map.domain.check_vector(x0, "solve");
  map.domain.check_vector(ybar, "solve");

  SolveReport report;
  report.kappa = kappa;
  report.l = l;
  report.L = L;
  if (opts.record_iterates) report.iterates = std::vector<Vector>{x0};

  auto xi_at = [&](int n) -> Vector {
    if (n < static_cast<int>(opts.xi_schedule.size())) return opts.xi_schedule[n];
    return Vector::Zero(map.domain.dim());
  };
  std::vector<double> xi_norms;
  for (const auto& xi : opts.xi_schedule) xi_norms.push_back(map.domain.norm(xi));

  Vector x = x0;
  for (int n = 0; n <= opts.max_iters; ++n) {
    const ConvexSetPtr Fx = map.eval(x);
    const Vector proj = Fx->project(ybar, map.domain, opts.projection);
    const Vector v = ybar - proj;
    const double vn = map.domain.norm(v);
    report.residuals.push_back(vn);

    if (n == 0) {
      report.localization = localization_ball(x0, proj, ybar, l, map.domain);
      report.dist_point_bound =
          apriori_bounds(vn, l, L, xi_norms, 0).dist_point_bound;
    }
    if (vn <= opts.tol_residual) {
      report.converged = true;
      break;
    }
    if (n == opts.max_iters) break;

    x = x + v / (2.0 * l) + xi_at(n);
    if (opts.record_iterates) report.iterates->push_back(x);
  }

  const double v0 = report.residuals.front();
  for (int n = 0; n < static_cast<int>(report.residuals.size()); ++n) {
    const AprioriBounds b = apriori_bounds(v0, l, L, xi_norms, n);
    report.eta.push_back(b.eta_n);
    if (n >= 1) report.dist_set_bounds.push_back(b.dist_set_bound);
  }

  report.solution = std::move(x);
  return report;
}

}  // namespace rosl
