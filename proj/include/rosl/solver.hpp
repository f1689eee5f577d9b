#pragma once

#include <optional>
#include <vector>

#include "rosl/set_valued_map.hpp"

namespace rosl {

struct SolveOptions {
  int max_iters = 200;
  double tol_residual = 1e-10;
  /// Injected errors xi_n; entries beyond the schedule are zero.
  std::vector<Vector> xi_schedule;
  bool record_iterates = false;
  ProjectOptions projection;
};

struct LocalizationBall {
  Vector center;
  double radius = 0.0;
};

struct SolveReport {
  Vector solution;
  std::optional<std::vector<Vector>> iterates;
  std::vector<double> residuals;  // ||v_n|| per step, starting at n = 0
  double kappa = 0.0;
  double l = 0.0;
  double L = 0.0;
  std::vector<double> eta;              // eta_n from the xi schedule
  std::vector<double> dist_set_bounds;  // a-priori dist(x_n, F^{-1}(ybar)), n >= 1
  double dist_point_bound = 0.0;        // ||x_0 - xbar|| bound
  LocalizationBall localization;
  bool converged = false;
};

/// Damped projection iteration for ybar in F(x):
///   v_n = ybar - Proj(ybar, F(x_n)),  x_{n+1} = x_n + v_n / (2l) + xi_n.
/// Requires declared_l < 0, declared_L, and kappa = -L/(2l) < 1.
SolveReport solve(const SetValuedMap& map, const Vector& ybar,
                  const Vector& x0, const SolveOptions& opts);

/// Ball guaranteed to contain a solution: center xt + (ybar - yt)/(2l),
/// radius -||ybar - yt||/(2l).
LocalizationBall localization_ball(const Vector& xt, const Vector& yt,
                                   const Vector& ybar, double l,
                                   const GramSpace& space);

struct AprioriBounds {
  double eta_n = 0.0;
  double dist_set_bound = 0.0;
  double dist_point_bound = 0.0;
};

/// eta_n = sum_k kappa^k ||xi_{n-k}||, the dist-to-solution-set bound at
/// step n, and the dist-to-limit bound at step n (xi beyond the schedule
/// treated as zero, tails summed in closed form).
AprioriBounds apriori_bounds(double v0_norm, double l, double L,
                             const std::vector<double>& xi_norms, int n);

/// Bookkeeping for the modulus-of-continuity lower bound: every solution x
/// satisfies ||x - xt|| >= r where r = min omega^{-1}(dist(ybar, F(xt))),
/// supplied by the caller.
double solution_distance_lower_bound(double omega_inverse_min,
                                     double dist_to_Fxt);

}  // namespace rosl
