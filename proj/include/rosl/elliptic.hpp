#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rosl/convex_set.hpp"
#include "rosl/gelfand.hpp"

namespace rosl {

/// Pointwise set-valued right-hand side f(x, s) of the two-component system
///   (-u1'', -u2'') in f(x, u1, u2) on (0,1), u = 0 on the boundary.
/// eval returns convex compact subsets of R^2 in the Euclidean metric.
struct PointwiseMap {
  std::function<ConvexSetPtr(double x, const Eigen::Vector2d& s)> eval;
  double l_f = 0.0;
  std::optional<double> L_f;
  double alpha_bound = 0.0;  // linear growth: ||f(x,s)|| <= alpha + beta ||s||
  double beta = 0.0;
};

/// P1 finite elements on a uniform grid of N cells, Dirichlet boundary, two
/// solution components stored block-wise (component 1 nodes, then component
/// 2 nodes). Stiffness Gram is block-diagonal (1/h) tridiag(-1, 2, -1);
/// the mass matrix is lumped (diagonal h), which makes the nonsmooth term of
/// the inner problem separable per node.
struct GelfandGrid {
  int N = 0;
  double h = 0.0;
  int nodes = 0;                // interior nodes per component, N - 1
  std::vector<double> node_x;   // x_i = i/N, i = 1..N-1
  GelfandData gelfand;          // V = stiffness, H = lumped mass, W mixed
  PointwiseMap rhs;

  int dim() const { return 2 * nodes; }
  const GramSpace& V() const { return gelfand.V(); }
  const GramSpace& H() const { return gelfand.H(); }
  const GramSpace& W() const { return gelfand.W(); }

  Eigen::Vector2d value_at(const Vector& u, int node) const {
    return {u[node], u[nodes + node]};
  }
};

struct PdiOptions {
  double inner_tol = 1e-9;
  int inner_max_iters = 200000;
  int max_steps = 200;
  double outer_tol = 1e-6;
  bool record_iterates = false;
  /// Runs composed maps whose contraction factor is not certified (kappa
  /// unknown or >= 1); divergence detection still applies.
  bool allow_unjustified = false;
};

struct ProjectionStepResult {
  Vector h_star;
  double residual = 0.0;  // ||h_star||_W = dist_{W*}(0, Laplacian u + N_f(u))
  int inner_iters = 0;
  double dual_value = 0.0;  // I(h_star), approximately -residual^2 / 2
};

struct PdiReport {
  Vector solution;
  std::vector<double> residuals;
  std::vector<int> inner_iters;
  std::vector<double> dual_values;
  std::vector<Vector> iterates;  // recorded when requested (includes u0)
  std::vector<double> xi_norm_bounds;  // implicit per-step error bounds
  double kappa = 0.0;            // composite contraction factor, NaN if unknown
  bool kappa_certified = false;
  bool converged = false;
};

GelfandGrid build_grid(int N, PointwiseMap f);

/// sigma_W(v, J_W N_f(u)) = sum_i w_i sigma(v(x_i), f(x_i, u(x_i))), the
/// quadrature form of the Nemytskii support function.
double nemytskii_support(const GelfandGrid& grid, const Vector& u,
                         const Vector& v);

/// I(h) = 1/2 h'(K - l_f M)h + h'Ku + sum_i w_i sigma(-h_i, f(x_i, u(x_i))),
/// whose unique minimizer is Proj_W(0, J_W F_V(u) + J_W N_f(u)).
double dual_functional(const GelfandGrid& grid, const Vector& u,
                       const Vector& h);

/// Minimizes I by monotone accelerated proximal gradient with a pointwise
/// Moreau prox. Stops when both the successive-iterate W-distance and the
/// duality residual |I(h) + 1/2 ||h||_W^2| meet inner_tol.
ProjectionStepResult projection_step(const GelfandGrid& grid, const Vector& u,
                                     const PdiOptions& opts);

/// Outer damped iteration u_{n+1} = u_n + h_star(u_n) / 2 with per-step
/// residual recording and divergence detection (more than 3 consecutive
/// residual increases).
PdiReport solve_pdi(const GelfandGrid& grid, const Vector& u0,
                    const PdiOptions& opts);

struct RhsParams {
  double l_f = -1.0;
  std::optional<double> R;  // per-name default when unset: bsp1 10, bsp2 5
};

/// name "bsp1": g(s) = (-(4/9) |s|^2/(1+|s|^2) + l_f) s + Ball(0, R),
///   with L_f = 1/2 - l_f (defaults l_f = -1, R = 10).
/// name "bsp2": g(x,s) = (-s1 s2 + 1 - s1 + x, -s1 s2 + 1 - s2 + x)
///   + Ball(0, R), default R = 5; l_f = -1 is a heuristic (the linear part)
///   and no global L_f is declared.
PointwiseMap builtin_rhs(const std::string& name, const RhsParams& params = {});

/// Built-in initial data: bsp1 uses (sin(2 pi x)/2, sin(16 pi x)/2); bsp2 uses
/// Gaussian bumps x(1-x) exp(-(x-c)^2/w).
Vector builtin_initial_data(const GelfandGrid& grid, const std::string& name);

}  // namespace rosl
