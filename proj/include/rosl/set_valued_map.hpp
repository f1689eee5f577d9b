#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rosl/convex_set.hpp"

namespace rosl {

/// An oracle x -> F(x) with (optionally) declared relaxed one-sided
/// Lipschitz and Lipschitz constants. eval must be pure: the same x always
/// yields the same set.
struct SetValuedMap {
  GramSpace domain;
  GramSpace codomain;
  std::function<ConvexSetPtr(const Vector&)> eval;
  std::optional<double> declared_l;
  std::optional<double> declared_L;
};

/// A reproducible list of sample pairs (x, x'); regeneration from the same
/// seed is bit-identical.
struct SamplePlan {
  std::vector<std::pair<Vector, Vector>> pairs;
  uint64_t seed = 0;

  size_t count() const { return pairs.size(); }

  /// count pairs drawn uniformly from the box [lower, upper].
  static SamplePlan uniform_box(const Vector& lower, const Vector& upper,
                                int count, uint64_t seed);
};

/// Sampled lower bound for the smallest valid ROSL constant, via the
/// support-function reduction: along d = x - x' the ROSL condition for all
/// y in F(x) is sigma(d, F(x)) - sigma(d, F(x')) <= l ||d||^2.
/// Both orientations of every pair are evaluated. Monotone under sample
/// refinement; exact in the dense-sampling limit.
double rosl_estimate(const SetValuedMap& map, const SamplePlan& plan);

/// Sampled lower bound for the smallest Lipschitz constant w.r.t. the
/// one-sided excess, symmetrized over both directions.
double lipschitz_estimate(const SetValuedMap& map, const SamplePlan& plan,
                          int ndirs);

struct SolveOptions;  // solver.hpp

struct InverseReport {
  Vector x;                  // solved member of F^{-1}(y)
  Vector x2;                 // member of F^{-1}(y2) started from x
  double lipschitz_ratio;    // ||x2 - x|| / ||y2 - y||, expected <= -1/l
  double norm_bound;         // -(1/l) * (||F(0)|| + ||y||)
  double norm_bound_slack;   // norm_bound - ||x||, expected >= -tol
  double rosl_residual;      // (y2 - y, x2 - x), expected <= tol*||y2-y||^2
};

/// Exercises the inverse of an l-ROSL map (l < 0): Lipschitz ratio of
/// F^{-1}, the norm bound ||F^{-1}(y)|| <= -(1/l)(||F(0)|| + ||y||), and the
/// 0-ROSL residual of the inverse. Uses solve() to produce the points.
InverseReport verify_inverse_properties(const SetValuedMap& map,
                                        const Vector& y, const Vector& y2,
                                        const SolveOptions& solver_opts);

}  // namespace rosl
