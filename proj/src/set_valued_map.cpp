#include "rosl/set_valued_map.hpp"

#include <cmath>
#include <random>

#include "rosl/solver.hpp"

namespace rosl {

SamplePlan SamplePlan::uniform_box(const Vector& lower, const Vector& upper,
                                   int count, uint64_t seed) {
  if (lower.size() != upper.size())
    throw DimensionMismatch("SamplePlan: bound length mismatch");
  if (count < 1) throw PreconditionError("SamplePlan: count must be >= 1");
  SamplePlan plan;
  plan.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int d = static_cast<int>(lower.size());
  auto draw = [&]() {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = lower[i] + (upper[i] - lower[i]) * unif(rng);
    return v;
  };
  plan.pairs.reserve(count);
  while (static_cast<int>(plan.pairs.size()) < count) {
    Vector x = draw(), xp = draw();
    if ((x - xp).norm() == 0.0) continue;
    plan.pairs.emplace_back(std::move(x), std::move(xp));
  }
  return plan;
}

double rosl_estimate(const SetValuedMap& map, const SamplePlan& plan) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [x, xp] : plan.pairs) {
    const ConvexSetPtr Fx = map.eval(x);
    const ConvexSetPtr Fxp = map.eval(xp);
    const Vector d = x - xp;
    const double dd = map.domain.inner(d, d);
    if (dd == 0.0) throw PreconditionError("rosl_estimate: pair with x == x'");
    const double sx = Fx->support(d, map.codomain);
    const double sxp = Fxp->support(d, map.codomain);
    best = std::max(best, (sx - sxp) / dd);
    // reversed orientation of the same pair
    const double rx = Fx->support(-d, map.codomain);
    const double rxp = Fxp->support(-d, map.codomain);
    best = std::max(best, (rxp - rx) / dd);
  }
  return best;
}

double lipschitz_estimate(const SetValuedMap& map, const SamplePlan& plan,
                          int ndirs) {
  double best = 0.0;
  for (const auto& [x, xp] : plan.pairs) {
    const ConvexSetPtr Fx = map.eval(x);
    const ConvexSetPtr Fxp = map.eval(xp);
    const double dn = map.domain.norm(x - xp);
    const double e1 = excess_estimate(*Fx, *Fxp, map.codomain, ndirs, plan.seed);
    const double e2 = excess_estimate(*Fxp, *Fx, map.codomain, ndirs, plan.seed);
    best = std::max(best, std::max(e1, e2) / dn);
  }
  return best;
}

InverseReport verify_inverse_properties(const SetValuedMap& map,
                                        const Vector& y, const Vector& y2,
                                        const SolveOptions& solver_opts) {
  if (!map.declared_l || *map.declared_l >= 0.0)
    throw PreconditionError("verify_inverse_properties: requires declared l < 0");
  const double l = *map.declared_l;

  const Vector zero = Vector::Zero(map.domain.dim());
  const SolveReport rx = solve(map, y, zero, solver_opts);
  const SolveReport rx2 = solve(map, y2, rx.solution, solver_opts);

  InverseReport rep;
  rep.x = rx.solution;
  rep.x2 = rx2.solution;
  const double dy = map.codomain.norm(y2 - y);
  rep.lipschitz_ratio =
      dy > 0.0 ? map.domain.norm(rep.x2 - rep.x) / dy : 0.0;

  // ||F(0)|| as the sampled support maximum over unit directions.
  const ConvexSetPtr F0 = map.eval(zero);
  const Point origin(zero);
  const double f0_norm = excess_estimate(*F0, origin, map.codomain, 256);
  rep.norm_bound = -(f0_norm + map.codomain.norm(y)) / l;
  rep.norm_bound_slack = rep.norm_bound - map.domain.norm(rep.x);
  rep.rosl_residual = map.domain.inner(y2 - y, rep.x2 - rep.x);
  return rep;
}

}  // namespace rosl
