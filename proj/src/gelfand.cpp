#include "rosl/gelfand.hpp"

#include <cmath>
#include <random>

namespace rosl {

double embedding_constant(const GramSpace& Kgram, const GramSpace& Mgram) {
  if (Kgram.dim() != Mgram.dim())
    throw DimensionMismatch("embedding_constant: K and M dimension mismatch");
  const int n = Kgram.dim();
  Vector v = Vector::Ones(n);
  v /= std::sqrt(Mgram.inner(v, v));
  double lam = Kgram.inner(v, v) / Mgram.inner(v, v);
  for (int it = 0; it < 10000; ++it) {
    Vector w = Kgram.solve(Mgram.matvec(v));
    w /= std::sqrt(Mgram.inner(w, w));
    const double lam_new = Kgram.inner(w, w) / Mgram.inner(w, w);
    v = std::move(w);
    if (std::abs(lam_new - lam) <= 1e-10 * std::abs(lam_new)) {
      return 1.0 / std::sqrt(lam_new);
    }
    lam = lam_new;
  }
  throw NonConvergenceError("embedding_constant: pencil iteration did not converge",
                            lam);
}

GelfandData::GelfandData(GramSpace Kgram, GramSpace Mgram, double lV, double lH)
    : V_(std::move(Kgram)),
      H_(std::move(Mgram)),
      W_([&] {
        if (lV >= 0.0) throw PreconditionError("GelfandData: requires lV < 0");
        if (V_.dim() != H_.dim())
          throw DimensionMismatch("GelfandData: K and M dimension mismatch");
        return GramSpace(Eigen::SparseMatrix<double>(-lV * V_.gram() -
                                                     lH * H_.gram()));
      }()),
      lV_(lV),
      lH_(lH),
      cVH_(embedding_constant(V_, H_)) {
  if (!(lH_ < -lV_ / (cVH_ * cVH_)))
    throw PreconditionError(
        "GelfandData: constraint lH < -lV/cVH^2 violated (lH = " +
        std::to_string(lH_) + ", bound = " +
        std::to_string(-lV_ / (cVH_ * cVH_)) + ")");
}

CompositeConstants composite_constants(double lV, double lH, double Lf,
                                       double cVH) {
  if (lV != -1.0)
    throw PreconditionError(
        "composite_constants: the case formulas are derived for lV = -1; "
        "rescale the problem instead of passing another lV");
  const double c2 = cVH * cVH;
  if (!(lH < 1.0 / c2))
    throw PreconditionError("composite_constants: lH must satisfy lH < 1/cVH^2");
  if (Lf < 0.0) throw PreconditionError("composite_constants: Lf must be >= 0");
  CompositeConstants out;
  out.l = -1.0;
  if (lH <= 0.0)
    out.L = 1.0 + c2 * Lf / (1.0 - c2 * lH);
  else
    out.L = (1.0 + c2 * Lf) / (1.0 - c2 * lH);
  out.kappa = out.L / 2.0;
  out.admissible = out.kappa < 1.0;
  return out;
}

NormEquivalenceReport check_norm_equivalence(const GelfandData& data,
                                             int samples, uint64_t seed) {
  if (samples < 1)
    throw PreconditionError("check_norm_equivalence: samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = data.V().dim();
  const double lV = data.lV(), lH = data.lH();
  const double c2 = data.cVH() * data.cVH();

  NormEquivalenceReport rep;
  rep.worst_primal_slack = std::numeric_limits<double>::infinity();
  rep.worst_dual_slack = std::numeric_limits<double>::infinity();

  auto record = [](double& worst, double slack) { worst = std::min(worst, slack); };

  for (int s = 0; s < samples; ++s) {
    Vector u(n), phi(n);
    for (int i = 0; i < n; ++i) {
      u[i] = gauss(rng);
      phi[i] = gauss(rng);
    }

    // primal chain on ||u||_W^2
    const double uV2 = data.V().inner(u, u);
    const double uW2 = data.W().inner(u, u);
    if (lH <= 0.0) {
      record(rep.worst_primal_slack, (uW2 + lV * uV2) / uW2);
      record(rep.worst_primal_slack, (-(lV + c2 * lH) * uV2 - uW2) / uW2);
    } else {
      record(rep.worst_primal_slack, (uW2 + (lV + c2 * lH) * uV2) / uW2);
      record(rep.worst_primal_slack, (-lV * uV2 - uW2) / uW2);
    }

    // dual chain on ||phi||_{W*}^2
    const double dV2 = std::pow(dual_norm(data.V(), phi), 2);
    const double dW2 = std::pow(dual_norm(data.W(), phi), 2);
    if (lH <= 0.0) {
      record(rep.worst_dual_slack, (dW2 + dV2 / (lV + c2 * lH)) / dW2);
      record(rep.worst_dual_slack, (-dV2 / lV - dW2) / dW2);
    } else {
      record(rep.worst_dual_slack, (dW2 + dV2 / lV) / dW2);
      record(rep.worst_dual_slack, (-dV2 / (lV + c2 * lH) - dW2) / dW2);
    }
  }
  rep.ok = rep.worst_primal_slack >= -1e-9 && rep.worst_dual_slack >= -1e-9;
  return rep;
}

}  // namespace rosl
