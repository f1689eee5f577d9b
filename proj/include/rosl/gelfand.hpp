#pragma once

#include "rosl/gram_space.hpp"

namespace rosl {

/// Mixed-norm construction over a (V, H) Gram pair:
///   (x1, x2)_W = -lV (x1, x2)_V - lH (x1, x2)_H,
/// an inner product on V whenever lV < 0 and lH < -lV / cVH^2, where cVH is
/// the embedding constant ||u||_H <= cVH ||u||_V of the discrete pair.
class GelfandData {
 public:
  GelfandData(GramSpace Kgram, GramSpace Mgram, double lV, double lH);

  const GramSpace& V() const { return V_; }
  const GramSpace& H() const { return H_; }
  const GramSpace& W() const { return W_; }
  double lV() const { return lV_; }
  double lH() const { return lH_; }
  double cVH() const { return cVH_; }

 private:
  GramSpace V_, H_, W_;
  double lV_, lH_, cVH_;
};

/// cVH = 1/sqrt(lambda_min(K, M)), the discrete embedding constant, by
/// inverse power iteration on the pencil to relative 1e-10.
double embedding_constant(const GramSpace& Kgram, const GramSpace& Mgram);

struct CompositeConstants {
  double l = -1.0;
  double L = 0.0;
  double kappa = 0.0;
  bool admissible = false;
};

/// ROSL/Lipschitz constants of the composed operator F_V + F_H in the
/// W-norm, for the Laplacian normalization lV = -1 (other lV rejected):
///   lH <= 0:             L = 1 + cVH^2 Lf / (1 - cVH^2 lH)
///   lH in [0, 1/cVH^2):  L = (1 + cVH^2 Lf) / (1 - cVH^2 lH)
/// with l = -1 and kappa = L/2; admissible iff kappa < 1.
CompositeConstants composite_constants(double lV, double lH, double Lf,
                                       double cVH);

struct NormEquivalenceReport {
  double worst_primal_slack = 0.0;  // most negative slack of the ||.||_W chain
  double worst_dual_slack = 0.0;    // most negative slack of the ||.||_W* chain
  bool ok = false;
};

/// Evaluates both norm-equivalence chains (primal on vectors, dual on
/// functionals) on seeded random samples; ok iff no inequality is violated
/// beyond 1e-9 relative.
NormEquivalenceReport check_norm_equivalence(const GelfandData& data,
                                             int samples, uint64_t seed);

}  // namespace rosl
