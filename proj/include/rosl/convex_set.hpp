#pragma once

#include <memory>
#include <vector>

#include "rosl/gram_space.hpp"

namespace rosl {

class ConvexSet;
using ConvexSetPtr = std::shared_ptr<const ConvexSet>;

struct ProjectionResult {
  Vector point;
  double distance = 0.0;
};

struct ProjectOptions {
  double tol = 1e-10;
  int max_iters = 100000;
};

/// A nonempty closed bounded convex set, exposed through support values,
/// support points and metric projections. The pairing used throughout is
/// <v, y> = v' * gram * y of the query space.
class ConvexSet {
 public:
  virtual ~ConvexSet() = default;

  virtual int dim() const = 0;

  /// sup_{y in set} <v, y>.
  virtual double support(const Vector& v, const GramSpace& space) const = 0;

  /// A maximizer of <v, .> over the set. Tie-breaks: Ball with v = 0 gives
  /// the center, Hull ties the lowest vertex index, Box ties the lower bound.
  virtual Vector support_point(const Vector& v,
                               const GramSpace& space) const = 0;

  /// Nearest point in the metric of `space`.
  virtual Vector project(const Vector& x, const GramSpace& space,
                         const ProjectOptions& opts) const = 0;
};

class Point final : public ConvexSet {
 public:
  explicit Point(Vector p);
  int dim() const override;
  double support(const Vector& v, const GramSpace& space) const override;
  Vector support_point(const Vector& v, const GramSpace& space) const override;
  Vector project(const Vector& x, const GramSpace& space,
                 const ProjectOptions& opts) const override;
  const Vector& value() const { return p_; }

 private:
  Vector p_;
};

/// Ball relative to an explicit metric. Querying it in a different metric is
/// an error, not a silent reinterpretation.
class Ball final : public ConvexSet {
 public:
  Ball(Vector center, double radius, GramSpace metric);
  int dim() const override;
  double support(const Vector& v, const GramSpace& space) const override;
  Vector support_point(const Vector& v, const GramSpace& space) const override;
  Vector project(const Vector& x, const GramSpace& space,
                 const ProjectOptions& opts) const override;
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  const GramSpace& metric() const { return metric_; }

 private:
  Vector center_;
  double radius_;
  GramSpace metric_;
};

class Box final : public ConvexSet {
 public:
  Box(Vector lower, Vector upper);
  int dim() const override;
  double support(const Vector& v, const GramSpace& space) const override;
  Vector support_point(const Vector& v, const GramSpace& space) const override;
  Vector project(const Vector& x, const GramSpace& space,
                 const ProjectOptions& opts) const override;
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  std::vector<Vector> vertices() const;

 private:
  Vector lower_, upper_;
};

class Hull final : public ConvexSet {
 public:
  explicit Hull(std::vector<Vector> vertices);
  int dim() const override;
  double support(const Vector& v, const GramSpace& space) const override;
  Vector support_point(const Vector& v, const GramSpace& space) const override;
  Vector project(const Vector& x, const GramSpace& space,
                 const ProjectOptions& opts) const override;
  const std::vector<Vector>& vertex_list() const { return vertices_; }

 private:
  std::vector<Vector> vertices_;
};

class MinkowskiSum final : public ConvexSet {
 public:
  MinkowskiSum(ConvexSetPtr left, ConvexSetPtr right);
  int dim() const override;
  double support(const Vector& v, const GramSpace& space) const override;
  Vector support_point(const Vector& v, const GramSpace& space) const override;
  Vector project(const Vector& x, const GramSpace& space,
                 const ProjectOptions& opts) const override;
  const ConvexSetPtr& left() const { return left_; }
  const ConvexSetPtr& right() const { return right_; }

 private:
  ConvexSetPtr left_, right_;
};

ConvexSetPtr make_point(Vector p);
ConvexSetPtr make_ball(Vector center, double radius, GramSpace metric);
ConvexSetPtr make_box(Vector lower, Vector upper);
ConvexSetPtr make_hull(std::vector<Vector> vertices);
ConvexSetPtr make_minkowski_sum(ConvexSetPtr left, ConvexSetPtr right);

double support(const ConvexSet& set, const Vector& v, const GramSpace& space);
Vector support_point(const ConvexSet& set, const Vector& v,
                     const GramSpace& space);
ProjectionResult project(const ConvexSet& set, const Vector& x,
                         const GramSpace& space,
                         const ProjectOptions& opts = {});

/// Collapses Minkowski sums structurally where a closed form exists
/// (point shifts, ball+ball in the same metric, hull+hull, box+box).
ConvexSetPtr simplify(const ConvexSetPtr& set);

/// Translate by t (structural: shifts centers/vertices/bounds).
ConvexSetPtr translate(const ConvexSetPtr& set, const Vector& t);

/// Projection through the unconstrained dual problem: minimizes
/// 1/2 ||h||^2 + sigma(-h, set - x) by accelerated proximal gradient with a
/// Moreau-decomposition prox, then returns x + h*. An independent route to
/// the same point as project(); used to cross-check the two formulations.
ProjectionResult project_dual(const ConvexSet& set, const Vector& x,
                              const GramSpace& space,
                              const ProjectOptions& opts = {});

/// Prox of z |-> t * sigma(z, set) in the metric of `space`, computed via
/// the Moreau decomposition z = prox(z) + t * Proj(z / t, set).
Vector prox_support(const ConvexSet& set, const Vector& z,
                    const GramSpace& space, double t = 1.0,
                    const ProjectOptions& opts = {});

/// Lower estimate of the one-sided excess e(A, B) = sup_{a in A} dist(a, B)
/// via support differences over ndirs unit directions. The direction sample
/// is deterministic, seeded, and nested (more directions never remove
/// earlier ones), so the estimate is monotone nondecreasing in ndirs.
double excess_estimate(const ConvexSet& A, const ConvexSet& B,
                       const GramSpace& space, int ndirs, uint64_t seed = 0);

/// The raw Euclidean-unit direction sample used by excess_estimate:
/// low-discrepancy sphere points for dim <= 3, seeded normalized Gaussians
/// above.
std::vector<Vector> unit_directions(int dim, int n, uint64_t seed = 0);

}  // namespace rosl
