#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "rosl/solver.hpp"

using rosl::GramSpace;
using rosl::SetValuedMap;
using rosl::SolveOptions;
using rosl::SolveReport;
using rosl::Vector;

namespace {

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

SetValuedMap negation_map_1d() {
  // F(x) = {-x}: l = -1, L = 1, kappa = 1/2
  return {GramSpace::euclidean(1), GramSpace::euclidean(1),
          [](const Vector& x) { return rosl::make_point(-x); }, -1.0, 1.0};
}

SetValuedMap negated_ball_map_1d(double radius) {
  // F(x) = -x + Ball(0, radius): F^{-1}(y) = -y + [-radius, radius]
  const GramSpace metric = GramSpace::euclidean(1);
  return {metric, metric,
          [metric, radius](const Vector& x) {
            return rosl::make_ball(Vector(-x), radius, metric);
          },
          -1.0, 1.0};
}

}  // namespace

TEST_CASE("iterates of F(x) = {-x} halve exactly") {
  SolveOptions opts;
  opts.record_iterates = true;
  opts.tol_residual = 1e-12;
  const SolveReport rep = rosl::solve(negation_map_1d(), vec1(0.0), vec1(1.0), opts);

  CHECK(rep.kappa == doctest::Approx(0.5));
  REQUIRE(rep.iterates.has_value());
  double expect = 1.0;
  for (size_t n = 0; n < rep.iterates->size() && n < 10; ++n) {
    CHECK((*rep.iterates)[n][0] == doctest::Approx(expect).epsilon(1e-14));
    expect *= 0.5;
  }
  // residual at step n is |0 - (-x_n)| = x_n: halves exactly as well
  for (size_t n = 0; n + 1 < rep.residuals.size(); ++n)
    CHECK(rep.residuals[n + 1] == doctest::Approx(0.5 * rep.residuals[n]).epsilon(1e-12));
  CHECK(rep.converged);
}

TEST_CASE("starting at the solution converges at n = 0") {
  const SolveReport rep =
      rosl::solve(negation_map_1d(), vec1(0.0), vec1(0.0), SolveOptions{});
  CHECK(rep.converged);
  CHECK(rep.residuals.size() == 1);
  CHECK(rep.residuals[0] == 0.0);
  CHECK(rep.solution[0] == 0.0);
}

TEST_CASE("ball-perturbed map finishes in one damped step") {
  // F(20) = [-30, -10], Proj(0, .) = -10, v_0 = 10,
  // x_1 = x_0 + v_0/(2l) = 20 + 10/(-2) = 15, and the residuals contract
  // toward the boundary of F^{-1}(0) = [-10, 10].
  SolveOptions opts;
  opts.tol_residual = 1e-12;
  opts.record_iterates = true;
  const SolveReport rep =
      rosl::solve(negated_ball_map_1d(10.0), vec1(0.0), vec1(20.0), opts);
  CHECK(rep.residuals[0] == doctest::Approx(10.0));
  REQUIRE(rep.iterates->size() >= 2);
  CHECK((*rep.iterates)[1][0] == doctest::Approx(15.0));
  CHECK(rep.converged);
  // the limit lies in F^{-1}(0) = [-10, 10]
  CHECK(rep.solution[0] <= 10.0 + 1e-9);
  CHECK(rep.solution[0] >= -10.0 - 1e-9);
}

TEST_CASE("immediate convergence when x0 already solves the inclusion") {
  // x0 = 5 has 0 in F(5) = [-15, 5]: residual 0 at n = 0
  const SolveReport rep =
      rosl::solve(negated_ball_map_1d(10.0), vec1(0.0), vec1(5.0), SolveOptions{});
  CHECK(rep.converged);
  CHECK(rep.residuals[0] == 0.0);
}

TEST_CASE("localization ball formulas") {
  const GramSpace id1 = GramSpace::euclidean(1);
  const auto ball = rosl::localization_ball(vec1(0.0), vec1(1.0), vec1(0.0), -1.0, id1);
  CHECK(ball.center[0] == doctest::Approx(0.5));
  CHECK(ball.radius == doctest::Approx(0.5));

  const auto degenerate =
      rosl::localization_ball(vec1(3.0), vec1(2.0), vec1(2.0), -1.0, id1);
  CHECK(degenerate.center[0] == doctest::Approx(3.0));
  CHECK(degenerate.radius == 0.0);

  const GramSpace id2 = GramSpace::euclidean(2);
  Vector xt = Vector::Zero(2), yt(2), yb = Vector::Zero(2);
  yt << 2, 0;
  const auto b2 = rosl::localization_ball(xt, yt, yb, -2.0, id2);
  CHECK(b2.center[0] == doctest::Approx(0.5));
  CHECK(b2.center[1] == doctest::Approx(0.0));
  CHECK(b2.radius == doctest::Approx(0.5));

  CHECK_THROWS_AS(rosl::localization_ball(xt, yt, yb, 0.5, id2),
                  rosl::PreconditionError);
}

TEST_CASE("a-priori bound formulas") {
  // no injected errors: dist_point at n=0 equals -v0/(2l+L) = 1
  const auto b0 = rosl::apriori_bounds(1.0, -1.0, 1.0, {}, 0);
  CHECK(b0.dist_point_bound == doctest::Approx(1.0));
  CHECK(b0.eta_n == 0.0);

  // eta is zero at every n without errors
  for (int n : {0, 1, 5}) CHECK(rosl::apriori_bounds(2.0, -1.0, 1.0, {}, n).eta_n == 0.0);

  // kappa = 1/2, xi_0 = 1 only: eta_2 = kappa^2 * 1 = 1/4
  const auto b2 = rosl::apriori_bounds(1.0, -1.0, 1.0, {1.0}, 2);
  CHECK(b2.eta_n == doctest::Approx(0.25));

  // dist_set at n >= 1: -kappa^{n-1}/(2l) v0 + eta_{n-1}
  const auto b1 = rosl::apriori_bounds(4.0, -1.0, 1.0, {}, 3);
  CHECK(b1.dist_set_bound == doctest::Approx(0.25 * 0.5 * 4.0));

  CHECK_THROWS_AS(rosl::apriori_bounds(1.0, -1.0, 3.0, {}, 0),
                  rosl::PreconditionError);  // kappa = 3/2 >= 1
  CHECK_THROWS_AS(rosl::apriori_bounds(1.0, -1.0, 1.0, {}, -1),
                  rosl::PreconditionError);
}

TEST_CASE("solution_distance_lower_bound bookkeeping") {
  CHECK(rosl::solution_distance_lower_bound(2.0, 4.0) == doctest::Approx(2.0));
  CHECK(rosl::solution_distance_lower_bound(5.0, 0.0) == 0.0);
  CHECK_THROWS_AS(rosl::solution_distance_lower_bound(-1.0, 1.0),
                  rosl::PreconditionError);
}

TEST_CASE("contraction invariant on random ball-perturbed linear maps") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.5, 2.5);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 1 + trial % 3;
    Eigen::MatrixXd Q(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) Q(i, j) = gauss(rng);
    const Eigen::MatrixXd orth =
        Eigen::HouseholderQR<Eigen::MatrixXd>(Q).householderQ();
    Eigen::VectorXd evals(dim);
    for (int i = 0; i < dim; ++i) evals[i] = -unif(rng);
    const Eigen::MatrixXd A = orth * evals.asDiagonal() * orth.transpose();
    const double l = evals.maxCoeff();      // least negative eigenvalue
    const double L = -evals.minCoeff();     // spectral norm
    if (-L / (2.0 * l) >= 1.0) continue;

    const GramSpace metric = GramSpace::euclidean(dim);
    const double radius = unif(rng);
    SetValuedMap map{metric, metric,
                     [A, metric, radius](const Vector& x) {
                       return rosl::make_ball(Vector(A * x), radius, metric);
                     },
                     l, L};
    Vector ybar(dim), x0(dim);
    for (int i = 0; i < dim; ++i) {
      ybar[i] = gauss(rng);
      x0[i] = 3.0 * gauss(rng);
    }
    SolveOptions opts;
    opts.tol_residual = 1e-11;
    const SolveReport rep = rosl::solve(map, ybar, x0, opts);
    for (size_t n = 0; n + 1 < rep.residuals.size(); ++n)
      CHECK(rep.residuals[n + 1] <=
            rep.kappa * rep.residuals[n] + 1e-8 * (1.0 + rep.residuals[n]));

    // first-step localization and certificate containment
    if (rep.converged) {
      const double v0 = rep.residuals[0];
      CHECK(metric.norm(x0 - rep.solution) <= -v0 / (2.0 * l + L) + 1e-7);
      CHECK(metric.norm(rep.solution - rep.localization.center) <=
            rep.localization.radius + 1e-7);
    }
  }
}

TEST_CASE("monotone decay of the dist-set bound sequence") {
  SolveOptions opts;
  opts.tol_residual = 1e-12;
  const SolveReport rep =
      rosl::solve(negation_map_1d(), vec1(0.0), vec1(8.0), opts);
  REQUIRE(rep.dist_set_bounds.size() >= 3);
  for (size_t n = 0; n + 1 < rep.dist_set_bounds.size(); ++n)
    CHECK(rep.dist_set_bounds[n + 1] ==
          doctest::Approx(rep.kappa * rep.dist_set_bounds[n]).epsilon(1e-12));
}

TEST_CASE("error injection stays within the dist-set bound") {
  // F(x) = -x + Ball(0, 1): F^{-1}(0) = [-1, 1] in closed form.
  const SetValuedMap map = negated_ball_map_1d(1.0);
  for (double eps : {1e-3, 1e-1}) {
    SolveOptions opts;
    opts.record_iterates = true;
    opts.tol_residual = 0.0;  // run the full schedule
    opts.max_iters = 25;
    for (int n = 0; n < 25; ++n) opts.xi_schedule.push_back(vec1(eps * std::pow(2.0, -n)));

    const SolveReport rep = rosl::solve(map, vec1(0.0), vec1(5.0), opts);
    REQUIRE(rep.iterates.has_value());
    std::vector<double> xi_norms;
    for (const auto& xi : opts.xi_schedule) xi_norms.push_back(std::abs(xi[0]));
    for (size_t n = 1; n < rep.iterates->size(); ++n) {
      const double x = (*rep.iterates)[n][0];
      const double dist = std::max({x - 1.0, -1.0 - x, 0.0});
      const auto bounds = rosl::apriori_bounds(rep.residuals[0], rep.l, rep.L,
                                               xi_norms, static_cast<int>(n));
      CHECK(dist <= bounds.dist_set_bound + 1e-8);
    }
  }
}

TEST_CASE("eta values in the report match the convolution formula") {
  SolveOptions opts;
  opts.xi_schedule = {vec1(1.0), vec1(0.5)};
  opts.tol_residual = 0.0;
  opts.max_iters = 4;
  const SolveReport rep = rosl::solve(negation_map_1d(), vec1(0.0), vec1(1.0), opts);
  // kappa = 1/2: eta_0 = 1, eta_1 = 0.5 + 0.5 = 1, eta_2 = 0.25 + 0.25 = 0.5
  REQUIRE(rep.eta.size() >= 3);
  CHECK(rep.eta[0] == doctest::Approx(1.0));
  CHECK(rep.eta[1] == doctest::Approx(1.0));
  CHECK(rep.eta[2] == doctest::Approx(0.5));
}

TEST_CASE("solver refuses inadmissible or underspecified maps") {
  SetValuedMap map = negation_map_1d();
  map.declared_L.reset();
  CHECK_THROWS_AS(rosl::solve(map, vec1(0.0), vec1(1.0), SolveOptions{}),
                  rosl::PreconditionError);

  SetValuedMap no_l = negation_map_1d();
  no_l.declared_l.reset();
  CHECK_THROWS_AS(rosl::solve(no_l, vec1(0.0), vec1(1.0), SolveOptions{}),
                  rosl::PreconditionError);

  SetValuedMap bad_kappa = negation_map_1d();
  bad_kappa.declared_L = 3.0;  // kappa = 3/2
  CHECK_THROWS_AS(rosl::solve(bad_kappa, vec1(0.0), vec1(1.0), SolveOptions{}),
                  rosl::PreconditionError);
}
