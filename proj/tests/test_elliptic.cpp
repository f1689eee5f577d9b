#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "rosl/elliptic.hpp"

using rosl::GelfandGrid;
using rosl::GramSpace;
using rosl::PdiOptions;
using rosl::PointwiseMap;
using rosl::Vector;

namespace {

PointwiseMap singleton_map(std::function<Eigen::Vector2d(double, const Eigen::Vector2d&)> g,
                           double l_f, std::optional<double> L_f) {
  PointwiseMap f;
  f.eval = [g](double x, const Eigen::Vector2d& s) {
    const Eigen::Vector2d v = g(x, s);
    Vector p(2);
    p << v[0], v[1];
    return rosl::make_point(p);
  };
  f.l_f = l_f;
  f.L_f = L_f;
  return f;
}

PointwiseMap ball_map(double radius, double l_f) {
  PointwiseMap f;
  f.eval = [radius](double, const Eigen::Vector2d&) {
    return rosl::make_ball(Vector::Zero(2), radius,
                           GramSpace::euclidean(2));
  };
  f.l_f = l_f;
  f.L_f = 0.0;
  return f;
}

// dense W-gram of a grid for oracle solves
Eigen::MatrixXd dense_W(const GelfandGrid& grid) {
  return Eigen::MatrixXd(grid.W().gram());
}

Vector hat_interpolant(const GelfandGrid& grid,
                       const std::function<double(double)>& u1,
                       const std::function<double(double)>& u2) {
  Vector u(grid.dim());
  for (int i = 0; i < grid.nodes; ++i) {
    u[i] = u1(grid.node_x[i]);
    u[grid.nodes + i] = u2(grid.node_x[i]);
  }
  return u;
}

}  // namespace

TEST_CASE("grid assembly at N = 4 matches the hand computation") {
  const GelfandGrid grid = rosl::build_grid(4, ball_map(1.0, -1.0));
  CHECK(grid.N == 4);
  CHECK(grid.nodes == 3);
  CHECK(grid.dim() == 6);
  CHECK(grid.h == doctest::Approx(0.25));
  CHECK(grid.node_x[0] == doctest::Approx(0.25));
  CHECK(grid.node_x[2] == doctest::Approx(0.75));

  const Eigen::MatrixXd K(grid.V().gram());
  const Eigen::MatrixXd M(grid.H().gram());
  const Eigen::MatrixXd W(grid.W().gram());
  for (int c = 0; c < 2; ++c) {
    const int o = 3 * c;  // block offset per component
    for (int i = 0; i < 3; ++i) {
      CHECK(K(o + i, o + i) == doctest::Approx(8.0));
      CHECK(M(o + i, o + i) == doctest::Approx(0.25));
      if (i > 0) CHECK(K(o + i, o + i - 1) == doctest::Approx(-4.0));
    }
  }
  // no coupling between the two components
  CHECK(K.block(0, 3, 3, 3).norm() == 0.0);
  // W = K - l_f M = K + M for l_f = -1
  CHECK((W - K - M).norm() <= 1e-14 * W.norm());
}

TEST_CASE("grid assembly rejects inadmissible reaction constants") {
  CHECK_THROWS_AS(rosl::build_grid(4, ball_map(1.0, 20.0)),
                  rosl::PreconditionError);
  CHECK_THROWS_AS(rosl::build_grid(3, ball_map(1.0, -1.0)),
                  rosl::PreconditionError);
}

TEST_CASE("embedding constant of the assembled grid") {
  const GelfandGrid grid = rosl::build_grid(1024, ball_map(1.0, -1.0));
  CHECK(std::abs(grid.gelfand.cVH() - 1.0 / std::numbers::pi) <=
        1e-3 / std::numbers::pi);
}

TEST_CASE("Nemytskii support closed forms") {
  const GelfandGrid zero_grid = rosl::build_grid(8, singleton_map(
      [](double, const Eigen::Vector2d&) { return Eigen::Vector2d::Zero(); },
      0.0, 0.0));
  const Vector u = hat_interpolant(zero_grid,
      [](double x) { return x * (1 - x); },
      [](double x) { return std::sin(std::numbers::pi * x); });
  const Vector v = hat_interpolant(zero_grid,
      [](double x) { return std::cos(x); }, [](double x) { return x; });
  CHECK(rosl::nemytskii_support(zero_grid, u, v) == 0.0);

  // ball right-hand side: R * sum_i w_i ||v(x_i)||
  const double R = 2.5;
  const GelfandGrid bgrid = rosl::build_grid(8, ball_map(R, -1.0));
  double expect = 0.0;
  for (int i = 0; i < bgrid.nodes; ++i)
    expect += bgrid.h * R * bgrid.value_at(v, i).norm();
  CHECK(rosl::nemytskii_support(bgrid, u, v) ==
        doctest::Approx(expect).epsilon(1e-13));

  // singleton g(x, s) = (x, s1): discrete L2 pairing (v, g(., u))_H
  const GelfandGrid sgrid = rosl::build_grid(8, singleton_map(
      [](double x, const Eigen::Vector2d& s) {
        return Eigen::Vector2d(x, s[0]);
      },
      0.0, 1.0));
  double pair = 0.0;
  for (int i = 0; i < sgrid.nodes; ++i) {
    const Eigen::Vector2d g{sgrid.node_x[i], sgrid.value_at(u, i)[0]};
    pair += sgrid.h * sgrid.value_at(v, i).dot(g);
  }
  CHECK(rosl::nemytskii_support(sgrid, u, v) ==
        doctest::Approx(pair).epsilon(1e-13));
}

TEST_CASE("pointwise maximizers reproduce the Nemytskii support exactly") {
  const GelfandGrid grid = rosl::build_grid(16, rosl::builtin_rhs("bsp1"));
  const Vector u = rosl::builtin_initial_data(grid, "bsp1");
  const Vector v = hat_interpolant(grid,
      [](double x) { return std::sin(3 * x) - 0.4; },
      [](double x) { return x * x - 0.2; });
  const GramSpace e2 = GramSpace::euclidean(2);
  double sum = 0.0;
  for (int i = 0; i < grid.nodes; ++i) {
    const auto set = grid.rhs.eval(grid.node_x[i], grid.value_at(u, i));
    const Vector vi = grid.value_at(v, i);
    const Vector maximizer = set->support_point(vi, e2);
    sum += grid.h * vi.dot(maximizer);
  }
  CHECK(rosl::nemytskii_support(grid, u, v) ==
        doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("dual functional: closed forms and the linear-solve oracle") {
  const GelfandGrid grid = rosl::build_grid(8, singleton_map(
      [](double x, const Eigen::Vector2d& s) {
        return Eigen::Vector2d(std::sin(x) - s[0], x - 0.5 * s[1]);
      },
      -0.5, 1.0));
  const Vector u = hat_interpolant(grid,
      [](double x) { return x * (1 - x); },
      [](double x) { return std::sin(2 * std::numbers::pi * x); });

  CHECK(rosl::dual_functional(grid, u, Vector::Zero(grid.dim())) == 0.0);

  // singleton f: I(h) = 1/2 h'Wh + h'Ku - h'Mg, minimized by Wh = -Ku + Mg
  Vector g(grid.dim());
  for (int i = 0; i < grid.nodes; ++i) {
    const Eigen::Vector2d gi = Eigen::Vector2d(
        std::sin(grid.node_x[i]) - grid.value_at(u, i)[0],
        grid.node_x[i] - 0.5 * grid.value_at(u, i)[1]);
    g[i] = gi[0];
    g[grid.nodes + i] = gi[1];
  }
  const Eigen::MatrixXd W = dense_W(grid);
  const Vector rhs_vec = Vector(-grid.V().matvec(u) + grid.H().matvec(g));
  const Vector h_star = W.ldlt().solve(rhs_vec);
  const double r2 = h_star.dot(W * h_star);
  CHECK(rosl::dual_functional(grid, u, h_star) ==
        doctest::Approx(-0.5 * r2).epsilon(1e-10));

  // quadratic expansion around the minimizer
  const Vector probe = h_star + 0.1 * Vector::Ones(grid.dim());
  CHECK(rosl::dual_functional(grid, u, probe) >=
        rosl::dual_functional(grid, u, h_star) - 1e-12);
}

TEST_CASE("dual functional with u = 0 and a ball right-hand side") {
  const GelfandGrid grid = rosl::build_grid(8, ball_map(3.0, -1.0));
  const Vector zero = Vector::Zero(grid.dim());
  // I(h) = 1/2 ||h||_W^2 + R sum w_i ||h_i|| >= 0 with minimum at h = 0
  for (uint64_t s = 0; s < 5; ++s) {
    Vector h(grid.dim());
    std::mt19937_64 rng(s);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < grid.dim(); ++i) h[i] = gauss(rng);
    CHECK(rosl::dual_functional(grid, zero, h) >= 0.0);
  }
  CHECK(rosl::dual_functional(grid, zero, zero) == 0.0);
  const auto step = rosl::projection_step(grid, zero, PdiOptions{});
  CHECK(step.residual <= 1e-9);
}

TEST_CASE("projection step matches the singleton linear-solve oracle") {
  const GelfandGrid grid = rosl::build_grid(32, singleton_map(
      [](double x, const Eigen::Vector2d& s) {
        return Eigen::Vector2d(1.0 - s[0], x * x - s[1]);
      },
      -1.0, 1.0));
  const Vector u = hat_interpolant(grid,
      [](double x) { return std::sin(std::numbers::pi * x); },
      [](double x) { return x * (1 - x) * (1 + x); });

  Vector g(grid.dim());
  for (int i = 0; i < grid.nodes; ++i) {
    g[i] = 1.0 - grid.value_at(u, i)[0];
    g[grid.nodes + i] = grid.node_x[i] * grid.node_x[i] - grid.value_at(u, i)[1];
  }
  const Eigen::MatrixXd W = dense_W(grid);
  const Vector oracle =
      W.ldlt().solve(Vector(-grid.V().matvec(u) + grid.H().matvec(g)));

  PdiOptions opts;
  opts.inner_tol = 1e-11;
  const auto step = rosl::projection_step(grid, u, opts);
  CHECK(grid.W().norm(step.h_star - oracle) <=
        1e-8 * (1.0 + grid.W().norm(oracle)));
  CHECK(step.residual ==
        doctest::Approx(grid.W().norm(oracle)).epsilon(1e-8));
  // duality identity I(h*) = -residual^2 / 2
  CHECK(std::abs(step.dual_value + 0.5 * step.residual * step.residual) <=
        10 * opts.inner_tol * (1.0 + step.residual * step.residual));
}

TEST_CASE("projection step duality identity on bsp1 data") {
  const GelfandGrid grid = rosl::build_grid(64, rosl::builtin_rhs("bsp1"));
  const Vector u0 = rosl::builtin_initial_data(grid, "bsp1");
  PdiOptions opts;
  opts.inner_tol = 1e-9;
  const auto step = rosl::projection_step(grid, u0, opts);
  CHECK(std::abs(step.dual_value + 0.5 * step.residual * step.residual) <=
        10 * opts.inner_tol * (1.0 + step.residual * step.residual));
  CHECK(step.inner_iters <= opts.inner_max_iters);
  CHECK(step.residual > 0.0);
}

TEST_CASE("outer iteration contracts the exactly-solvable singleton map") {
  // f(x, s) = {-s}: I(h) = 1/2 h'Wh + h'Wu, so h* = -u exactly and every
  // outer step halves the iterate; the unique solution is u = 0.
  const GelfandGrid grid = rosl::build_grid(16, singleton_map(
      [](double, const Eigen::Vector2d& s) { return Eigen::Vector2d(-s); },
      -1.0, 1.0));
  const Vector u0 = hat_interpolant(grid,
      [](double x) { return std::sin(std::numbers::pi * x); },
      [](double x) { return x * (1 - x); });

  PdiOptions opts;
  opts.inner_tol = 1e-12;
  const auto step = rosl::projection_step(grid, u0, opts);
  CHECK(grid.W().norm(step.h_star + u0) <= 1e-9 * grid.W().norm(u0));

  opts.outer_tol = 1e-8;
  opts.record_iterates = true;
  const auto rep = rosl::solve_pdi(grid, u0, opts);
  CHECK(rep.converged);
  CHECK(rep.kappa_certified);
  CHECK(grid.W().norm(rep.solution) <= 1e-7);
  for (size_t n = 0; n + 1 < rep.residuals.size(); ++n)
    CHECK(rep.residuals[n + 1] ==
          doctest::Approx(0.5 * rep.residuals[n]).epsilon(1e-6));
}

TEST_CASE("bsp1 short run: certified kappa, decay, and report plumbing") {
  const GelfandGrid grid = rosl::build_grid(128, rosl::builtin_rhs("bsp1"));
  const Vector u0 = rosl::builtin_initial_data(grid, "bsp1");
  PdiOptions opts;
  opts.max_steps = 5;
  opts.outer_tol = 1e-12;  // force the full five steps
  opts.record_iterates = true;
  const auto rep = rosl::solve_pdi(grid, u0, opts);

  CHECK(rep.kappa_certified);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  // certified factor approaches 1/2 + 3/(4(pi^2+1)) as the grid refines
  CHECK(rep.kappa == doctest::Approx(0.5 + 3.0 / (4.0 * (pi2 + 1.0))).epsilon(2e-3));

  REQUIRE(rep.residuals.size() == 6);
  for (size_t n = 0; n + 1 < rep.residuals.size(); ++n) {
    const double ratio = rep.residuals[n + 1] / rep.residuals[n];
    CHECK(ratio <= rep.kappa + 1e-6);
    CHECK(ratio == doctest::Approx(0.5).epsilon(0.02));
  }
  CHECK(rep.iterates.size() == 6);
  CHECK(rep.inner_iters.size() == 6);
  CHECK(rep.xi_norm_bounds.size() == 6);
  for (size_t n = 0; n < rep.xi_norm_bounds.size(); ++n)
    CHECK(rep.xi_norm_bounds[n] > 0.0);
  // duality identity recorded per step
  for (size_t n = 0; n < rep.dual_values.size(); ++n)
    CHECK(std::abs(rep.dual_values[n] +
                   0.5 * rep.residuals[n] * rep.residuals[n]) <=
          10 * opts.inner_tol * (1.0 + rep.residuals[n] * rep.residuals[n]));
}

TEST_CASE("bsp2 requires the unjustified-run flag and then decays") {
  const GelfandGrid grid = rosl::build_grid(128, rosl::builtin_rhs("bsp2"));
  const Vector u0 = rosl::builtin_initial_data(grid, "bsp2");
  PdiOptions opts;
  opts.max_steps = 5;
  opts.outer_tol = 1e-12;
  CHECK_THROWS_AS(rosl::solve_pdi(grid, u0, opts), rosl::PreconditionError);

  opts.allow_unjustified = true;
  const auto rep = rosl::solve_pdi(grid, u0, opts);
  CHECK(!rep.kappa_certified);
  for (size_t n = 0; n + 1 < rep.residuals.size(); ++n)
    CHECK(rep.residuals[n + 1] < rep.residuals[n]);
}

TEST_CASE("divergence detection raises after sustained residual growth") {
  // declared l_f = -1 wildly understates the expansive reaction -60 s, so
  // the damped outer step amplifies low modes and the detector must fire
  PointwiseMap f = singleton_map(
      [](double, const Eigen::Vector2d& s) {
        return Eigen::Vector2d(-60.0 * s);
      },
      -1.0, std::nullopt);
  const GelfandGrid grid = rosl::build_grid(32, f);
  const Vector u0 = hat_interpolant(grid,
      [](double x) { return std::sin(std::numbers::pi * x); },
      [](double x) { return std::sin(std::numbers::pi * x); });
  PdiOptions opts;
  opts.allow_unjustified = true;
  opts.max_steps = 50;
  CHECK_THROWS_AS(rosl::solve_pdi(grid, u0, opts), rosl::DivergenceError);
}

TEST_CASE("builtin right-hand sides") {
  const GramSpace e2 = GramSpace::euclidean(2);

  const PointwiseMap bsp1 = rosl::builtin_rhs("bsp1");
  CHECK(bsp1.l_f == -1.0);
  REQUIRE(bsp1.L_f.has_value());
  CHECK(*bsp1.L_f == doctest::Approx(1.5));
  // at s = 0 the cubic term vanishes: the set is Ball(0, 10)
  const auto at0 = bsp1.eval(0.3, Eigen::Vector2d::Zero());
  Vector e0(2);
  e0 << 1, 0;
  CHECK(rosl::support(*at0, e0, e2) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(rosl::support(*at0, Vector(-e0), e2) == doctest::Approx(10.0).epsilon(1e-12));

  // custom parameters pass through
  const PointwiseMap custom = rosl::builtin_rhs("bsp1", {.l_f = -2.0, .R = 3.0});
  CHECK(custom.l_f == -2.0);
  CHECK(*custom.L_f == doctest::Approx(2.5));
  CHECK(rosl::support(*custom.eval(0.0, Eigen::Vector2d::Zero()), e0, e2) ==
        doctest::Approx(3.0).epsilon(1e-12));

  const PointwiseMap bsp2 = rosl::builtin_rhs("bsp2");
  CHECK(bsp2.l_f == -1.0);
  CHECK(!bsp2.L_f.has_value());
  // at x = 0, s = 0: g = (1, 1), set = (1,1) + Ball(0, 5)
  const auto b2 = bsp2.eval(0.0, Eigen::Vector2d::Zero());
  CHECK(rosl::support(*b2, e0, e2) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(rosl::support(*b2, Vector(-e0), e2) == doctest::Approx(4.0).epsilon(1e-12));

  CHECK_THROWS_AS(rosl::builtin_rhs("bsp3"), rosl::PreconditionError);
}

TEST_CASE("builtin initial data samples the stated functions") {
  const GelfandGrid grid = rosl::build_grid(8, rosl::builtin_rhs("bsp1"));
  const Vector u1 = rosl::builtin_initial_data(grid, "bsp1");
  for (int i = 0; i < grid.nodes; ++i) {
    const double x = grid.node_x[i];
    CHECK(u1[i] ==
          doctest::Approx(0.5 * std::sin(2 * std::numbers::pi * x)).epsilon(1e-14));
    CHECK(u1[grid.nodes + i] ==
          doctest::Approx(0.5 * std::sin(16 * std::numbers::pi * x)).epsilon(1e-14));
  }
  const Vector u2 = rosl::builtin_initial_data(grid, "bsp2");
  for (int i = 0; i < grid.nodes; ++i) {
    const double x = grid.node_x[i];
    CHECK(u2[i] == doctest::Approx(x * (1 - x) *
          std::exp(-std::pow(x - 0.1, 2) / 0.1)).epsilon(1e-14));
    CHECK(u2[grid.nodes + i] == doctest::Approx(x * (1 - x) *
          std::exp(-std::pow(x - 0.8, 2) / 0.01)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(rosl::builtin_initial_data(grid, "nope"),
                  rosl::PreconditionError);
}
