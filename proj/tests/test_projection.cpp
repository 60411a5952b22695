#include <cmath>

#include "doctest.h"
#include "machlimit/ops.hpp"
#include "machlimit/projection.hpp"
#include "machlimit/reduce.hpp"
#include "test_util.hpp"

using namespace machlimit;

namespace {

Grid make_grid(int n, int dim = 2) {
  Grid g;
  g.dim = dim;
  g.n1 = n;
  g.n2 = dim == 3 ? n : 1;
  g.n3 = n;
  return g;
}

// Discretely divergence-free field with zero wall trace: parity-stencil curl
// of an odd-class stream function (the two stencil axes commute exactly).
VectorField stream_field(const Grid& g, unsigned seed) {
  ScalarField phi = testutil::random_smooth(g, seed, true);
  VectorField X(g);
  ops::deriv(phi, g, g.normal_axis(), ops::WallRule::Odd, X[0]);
  scale(X[0], -1.0);
  ops::deriv(phi, g, 0, ops::WallRule::OneSided, X[g.normal_axis()]);
  return X;
}

}  // namespace

TEST_CASE("projection: divergence-free zero-trace fields are fixed points") {
  Grid g = make_grid(32);
  PoissonSolver solver(g);
  VectorField X = stream_field(g, 21);
  ProjectionResult pr = leray_project(X, g, solver);
  double diff = 0.0;
  for (int d = 0; d < g.dim; ++d)
    diff = std::max(diff, max_pointwise_diff(pr.P[d], X[d], g));
  CHECK(diff <= 1e-9 * std::sqrt(l2_sq(X, g)));
}

TEST_CASE("projection: annihilates analytic gradients at second order") {
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    Grid g = make_grid(n);
    PoissonSolver solver(g);
    // phi smooth with nonzero Neumann trace at the walls.
    VectorField X(g);
    const double k1 = 2.0 * M_PI / g.L1;
    for (int j3 = 0; j3 < g.nodes3(); ++j3)
      for (int i = 0; i < g.n1; ++i) {
        const double x1 = g.x1(i), x3 = g.x3(j3);
        X[0](i, j3) = k1 * std::cos(k1 * x1) * std::cosh(x3 + 0.3);
        X[1](i, j3) = std::sin(k1 * x1) * std::sinh(x3 + 0.3);
      }
    ProjectionResult pr = leray_project(X, g, solver);
    errs.push_back(max_abs(pr.P, g));
    hs.push_back(g.h3());
  }
  const double order = testutil::fit_order(hs, errs);
  CHECK(order > 1.7);
  CHECK(errs.back() < 1e-2);
}

TEST_CASE("projection: idempotent and orthogonal on random smooth fields") {
  Grid g = make_grid(48);
  PoissonSolver solver(g);
  VectorField X = testutil::random_velocity_class(g, 77);
  ProjectionResult pr = leray_project(X, g, solver);

  // P + Q recovers X to rounding.
  double recomp = 0.0;
  for (int d = 0; d < g.dim; ++d)
    for (int j3 = 0; j3 < g.nodes3(); ++j3)
      for (int i = 0; i < g.n1; ++i)
        recomp = std::max(recomp, std::fabs(pr.P[d](i, j3) + pr.Q[d](i, j3) -
                                            X[d](i, j3)));
  CHECK(recomp <= 4e-15 * std::max(1.0, max_abs(X, g)));

  const double xn2 = l2_sq(X, g);
  CHECK(std::fabs(inner(pr.P, pr.Q, g)) <= 1e-10 * xn2);

  ProjectionResult pr2 = leray_project(pr.P, g, solver);
  double diff = 0.0;
  for (int d = 0; d < g.dim; ++d)
    diff = std::max(diff, max_pointwise_diff(pr2.P[d], pr.P[d], g));
  CHECK(diff <= 1e-9 * std::sqrt(xn2));

  // Projected part is discretely divergence-free in the projector's sense.
  ScalarField dv = ops::div(pr.P, g, ops::WallRule::Odd);
  CHECK(std::sqrt(l2_sq(dv, g)) <= 1e-9 * std::sqrt(xn2) / g.h_min());

  // And has exactly zero wall trace.
  CHECK(wall_trace_max(pr.P, g) == 0.0);
}

TEST_CASE("projection: nonzero wall-normal trace goes to Q") {
  Grid g = make_grid(32);
  PoissonSolver solver(g);
  VectorField X = testutil::random_velocity_class(g, 5);
  const int last = g.nodes3() - 1;
  for (int i = 0; i < g.n1; ++i) {
    X[1](i, 0) = 0.3 * std::sin(2.0 * M_PI * g.x1(i));
    X[1](i, last) = -0.2 * std::cos(2.0 * M_PI * g.x1(i));
  }
  ProjectionResult pr = leray_project(X, g, solver);
  CHECK(wall_trace_max(pr.P, g) == 0.0);
  CHECK(std::fabs(inner(pr.P, pr.Q, g)) <= 1e-10 * l2_sq(X, g));
  ProjectionResult pr2 = leray_project(pr.P, g, solver);
  double diff = 0.0;
  for (int d = 0; d < g.dim; ++d)
    diff = std::max(diff, max_pointwise_diff(pr2.P[d], pr.P[d], g));
  CHECK(diff <= 1e-9 * std::sqrt(l2_sq(X, g)));
}

TEST_CASE("construct_w0: admissible input is returned unchanged") {
  Grid g = make_grid(32);
  PoissonSolver solver(g);
  VectorField u = stream_field(g, 31);
  ScalarField rho0(g);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i)
      rho0(i, j3) = 1.0 + 0.2 * std::sin(M_PI * (g.x3(j3) + g.L3) / g.L3);
  W0Result w = construct_w0(u, rho0, g, solver);
  double diff = 0.0;
  for (int d = 0; d < g.dim; ++d)
    diff = std::max(diff, max_pointwise_diff(w.w0[d], u[d], g));
  CHECK(diff <= 1e-8 * std::sqrt(l2_sq(u, g)));
}

TEST_CASE("construct_w0: reduces to the Leray projection for rho0 == 1") {
  Grid g = make_grid(32);
  PoissonSolver solver(g);
  VectorField u = testutil::random_velocity_class(g, 41);
  ScalarField rho0(g);
  rho0.fill(1.0);
  W0Result w = construct_w0(u, rho0, g, solver);
  ProjectionResult pr = leray_project(u, g, solver);
  double diff = 0.0;
  for (int d = 0; d < g.dim; ++d)
    diff = std::max(diff, max_pointwise_diff(w.w0[d], pr.P[d], g));
  CHECK(diff <= 1e-9 * std::sqrt(l2_sq(u, g)));
}

TEST_CASE("construct_w0: annihilates weighted gradients at second order") {
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    Grid g = make_grid(n);
    PoissonSolver solver(g);
    ScalarField rho0(g);
    VectorField u(g);
    const double k1 = 2.0 * M_PI / g.L1, k3 = M_PI / g.L3;
    for (int j3 = 0; j3 < g.nodes3(); ++j3)
      for (int i = 0; i < g.n1; ++i) {
        const double x1 = g.x1(i), s = g.x3(j3) + g.L3;
        rho0(i, j3) = 1.0 + 0.3 * std::sin(k3 * s);
        // u = rho0^{-1} grad(phi), phi = cos(k1 x1) cos(k3 s): zero flux walls
        u[0](i, j3) = -k1 * std::sin(k1 * x1) * std::cos(k3 * s) / rho0(i, j3);
        u[1](i, j3) = -k3 * std::cos(k1 * x1) * std::sin(k3 * s) / rho0(i, j3);
      }
    W0Result w = construct_w0(u, rho0, g, solver);
    errs.push_back(std::sqrt(l2_sq(w.w0, g)));
    hs.push_back(g.h3());
  }
  const double order = testutil::fit_order(hs, errs);
  CHECK(order > 1.7);
}

TEST_CASE("projection: weighted solve converges and reports residual") {
  Grid g = make_grid(32);
  PoissonSolver solver(g);
  VectorField X = testutil::random_velocity_class(g, 55);
  ScalarField c(g);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i)
      c(i, j3) = 1.0 / (1.0 + 0.35 * std::cos(2.0 * M_PI * g.x1(i)) *
                                  std::sin(M_PI * (g.x3(j3) + g.L3) / g.L3));
  ProjectionResult pr = project_weighted(X, c, g, solver);
  CHECK(pr.rel_residual <= 1e-10);
  CHECK(pr.iterations >= 1);
  ScalarField dv = ops::div(pr.P, g, ops::WallRule::Odd);
  CHECK(std::sqrt(l2_sq(dv, g)) <= 1e-8 * std::sqrt(l2_sq(X, g)) / g.h_min());
}

TEST_CASE("projection: 3D smoke test") {
  Grid g = make_grid(8, 3);
  PoissonSolver solver(g);
  VectorField X = testutil::random_velocity_class(g, 13, 2);
  ProjectionResult pr = leray_project(X, g, solver);
  CHECK(std::fabs(inner(pr.P, pr.Q, g)) <= 1e-10 * l2_sq(X, g));
  ScalarField dv = ops::div(pr.P, g, ops::WallRule::Odd);
  CHECK(std::sqrt(l2_sq(dv, g)) <= 1e-9 * std::sqrt(l2_sq(X, g)) / g.h_min());
}
