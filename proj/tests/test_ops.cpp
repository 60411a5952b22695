#include <cmath>

#include "doctest.h"
#include "machlimit/ops.hpp"
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
  g.validate();
  return g;
}

}  // namespace

TEST_CASE("grad: zero input gives zero field") {
  Grid g = make_grid(16);
  ScalarField f(g);
  VectorField gf = ops::grad(f, g);
  CHECK(max_abs(gf, g) == 0.0);
}

TEST_CASE("grad: exact on linears including wall rows") {
  Grid g = make_grid(16);
  ScalarField f(g);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i) f(i, j3) = g.x3(j3);
  VectorField gf = ops::grad(f, g);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i) {
      CHECK(gf[0](i, j3) == doctest::Approx(0.0).epsilon(1e-13));
      CHECK(gf[1](i, j3) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("grad: second-order on sin along periodic axis") {
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    Grid g = make_grid(n);
    ScalarField f(g);
    for (int j3 = 0; j3 < g.nodes3(); ++j3)
      for (int i = 0; i < g.n1; ++i)
        f(i, j3) = std::sin(2.0 * M_PI * g.x1(i) / g.L1);
    VectorField gf = ops::grad(f, g);
    double err = 0.0;
    for (int j3 = 0; j3 < g.nodes3(); ++j3)
      for (int i = 0; i < g.n1; ++i) {
        const double exact = 2.0 * M_PI / g.L1 * std::cos(2.0 * M_PI * g.x1(i) / g.L1);
        err = std::max(err, std::fabs(gf[0](i, j3) - exact));
      }
    hs.push_back(g.h1());
    errs.push_back(err);
  }
  const double order = testutil::fit_order(hs, errs);
  CHECK(order > 1.7);
  CHECK(order < 2.3);
}

TEST_CASE("div: exact on affine field") {
  Grid g = make_grid(16);
  VectorField X(g);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i) {
      X[0](i, j3) = g.x1(i);
      X[1](i, j3) = g.x3(j3);
    }
  ScalarField d = ops::div(X, g);
  // The periodic axis sees the sawtooth jump of x1; check away from it.
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 2; i < g.n1 - 2; ++i)
      CHECK(d(i, j3) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("curl of gradient vanishes to rounding, walls included") {
  Grid g = make_grid(32);
  ScalarField f(g);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i)
      f(i, j3) = std::sin(2.0 * M_PI * g.x1(i) / g.L1) *
                 std::cos(M_PI * g.x3(j3) / g.L3);
  VectorField gf = ops::grad(f, g);
  VectorField c = ops::curl(gf, g);
  const double bound = 1e-10 * max_abs(f, g) / g.h_min();
  CHECK(max_abs(c, g) <= bound);
}

TEST_CASE("laplacian: zero on constants") {
  Grid g = make_grid(16);
  ScalarField f(g);
  f.fill(3.25);
  ScalarField l = ops::laplacian(f, g);
  CHECK(max_abs(l, g) == 0.0);
}

TEST_CASE("laplacian: second order on smooth fields") {
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64}) {
    Grid g = make_grid(n);
    ScalarField f(g);
    for (int j3 = 0; j3 < g.nodes3(); ++j3)
      for (int i = 0; i < g.n1; ++i)
        f(i, j3) = std::cos(2.0 * M_PI * g.x1(i) / g.L1) *
                   std::sin(M_PI * (g.x3(j3) + g.L3) / g.L3);
    ScalarField l = ops::laplacian(f, g);
    const double k1 = 2.0 * M_PI / g.L1, k3 = M_PI / g.L3;
    double err = 0.0;
    for (int j3 = 0; j3 < g.nodes3(); ++j3)
      for (int i = 0; i < g.n1; ++i) {
        const double exact = -(k1 * k1 + k3 * k3) * std::cos(k1 * g.x1(i)) *
                             std::sin(k3 * (g.x3(j3) + g.L3));
        err = std::max(err, std::fabs(l(i, j3) - exact));
      }
    hs.push_back(g.h3());
    errs.push_back(err);
  }
  const double order = testutil::fit_order(hs, errs);
  CHECK(order > 1.7);
  CHECK(order < 2.4);
}

TEST_CASE("directional derivative: trivial and manufactured cases") {
  Grid g = make_grid(32);
  ScalarField f(g);
  VectorField F(g);

  SUBCASE("constant f gives zero") {
    f.fill(7.0);
    F[0].fill(1.3);
    F[1].fill(-0.4);
    ScalarField d = ops::directional_derivative(F, f, g);
    CHECK(max_abs(d, g) == 0.0);
  }

  SUBCASE("unit direction on x1 gives one") {
    for (int j3 = 0; j3 < g.nodes3(); ++j3)
      for (int i = 0; i < g.n1; ++i) f(i, j3) = g.x1(i);
    F[0].fill(1.0);
    ScalarField d = ops::directional_derivative(F, f, g);
    for (int j3 = 0; j3 < g.nodes3(); ++j3)
      for (int i = 2; i < g.n1 - 2; ++i)
        CHECK(d(i, j3) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("matches analytic dot of gradients at second order") {
    std::vector<double> hs, errs;
    for (int n : {16, 32, 64}) {
      Grid gg = make_grid(n);
      ScalarField ff(gg);
      VectorField FF(gg);
      const double k1 = 2.0 * M_PI / gg.L1, k3 = M_PI / gg.L3;
      for (int j3 = 0; j3 < gg.nodes3(); ++j3)
        for (int i = 0; i < gg.n1; ++i) {
          const double x1 = gg.x1(i), s = gg.x3(j3) + gg.L3;
          ff(i, j3) = std::sin(k1 * x1) * std::cos(k3 * s);
          FF[0](i, j3) = 1.0 + 0.5 * std::cos(k1 * x1);
          FF[1](i, j3) = 0.3 * std::sin(k3 * s);
        }
      ScalarField d = ops::directional_derivative(FF, ff, gg);
      double err = 0.0;
      for (int j3 = 0; j3 < gg.nodes3(); ++j3)
        for (int i = 0; i < gg.n1; ++i) {
          const double x1 = gg.x1(i), s = gg.x3(j3) + gg.L3;
          const double d1 = k1 * std::cos(k1 * x1) * std::cos(k3 * s);
          const double d3 = -k3 * std::sin(k1 * x1) * std::sin(k3 * s);
          const double exact = FF[0](i, j3) * d1 + FF[1](i, j3) * d3;
          err = std::max(err, std::fabs(d(i, j3) - exact));
        }
      hs.push_back(gg.h3());
      errs.push_back(err);
    }
    const double order = testutil::fit_order(hs, errs);
    CHECK(order > 1.7);
    CHECK(order < 2.3);
  }
}

TEST_CASE("serial and parallel drivers agree bitwise") {
  Grid g = make_grid(32);
  ScalarField f = testutil::random_smooth(g, 42, false);
  VectorField gp = ops::grad(f, g, ops::WallRule::OneSided, Exec::Parallel);
  VectorField gs = ops::grad(f, g, ops::WallRule::OneSided, Exec::Serial);
  for (int d = 0; d < g.dim; ++d)
    CHECK(max_pointwise_diff(gp[d], gs[d], g) == 0.0);

  VectorField X = testutil::random_velocity_class(g, 7);
  CHECK(max_pointwise_diff(ops::div(X, g, ops::WallRule::Odd, Exec::Parallel),
                           ops::div(X, g, ops::WallRule::Odd, Exec::Serial),
                           g) == 0.0);
  CHECK(l2_sq(f, g, Exec::Parallel) == l2_sq(f, g, Exec::Serial));
}

TEST_CASE("shape mismatch raises") {
  Grid g = make_grid(16);
  Grid g2 = make_grid(32);
  ScalarField f(g2);
  CHECK_THROWS_AS(ops::grad(f, g), ShapeError);
}

TEST_CASE("3D smoke: linear exactness and curl-grad identity") {
  Grid g = make_grid(8, 3);
  ScalarField f(g);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int j2 = 0; j2 < g.nodes2(); ++j2)
      for (int i = 0; i < g.n1; ++i) f(i, j2, j3) = 2.0 * g.x3(j3);
  VectorField gf = ops::grad(f, g);
  CHECK(max_abs(gf[0], g) < 1e-12);
  CHECK(max_abs(gf[1], g) < 1e-12);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    CHECK(gf[2](3, 2, j3) == doctest::Approx(2.0).epsilon(1e-12));

  ScalarField s = testutil::random_smooth(g, 5, false);
  VectorField c = ops::curl(ops::grad(s, g), g);
  CHECK(max_abs(c, g) <= 1e-10 * max_abs(s, g) / g.h_min());
}
