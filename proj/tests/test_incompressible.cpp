#include <cmath>

#include "doctest.h"
#include "machlimit/incompressible.hpp"
#include "machlimit/mms.hpp"
#include "machlimit/ops.hpp"
#include "machlimit/reduce.hpp"
#include "test_util.hpp"

using namespace machlimit;

namespace {

Grid make_grid(int n) {
  Grid g;
  g.n1 = n;
  g.n3 = n;
  return g;
}

IncompressibleState rest_state(const Grid& g) {
  EquationOfState eos;
  IncompressibleState s(g);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i) {
      const double r = (g.x3(j3) + 0.5 * g.L3) / (0.3 * g.L3);
      s.S(i, j3) = std::fabs(r) < 1.0 ? 0.4 * std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
      s.varrho(i, j3) = eos.rho(1.0, s.S(i, j3));
    }
  enforce_boundary_incompressible(s, g);
  return s;
}

}  // namespace

TEST_CASE("rhs_incompressible: rest state has zero derivatives and zero pi") {
  Grid g = make_grid(16);
  auto fbar = BackgroundDeformation::defaults(2);
  PoissonSolver solver(g);
  IncompressibleState s = rest_state(g);
  VectorField pi_grad(g);
  IncompressibleDeriv d = rhs_incompressible(s, fbar, g, solver, &pi_grad);
  CHECK(max_abs(d.u, g) == 0.0);
  CHECK(max_abs(d.S, g) == 0.0);
  CHECK(max_abs(d.varrho, g) == 0.0);
  CHECK(max_abs(pi_grad, g) == 0.0);
}

TEST_CASE("rhs_incompressible: output is discretely divergence-free") {
  Grid g = make_grid(32);
  auto fbar = BackgroundDeformation::defaults(2);
  PoissonSolver solver(g);
  IncompressibleState s = rest_state(g);
  // Stir in a smooth velocity and deformation so the momentum is nontrivial.
  ScalarField phi = testutil::random_smooth(g, 21, true);
  ops::deriv(phi, g, 1, ops::WallRule::Odd, s.u[0]);
  scale(s.u[0], -1.0);
  ops::deriv(phi, g, 0, ops::WallRule::OneSided, s.u[1]);
  s.F[0][0] = testutil::random_smooth(g, 22, false, 2, 0.2);
  s.F[0][1] = testutil::random_smooth(g, 23, true, 2, 0.2);
  enforce_boundary_incompressible(s, g);

  IncompressibleDeriv d = rhs_incompressible(s, fbar, g, solver);
  ScalarField dv = ops::div(d.u, g, ops::WallRule::Odd);
  const double scale_norm = std::max(1.0, std::sqrt(l2_sq(d.u, g)));
  CHECK(std::sqrt(l2_sq(dv, g)) <= 1e-9 * scale_norm / g.h_min());
}

TEST_CASE("integrate_incompressible: rest state preserved, divergence small") {
  Grid g = make_grid(32);
  auto fbar = BackgroundDeformation::defaults(2);
  IncompressibleState s0 = rest_state(g);
  CompressibleConfig cfg;
  cfg.t_end = 0.5;
  cfg.n_out = 5;
  IncompressibleTrajectory tr = integrate_incompressible(s0, cfg, fbar, g);
  REQUIRE(!tr.aborted);
  CHECK(max_abs(tr.final_state.u, g) <= 1e-10);
  CHECK(max_pointwise_diff(tr.final_state.S, s0.S, g) <= 1e-10);
  CHECK(max_pointwise_diff(tr.final_state.varrho, s0.varrho, g) <= 1e-10);
  for (double dv : tr.div_u_history) CHECK(dv <= 1e-8);
}

TEST_CASE("integrate_incompressible: mass of varrho drifts at truncation order") {
  auto fbar = BackgroundDeformation::defaults(2);
  std::vector<double> drifts;
  for (int n : {16, 32}) {
    Grid g = make_grid(n);
    IncompressibleState s0 = rest_state(g);
    ScalarField phi = testutil::random_smooth(g, 31, true);
    ops::deriv(phi, g, 1, ops::WallRule::Odd, s0.u[0]);
    scale(s0.u[0], -1.0);
    ops::deriv(phi, g, 0, ops::WallRule::OneSided, s0.u[1]);
    enforce_boundary_incompressible(s0, g);
    CompressibleConfig cfg;
    cfg.t_end = 0.2;
    IncompressibleTrajectory tr = integrate_incompressible(s0, cfg, fbar, g);
    REQUIRE(!tr.aborted);
    auto mass = [&](const ScalarField& f) {
      return sum_nodes(g, Exec::Parallel, [&](int i, int j2, int j3) {
        return g.cell_volume(j3) * f(i, j2, j3);
      });
    };
    drifts.push_back(std::fabs(mass(tr.final_state.varrho) - mass(s0.varrho)));
  }
  CHECK(drifts[1] < drifts[0]);
  CHECK(drifts[1] < 1e-4);
}

TEST_CASE("mms: forced incompressible solve converges near second order (smoke)") {
  MmsOrderResult r = mms_order_incompressible({16, 32}, 0.1, 0.4);
  CHECK(r.errors[1] < r.errors[0]);
  CHECK(r.observed_order > 1.5);
  CHECK(r.observed_order < 2.7);
}
