#include <cmath>

#include "doctest.h"
#include "machlimit/compressible.hpp"
#include "machlimit/mms.hpp"
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

State stratified_equilibrium(const Grid& g, double eps) {
  State s(g, eps);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i) {
      const double r = (g.x3(j3) + 0.5 * g.L3) / (0.3 * g.L3);
      s.S(i, j3) = std::fabs(r) < 1.0 ? 0.4 * std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
    }
  enforce_boundary(s, g);
  return s;
}

}  // namespace

TEST_CASE("rhs: uniform equilibrium has zero derivatives") {
  Grid g = make_grid(16);
  EquationOfState eos;
  auto fbar = BackgroundDeformation::defaults(2);
  State s(g, 0.5);
  StateDeriv d = rhs(s, eos, fbar, g);
  CHECK(max_abs(d.q, g) == 0.0);
  CHECK(max_abs(d.S, g) == 0.0);
  CHECK(max_abs(d.u, g) == 0.0);
  for (int j = 0; j < 2; ++j) CHECK(max_abs(d.F[j], g) == 0.0);
}

TEST_CASE("rhs: stratified entropy is an equilibrium") {
  Grid g = make_grid(16);
  EquationOfState eos;
  auto fbar = BackgroundDeformation::defaults(2);
  State s = stratified_equilibrium(g, 0.5);
  StateDeriv d = rhs(s, eos, fbar, g);
  CHECK(max_abs(d.q, g) == 0.0);
  CHECK(max_abs(d.S, g) == 0.0);
  CHECK(max_abs(d.u, g) == 0.0);
  for (int j = 0; j < 2; ++j) CHECK(max_abs(d.F[j], g) == 0.0);
}

TEST_CASE("stable_dt: closed-form value at the reference state") {
  Grid g = make_grid(64);
  EquationOfState eos;
  eos.gamma = 1.4;
  State s(g, 1.0);
  const double dt = stable_dt(s, eos, g, 0.4);
  const double expected = 0.4 * (1.0 / 64.0) * std::sqrt(1.0 / 1.4);
  CHECK(dt == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("stable_dt: halving eps roughly halves dt; cfl is exactly linear") {
  Grid g = make_grid(32);
  EquationOfState eos;
  State s(g, 0.4);
  s.q = testutil::random_smooth(g, 2, false, 2, 0.05);
  s.u[0] = testutil::random_smooth(g, 3, false, 2, 0.1);
  const double dt1 = stable_dt(s, eos, g, 0.4);
  State s2 = s;
  s2.eps = 0.2;
  const double dt2 = stable_dt(s2, eos, g, 0.4);
  CHECK(dt2 / dt1 > 0.45);
  CHECK(dt2 / dt1 < 0.55);
  CHECK(stable_dt(s, eos, g, 0.8) == doctest::Approx(2.0 * dt1).epsilon(1e-14));
}

TEST_CASE("integrate: equilibrium is preserved to rounding") {
  Grid g = make_grid(32);
  EquationOfState eos;
  auto fbar = BackgroundDeformation::defaults(2);
  State s0 = stratified_equilibrium(g, 0.5);
  CompressibleConfig cfg;
  cfg.t_end = 200.0 * stable_dt(s0, eos, g, cfg.cfl, &fbar);
  cfg.snapshot_stride = 50;
  Trajectory tr = integrate(s0, cfg, eos, fbar, g);
  REQUIRE(!tr.aborted);
  CHECK(max_pointwise_diff(tr.final_state.S, s0.S, g) <= 1e-12);
  CHECK(max_pointwise_diff(tr.final_state.q, s0.q, g) <= 1e-12);
  CHECK(max_abs(tr.final_state.u, g) <= 1e-12);
  // E0 and W0 constant along the reports.
  for (const auto& r : tr.reports) {
    CHECK(std::fabs(r.E0 - tr.reports.front().E0) <= 1e-10);
    CHECK(r.W0 <= 1e-10);
    CHECK(r.wall_trace <= 1e-12);
  }
}

TEST_CASE("integrate: timestamps increase and reach t_end") {
  Grid g = make_grid(16);
  EquationOfState eos;
  auto fbar = BackgroundDeformation::defaults(2);
  State s0 = stratified_equilibrium(g, 0.5);
  s0.u[0] = testutil::random_smooth(g, 9, false, 2, 0.05);
  enforce_boundary(s0, g);
  CompressibleConfig cfg;
  cfg.t_end = 0.05;
  cfg.n_out = 4;
  Trajectory tr = integrate(s0, cfg, eos, fbar, g);
  REQUIRE(!tr.aborted);
  for (std::size_t k = 1; k < tr.output_times.size(); ++k)
    CHECK(tr.output_times[k] > tr.output_times[k - 1]);
  CHECK(tr.final_state.t >= cfg.t_end - tr.dt);
  CHECK(tr.output_times.size() == 5);  // t=0 plus n_out hits
  CHECK(tr.output_times.back() == doctest::Approx(cfg.t_end).epsilon(1e-12));
}

TEST_CASE("integrate: bit-identical across repeated runs") {
  Grid g = make_grid(16);
  EquationOfState eos;
  auto fbar = BackgroundDeformation::defaults(2);
  State s0(g, 0.5);
  s0.q = testutil::random_smooth(g, 4, false, 2, 0.3);
  s0.u[0] = testutil::random_smooth(g, 5, false, 2, 0.3);
  s0.u[1] = testutil::random_smooth(g, 6, true, 2, 0.3);
  enforce_boundary(s0, g);
  CompressibleConfig cfg;
  cfg.t_end = 0.02;
  Trajectory a = integrate(s0, cfg, eos, fbar, g);
  Trajectory b = integrate(s0, cfg, eos, fbar, g);
  REQUIRE(!a.aborted);
  CHECK(max_pointwise_diff(a.final_state.q, b.final_state.q, g) == 0.0);
  CHECK(max_pointwise_diff(a.final_state.S, b.final_state.S, g) == 0.0);
  for (int d = 0; d < 2; ++d)
    CHECK(max_pointwise_diff(a.final_state.u[d], b.final_state.u[d], g) == 0.0);
}

TEST_CASE("integrate: wall traces stay exactly zero along the run") {
  Grid g = make_grid(16);
  EquationOfState eos;
  auto fbar = BackgroundDeformation::defaults(2);
  State s0(g, 0.5);
  s0.u[0] = testutil::random_smooth(g, 8, false, 2, 0.2);
  s0.u[1] = testutil::random_smooth(g, 9, true, 2, 0.2);
  enforce_boundary(s0, g);
  CompressibleConfig cfg;
  cfg.t_end = 0.05;
  cfg.n_out = 5;
  Trajectory tr = integrate(s0, cfg, eos, fbar, g);
  REQUIRE(!tr.aborted);
  for (const State& s : tr.outputs) CHECK(wall_trace_max(s, g) <= 1e-12);
}

TEST_CASE("integrate: instability detector aborts with last-good time") {
  Grid g = make_grid(16);
  EquationOfState eos;
  auto fbar = BackgroundDeformation::defaults(2);
  State s0(g, 0.5);
  s0.u[0].fill(0.01);
  enforce_boundary(s0, g);
  CompressibleConfig cfg;
  cfg.t_end = 10.0;
  // Runaway forcing: exponential growth well past the detector threshold.
  Forcing blowup = [&](double, StateDeriv& d) {
    for (int j3 = 0; j3 < g.nodes3(); ++j3)
      for (int i = 0; i < g.n1; ++i) d.u[0](i, j3) += 5e4;
  };
  Trajectory tr = integrate(s0, cfg, eos, fbar, g, blowup);
  CHECK(tr.aborted);
  CHECK(tr.abort_reason.find("instability") != std::string::npos);
}

TEST_CASE("integrate: compatibility violation is warned, not fatal") {
  Grid g = make_grid(16);
  EquationOfState eos;
  auto fbar = BackgroundDeformation::defaults(2);
  State s0(g, 0.5);
  // d3 q != 0 at the walls kicks d_t u3 there: first-order compatibility fails.
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i)
      s0.q(i, j3) = 0.5 * std::sin(M_PI * (g.x3(j3) + g.L3) / g.L3);
  enforce_boundary(s0, g);
  CompressibleConfig cfg;
  cfg.t_end = 0.01;
  Trajectory tr = integrate(s0, cfg, eos, fbar, g);
  CHECK(!tr.warnings.empty());
  CHECK(!tr.aborted);
}

TEST_CASE("mms: forced compressible solve converges near second order (smoke)") {
  MmsOrderResult r = mms_order_compressible({16, 32}, 0.1, 0.8, 0.4);
  CHECK(r.errors[1] < r.errors[0]);
  CHECK(r.observed_order > 1.5);
  CHECK(r.observed_order < 2.7);
}
