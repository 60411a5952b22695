#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "machlimit/reduce.hpp"
#include "machlimit/snapshot_io.hpp"
#include "machlimit/state.hpp"
#include "test_util.hpp"

using namespace machlimit;

namespace {
Grid small_grid() {
  Grid g;
  g.n1 = 16;
  g.n3 = 16;
  return g;
}
}  // namespace

TEST_CASE("enforce_boundary zeroes wall traces exactly") {
  Grid g = small_grid();
  State s(g, 0.5);
  const int last = g.nodes3() - 1;
  for (int i = 0; i < g.n1; ++i) {
    s.u[1](i, 0) = 1e-3;
    s.u[1](i, last) = -2e-3;
    s.F[0][1](i, 0) = 4e-4;
  }
  enforce_boundary(s, g);
  CHECK(wall_trace_max(s, g) == 0.0);
}

TEST_CASE("enforce_boundary fills ghosts by reflection") {
  Grid g = small_grid();
  State s(g, 0.5);
  s.q = testutil::random_smooth(g, 3, false);
  s.u[1] = testutil::random_smooth(g, 4, true);
  enforce_boundary(s, g);
  const int last = g.nodes3() - 1;
  for (int i = 0; i < g.n1; ++i) {
    CHECK(s.q(i, 0, -1) == s.q(i, 0, 1));
    CHECK(s.q(i, 0, last + 1) == s.q(i, 0, last - 1));
    CHECK(s.u[1](i, 0, -1) == -s.u[1](i, 0, 1));
    CHECK(s.u[1](i, 0, last + 1) == -s.u[1](i, 0, last - 1));
  }
}

TEST_CASE("enforce_boundary is idempotent on stratified equilibria") {
  Grid g = small_grid();
  State s(g, 0.5);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i)
      s.S(i, j3) = 0.4 * std::exp(-10.0 * std::pow(g.x3(j3) + 0.5 * g.L3, 2));
  enforce_boundary(s, g);
  State s2 = s;
  enforce_boundary(s2, g);
  CHECK(max_pointwise_diff(s.S, s2.S, g) == 0.0);
  CHECK(max_pointwise_diff(s.q, s2.q, g) == 0.0);
  for (int d = 0; d < g.dim; ++d)
    CHECK(max_pointwise_diff(s.u[d], s2.u[d], g) == 0.0);
}

TEST_CASE("snapshot component round-trips bit-exactly") {
  Grid g = small_grid();
  ScalarField f = testutil::random_smooth(g, 11, false);
  auto dir = std::filesystem::temp_directory_path() / "machlimit_io_test";
  std::filesystem::create_directories(dir);
  write_component(dir / "comp_q", f, g, "q", 1.25, 0.5);
  std::string name;
  double t = 0, eps = 0;
  ScalarField f2 = read_component(dir / "comp_q", g, &name, &t, &eps);
  CHECK(name == "q");
  CHECK(t == 1.25);
  CHECK(eps == 0.5);
  CHECK(max_pointwise_diff(f, f2, g) == 0.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("write_state emits one file pair per component") {
  Grid g = small_grid();
  State s(g, 0.3);
  s.q = testutil::random_smooth(g, 1, false);
  auto dir = std::filesystem::temp_directory_path() / "machlimit_state_test";
  std::filesystem::remove_all(dir);
  write_state(dir, "snap0000", s, g);
  // q, S, 2 velocity comps, 4 tensor comps = 8 components, 2 files each.
  int count = 0;
  for (auto const& e : std::filesystem::directory_iterator(dir)) {
    (void)e;
    ++count;
  }
  CHECK(count == 16);
  std::filesystem::remove_all(dir);
}
