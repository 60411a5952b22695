#include "machlimit/state.hpp"

#include <cmath>

#include "machlimit/reduce.hpp"

namespace machlimit {

namespace {

template <class Fill>
void over_walls(const Grid& g, Fill fill) {
  for (int j2 = 0; j2 < g.nodes2(); ++j2)
    for (int i = 0; i < g.nodes1(); ++i) fill(i, j2);
}

}  // namespace

void fill_ghosts_even(ScalarField& f, const Grid& g) {
  const int last = g.nodes3() - 1;
  over_walls(g, [&](int i, int j2) {
    f(i, j2, -1) = f(i, j2, 1);
    f(i, j2, last + 1) = f(i, j2, last - 1);
  });
}

void fill_ghosts_odd(ScalarField& f, const Grid& g) {
  const int last = g.nodes3() - 1;
  over_walls(g, [&](int i, int j2) {
    f(i, j2, -1) = -f(i, j2, 1);
    f(i, j2, last + 1) = -f(i, j2, last - 1);
  });
}

void enforce_boundary(State& s, const Grid& g, Exec /*exec*/) {
  const int last = g.nodes3() - 1;
  const int na = g.normal_axis();

  over_walls(g, [&](int i, int j2) {
    s.u[na](i, j2, 0) = 0.0;
    s.u[na](i, j2, last) = 0.0;
    for (int j = 0; j < g.dim; ++j) {
      s.F[j][na](i, j2, 0) = 0.0;
      s.F[j][na](i, j2, last) = 0.0;
    }
  });

  fill_ghosts_even(s.q, g);
  fill_ghosts_even(s.S, g);
  for (int d = 0; d < g.dim; ++d) {
    if (d == na)
      fill_ghosts_odd(s.u[d], g);
    else
      fill_ghosts_even(s.u[d], g);
    for (int j = 0; j < g.dim; ++j) {
      if (d == na)
        fill_ghosts_odd(s.F[j][d], g);
      else
        fill_ghosts_even(s.F[j][d], g);
    }
  }
}

double wall_trace_max(const VectorField& X, const Grid& g) {
  const int last = g.nodes3() - 1;
  const int na = g.normal_axis();
  double m = 0.0;
  over_walls(g, [&](int i, int j2) {
    const double a = std::fabs(X[na](i, j2, 0));
    const double b = std::fabs(X[na](i, j2, last));
    if (a > m) m = a;
    if (b > m) m = b;
  });
  return m;
}

double wall_trace_max(const State& s, const Grid& g) {
  double m = wall_trace_max(s.u, g);
  for (int j = 0; j < g.dim; ++j) {
    const double v = wall_trace_max(s.F[j], g);
    if (v > m) m = v;
  }
  return m;
}

bool all_finite(const State& s, const Grid& g) {
  if (!all_finite(s.q, g) || !all_finite(s.S, g) || !all_finite(s.u, g))
    return false;
  for (int j = 0; j < g.dim; ++j)
    if (!all_finite(s.F[j], g)) return false;
  return true;
}

VectorField total_column(const TensorField& F, const BackgroundDeformation& fbar,
                         int j, const Grid& g, Exec exec) {
  VectorField out(g);
  for (int d = 0; d < g.dim; ++d) {
    const double c = fbar(d, j);
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      out[d](i, j2, j3) = F[j][d](i, j2, j3) + c;
    });
  }
  return out;
}

}  // namespace machlimit
