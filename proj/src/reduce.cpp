#include "machlimit/reduce.hpp"

#include <cmath>

namespace machlimit {

double l2_sq(const ScalarField& f, const Grid& g, Exec exec) {
  require_match(f, g, "l2_sq");
  return sum_nodes(g, exec, [&](int i, int j2, int j3) {
    const double v = f(i, j2, j3);
    return g.cell_volume(j3) * v * v;
  });
}

double l2_sq(const VectorField& X, const Grid& g, Exec exec) {
  double s = 0.0;
  for (int d = 0; d < X.dim; ++d) s += l2_sq(X[d], g, exec);
  return s;
}

double inner(const ScalarField& f, const ScalarField& h, const Grid& g,
             Exec exec) {
  require_match(f, g, "inner");
  require_match(h, g, "inner");
  return sum_nodes(g, exec, [&](int i, int j2, int j3) {
    return g.cell_volume(j3) * f(i, j2, j3) * h(i, j2, j3);
  });
}

double inner(const VectorField& X, const VectorField& Y, const Grid& g,
             Exec exec) {
  double s = 0.0;
  for (int d = 0; d < X.dim; ++d) s += inner(X[d], Y[d], g, exec);
  return s;
}

double max_abs(const ScalarField& f, const Grid& g, Exec exec) {
  require_match(f, g, "max_abs");
  return max_nodes(g, exec,
                   [&](int i, int j2, int j3) { return std::fabs(f(i, j2, j3)); });
}

double max_abs(const VectorField& X, const Grid& g, Exec exec) {
  double m = 0.0;
  for (int d = 0; d < X.dim; ++d) {
    const double v = max_abs(X[d], g, exec);
    if (v > m) m = v;
  }
  return m;
}

bool all_finite(const ScalarField& f, const Grid& g) {
  // std::isfinite(max) would miss NaN (max skips it); scan explicitly.
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int j2 = 0; j2 < g.nodes2(); ++j2)
      for (int i = 0; i < g.nodes1(); ++i)
        if (!std::isfinite(f(i, j2, j3))) return false;
  return true;
}

bool all_finite(const VectorField& X, const Grid& g) {
  for (int d = 0; d < X.dim; ++d)
    if (!all_finite(X[d], g)) return false;
  return true;
}

namespace {
inline double ball_dist_sq(const Grid& g, int i, int j2, int j3,
                           const std::array<double, 3>& c) {
  // Periodic distance on tangential axes.
  double d1 = std::fabs(g.x1(i) - c[0]);
  if (d1 > 0.5 * g.L1) d1 = g.L1 - d1;
  double d2 = 0.0;
  if (g.dim == 3) {
    d2 = std::fabs(g.x2(j2) - c[1]);
    if (d2 > 0.5 * g.L2) d2 = g.L2 - d2;
  }
  const double d3 = g.x3(j3) - c[g.dim == 3 ? 2 : 1];
  return d1 * d1 + d2 * d2 + d3 * d3;
}
}  // namespace

double l2_sq_ball(const ScalarField& f, const Grid& g,
                  const std::array<double, 3>& center, double radius,
                  Exec exec) {
  require_match(f, g, "l2_sq_ball");
  const double r2 = radius * radius;
  return sum_nodes(g, exec, [&](int i, int j2, int j3) {
    if (ball_dist_sq(g, i, j2, j3, center) > r2) return 0.0;
    const double v = f(i, j2, j3);
    return g.cell_volume(j3) * v * v;
  });
}

double l2_sq_ball(const VectorField& X, const Grid& g,
                  const std::array<double, 3>& center, double radius,
                  Exec exec) {
  double s = 0.0;
  for (int d = 0; d < X.dim; ++d) s += l2_sq_ball(X[d], g, center, radius, exec);
  return s;
}

void axpy(ScalarField& y, double a, const ScalarField& x) {
  if (!y.same_shape(x)) throw ShapeError("axpy: shape mismatch");
  auto& yv = y.raw();
  const auto& xv = x.raw();
  for (std::size_t k = 0; k < yv.size(); ++k) yv[k] += a * xv[k];
}

void axpy(VectorField& y, double a, const VectorField& x) {
  for (int d = 0; d < y.dim; ++d) axpy(y[d], a, x[d]);
}

void scale(ScalarField& y, double a) {
  for (auto& v : y.raw()) v *= a;
}

double max_pointwise_diff(const ScalarField& a, const ScalarField& b,
                          const Grid& g, Exec exec) {
  require_match(a, g, "max_pointwise_diff");
  require_match(b, g, "max_pointwise_diff");
  return max_nodes(g, exec, [&](int i, int j2, int j3) {
    return std::fabs(a(i, j2, j3) - b(i, j2, j3));
  });
}

}  // namespace machlimit
