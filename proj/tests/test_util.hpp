#pragma once

#include <cmath>
#include <random>

#include "machlimit/field.hpp"
#include "machlimit/grid.hpp"

namespace machlimit::testutil {

// Smooth deterministic trig sums.  "Even"/"odd" refers to the reflection
// class across the walls: even fields use cos(pi m s), odd ones sin(pi m s)
// with s = (x3 + L3)/L3, so odd fields vanish on both walls.
inline ScalarField random_smooth(const Grid& g, unsigned seed, bool odd,
                                 int n_modes = 3, double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  struct Mode {
    int m, k1, k2;
    double c, p1, p2;
  };
  std::vector<Mode> modes;
  for (int m = odd ? 1 : 0; m <= n_modes; ++m)
    for (int k1 = 0; k1 <= n_modes; ++k1)
      for (int k2 = 0; k2 <= (g.dim == 3 ? n_modes : 0); ++k2) {
        Mode md{m, k1, k2, coef(rng) / (1.0 + m * m + k1 * k1 + k2 * k2),
                phase(rng), phase(rng)};
        modes.push_back(md);
      }

  ScalarField f(g);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int j2 = 0; j2 < g.nodes2(); ++j2)
      for (int i = 0; i < g.nodes1(); ++i) {
        const double s = static_cast<double>(j3) / g.n3;
        double v = 0.0;
        for (const auto& md : modes) {
          const double wall = odd ? std::sin(M_PI * md.m * s) : std::cos(M_PI * md.m * s);
          double tan = std::cos(2.0 * M_PI * md.k1 * g.x1(i) / g.L1 + md.p1);
          if (g.dim == 3)
            tan *= std::cos(2.0 * M_PI * md.k2 * g.x2(j2) / g.L2 + md.p2);
          v += md.c * wall * tan;
        }
        f(i, j2, j3) = amp * v;
      }
  return f;
}

// Random vector field in the velocity symmetry class: tangential components
// even, normal component odd (zero wall trace).
inline VectorField random_velocity_class(const Grid& g, unsigned seed,
                                         int n_modes = 3, double amp = 1.0) {
  VectorField X(g);
  for (int d = 0; d + 1 < g.dim; ++d)
    X[d] = random_smooth(g, seed + 11 * d, false, n_modes, amp);
  X[g.dim - 1] = random_smooth(g, seed + 101, true, n_modes, amp);
  return X;
}

// Least-squares slope of log(err) vs log(h); err and h same length >= 2.
inline double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  const int n = static_cast<int>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < n; ++k) {
    const double x = std::log(h[k]), y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace machlimit::testutil
