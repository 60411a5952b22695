#pragma once

#include <array>

#include "machlimit/eos.hpp"
#include "machlimit/exec.hpp"
#include "machlimit/field.hpp"

namespace machlimit {

// Constant background deformation columns; the wall-normal row vanishes so
// the columns stay tangent to the walls.
struct BackgroundDeformation {
  int dim = 2;
  // fbar[i][j]: component i of column j.
  std::array<std::array<double, 3>, 3> fbar{};

  static BackgroundDeformation defaults(int dim) {
    BackgroundDeformation b;
    b.dim = dim;
    for (int d = 0; d + 1 < dim; ++d) b.fbar[d][d] = 1.0;
    return b;
  }

  double operator()(int i, int j) const { return fbar[i][j]; }

  void validate() const {
    for (int j = 0; j < dim; ++j)
      if (fbar[dim - 1][j] != 0.0)
        throw ConfigError("background deformation: wall-normal row must vanish");
  }
};

// Unknowns of the rescaled compressible system at one time instant.
struct State {
  ScalarField q;   // rescaled pressure perturbation, p = 1 + eps q
  VectorField u;
  TensorField F;   // deformation perturbation columns
  ScalarField S;
  double eps = 1.0;
  double t = 0.0;

  State() = default;
  State(const Grid& g, double eps_) : q(g), u(g), F(g), S(g), eps(eps_) {}
};

// Zeroes the wall traces of the normal components of u and every F column,
// and fills the ghost slots: even reflection for q, S and tangential
// components, odd reflection for wall-normal components.  Parities are chosen
// so d3 q = 0 and u3 = 0 are 2nd-order consistent at the walls.
void enforce_boundary(State& s, const Grid& g, Exec exec = Exec::Parallel);

void fill_ghosts_even(ScalarField& f, const Grid& g);
void fill_ghosts_odd(ScalarField& f, const Grid& g);

// Max wall trace of |u3| and |F3j| over both walls.
double wall_trace_max(const State& s, const Grid& g);
double wall_trace_max(const VectorField& X, const Grid& g);

bool all_finite(const State& s, const Grid& g);

// Total column j: F_j + Fbar_j as a field.
VectorField total_column(const TensorField& F, const BackgroundDeformation& fbar,
                         int j, const Grid& g, Exec exec = Exec::Parallel);

}  // namespace machlimit
