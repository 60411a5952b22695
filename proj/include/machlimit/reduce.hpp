#pragma once

#include <array>

#include "machlimit/exec.hpp"
#include "machlimit/field.hpp"

namespace machlimit {

// Discrete L2 quadrature: uniform weights on periodic axes, trapezoid along
// the wall axis.  This is exactly half the uniform inner product on the
// reflected double cover, which is what makes the parity-closure operators
// exactly skew-adjoint in it.

double l2_sq(const ScalarField& f, const Grid& g, Exec exec = Exec::Parallel);
double l2_sq(const VectorField& X, const Grid& g, Exec exec = Exec::Parallel);
double inner(const ScalarField& f, const ScalarField& h, const Grid& g,
             Exec exec = Exec::Parallel);
double inner(const VectorField& X, const VectorField& Y, const Grid& g,
             Exec exec = Exec::Parallel);

double max_abs(const ScalarField& f, const Grid& g, Exec exec = Exec::Parallel);
double max_abs(const VectorField& X, const Grid& g, Exec exec = Exec::Parallel);

bool all_finite(const ScalarField& f, const Grid& g);
bool all_finite(const VectorField& X, const Grid& g);

// L2 over the ball |x - center| <= radius (locality window for the limit
// metrics).  center is (x1, [x2,] x3).
double l2_sq_ball(const ScalarField& f, const Grid& g,
                  const std::array<double, 3>& center, double radius,
                  Exec exec = Exec::Parallel);
double l2_sq_ball(const VectorField& X, const Grid& g,
                  const std::array<double, 3>& center, double radius,
                  Exec exec = Exec::Parallel);

// y += a * x, over interior and ghost slots alike.
void axpy(ScalarField& y, double a, const ScalarField& x);
void axpy(VectorField& y, double a, const VectorField& x);
void scale(ScalarField& y, double a);

double max_pointwise_diff(const ScalarField& a, const ScalarField& b,
                          const Grid& g, Exec exec = Exec::Parallel);

}  // namespace machlimit
