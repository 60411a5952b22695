#pragma once

#include "machlimit/poisson.hpp"
#include "machlimit/reduce.hpp"
#include "machlimit/state.hpp"

namespace machlimit {

struct ProjectionResult {
  VectorField P;  // divergence-free part, zero wall-normal trace
  VectorField Q;  // coefficient-weighted gradient part, P + Q == X bit-exactly
  double rel_residual = 0.0;
  int iterations = 0;
};

// Coefficient-weighted Helmholtz decomposition X = P + c*grad(psi) with
// D.(c grad psi) = D.X in the parity-closure sense and (c grad psi).n = X.n
// on the walls.  c == 1 gives the Leray projection; c == 1/varrho the
// density-weighted projector of the limit system.  Nonzero wall-normal trace
// is absorbed first by a quadratic carrier whose one-sided derivative matches
// the data exactly, so P always has an exactly zero trace.  The solve runs a
// preconditioned Richardson iteration (one direct mode solve per pass) down
// to `tol` relative residual; constant coefficients converge in one pass.
ProjectionResult project_weighted(const VectorField& X, const ScalarField& c,
                                  const Grid& g, PoissonSolver& solver,
                                  double tol = 1e-10, int max_iter = 200,
                                  Exec exec = Exec::Parallel);

// Leray projection: PX divergence-free with zero normal trace, QX = grad psi
// with the Neumann data taken from X.n at the walls.
ProjectionResult leray_project(const VectorField& X, const Grid& g,
                               PoissonSolver& solver, double tol = 1e-10,
                               Exec exec = Exec::Parallel);

struct W0Result {
  VectorField w0;
  double div_residual = 0.0;        // |div w0|_0, one-sided diagnostic stencils
  double curl_mismatch = 0.0;       // |curl(rho0 w0) - curl(rho0 u0)|_0
  double solve_residual = 0.0;
  int iterations = 0;
};

// Limit initial velocity: w0 = u0 - rho0^{-1} grad psi where
// div(rho0^{-1} grad psi) = div u0 with zero-flux walls, so that
// div w0 = 0, curl(rho0 w0) = curl(rho0 u0) and w0.n = 0 on the walls.
W0Result construct_w0(const VectorField& u0_comp, const ScalarField& rho0,
                      const Grid& g, PoissonSolver& solver, double tol = 1e-10,
                      Exec exec = Exec::Parallel);

}  // namespace machlimit
