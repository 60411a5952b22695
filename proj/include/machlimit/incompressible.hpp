#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "machlimit/compressible.hpp"
#include "machlimit/poisson.hpp"
#include "machlimit/state.hpp"

namespace machlimit {

// Unknowns of the incompressible inhomogeneous limit system: divergence-free
// velocity, deformation columns, entropy and the transported density varrho.
// The pressure is handled by projection; pi_grad holds the gradient recovered
// from the most recent right-hand-side evaluation.
struct IncompressibleState {
  VectorField u;
  TensorField F;
  ScalarField S;
  ScalarField varrho;
  VectorField pi_grad;
  double t = 0.0;

  IncompressibleState() = default;
  explicit IncompressibleState(const Grid& g)
      : u(g), F(g), S(g), varrho(g), pi_grad(g) {}
};

struct IncompressibleDeriv {
  VectorField u;
  TensorField F;
  ScalarField S;
  ScalarField varrho;
  IncompressibleDeriv() = default;
  explicit IncompressibleDeriv(const Grid& g) : u(g), F(g), S(g), varrho(g) {}
};

using IncompressibleForcing =
    std::function<void(double t, IncompressibleDeriv& d)>;

// d_t u = P_varrho[-u.grad u + sum_j f_j.grad F_j (+ forcing)], with the
// varrho-weighted projection enforcing div u = 0 and recovering grad(pi)/varrho
// as the discarded part (returned via pi_grad when non-null).  Forcing is
// applied before the projection so manufactured pressure gradients are
// filtered the way the scheme filters its own.
IncompressibleDeriv rhs_incompressible(const IncompressibleState& s,
                                       const BackgroundDeformation& fbar,
                                       const Grid& g, PoissonSolver& solver,
                                       VectorField* pi_grad = nullptr,
                                       const IncompressibleForcing& forcing = nullptr,
                                       Exec exec = Exec::Parallel);

double stable_dt_incompressible(const IncompressibleState& s,
                                const BackgroundDeformation& fbar,
                                const Grid& g, double cfl,
                                Exec exec = Exec::Parallel);

struct IncompressibleTrajectory {
  std::vector<IncompressibleState> outputs;
  std::vector<double> output_times;
  std::vector<double> div_u_history;  // |div u|_0 at every recorded output
  IncompressibleState final_state;
  double dt = 0.0;
  int steps = 0;
  bool aborted = false;
  std::string abort_reason;
};

// Same one-step scheme as the compressible integrator, with the projection
// applied inside every stage evaluation and boundary enforcement per stage.
IncompressibleTrajectory integrate_incompressible(
    const IncompressibleState& state0, const CompressibleConfig& cfg,
    const BackgroundDeformation& fbar, const Grid& g,
    const IncompressibleForcing& forcing = nullptr, Exec exec = Exec::Parallel);

void enforce_boundary_incompressible(IncompressibleState& s, const Grid& g);

}  // namespace machlimit
