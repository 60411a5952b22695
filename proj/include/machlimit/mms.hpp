#pragma once

#include "machlimit/compressible.hpp"
#include "machlimit/incompressible.hpp"

namespace machlimit {

// Manufactured smooth solutions (2D) for both solvers.  Every field is a
// separable trig mode respecting the wall symmetry classes, so the boundary
// conditions hold exactly and all partial derivatives have closed forms.  The
// forcing algebra below is written directly from those closed forms and does
// not call the solver right-hand sides.

struct ManufacturedCompressible {
  double eps = 0.5;
  EquationOfState eos;
  BackgroundDeformation fbar;

  State state_at(double t, const Grid& g) const;
  Forcing forcing(const Grid& g) const;
  // Aggregate L2 error of all fields against the closed form at time t.
  double error_l2(const State& numeric, double t, const Grid& g) const;
};

struct ManufacturedIncompressible {
  BackgroundDeformation fbar;

  IncompressibleState state_at(double t, const Grid& g) const;
  IncompressibleForcing forcing(const Grid& g) const;
  double error_l2(const IncompressibleState& numeric, double t,
                  const Grid& g) const;
};

struct MmsOrderResult {
  std::vector<int> grids;
  std::vector<double> errors;
  double observed_order = 0.0;
};

// Runs the forced solver on a refinement ladder and fits the observed order.
MmsOrderResult mms_order_compressible(const std::vector<int>& grids,
                                      double t_end, double eps, double cfl,
                                      Exec exec = Exec::Parallel);
MmsOrderResult mms_order_incompressible(const std::vector<int>& grids,
                                        double t_end, double cfl,
                                        Exec exec = Exec::Parallel);

}  // namespace machlimit
