#pragma once

#include "machlimit/eos.hpp"
#include "machlimit/state.hpp"

namespace machlimit {

enum class Preparedness { Well, Ill };

// Knobs of the data factory.  N0 and sigma are the amplitude/width of the
// compactly supported entropy bump standing in for the far-field decay
// condition of the half-space problem; support stays strictly inside the slab.
struct DataParams {
  double N0 = 0.5;
  double sigma = 0.6;
  double amp_u = 1.0;
  double amp_q = 1.0;
  double amp_F = 0.3;
  int n_modes = 3;
};

// Deterministic initial data from a seed:
//  - S0: compact bump centered mid-slab, amplitude N0;
//  - u0: discretely divergence-free random trig sum with zero wall trace,
//    plus (ill mode) an O(1) gradient component;
//  - q0: zero (well) or an O(1) Neumann-compatible random field (ill);
//  - F0 columns built through a scalar potential solve so that
//    div(rho (F_j + Fbar_j)) vanishes discretely, with exactly zero
//    wall-normal traces.
// eps = 0 yields the limit data of the incompressible reference.
State make_initial_data(Preparedness mode, const Grid& g,
                        const EquationOfState& eos,
                        const BackgroundDeformation& fbar, double eps,
                        unsigned long long seed, const DataParams& params = {},
                        Exec exec = Exec::Parallel);

}  // namespace machlimit
