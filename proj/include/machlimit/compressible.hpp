#pragma once

#include <functional>
#include <string>
#include <vector>

#include "machlimit/diagnostics.hpp"
#include "machlimit/eos.hpp"
#include "machlimit/state.hpp"

namespace machlimit {

struct CompressibleConfig {
  double cfl = 0.4;
  double t_end = 1.0;
  double boundary_tolerance = 1e-12;
  int snapshot_stride = 16;  // diagnostics cadence, in steps
  int history_depth = 5;     // ring depth; >= 4 for third time derivatives
  double instability_factor = 1e3;
  bool clean_F = false;      // periodic projection cleanup of the F columns
  int clean_interval = 64;
  int n_out = 0;             // when > 0, dt is snapped so outputs at k*t_end/n_out are exact

  void validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must be in (0,1]");
    if (history_depth < 4) throw ConfigError("history_depth must be >= 4");
    if (t_end <= 0.0) throw ConfigError("t_end must be positive");
    if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
  }
};

// Time derivative of (q, u, F, S); same layout as the state.
struct StateDeriv {
  ScalarField q;
  VectorField u;
  TensorField F;
  ScalarField S;
  StateDeriv() = default;
  explicit StateDeriv(const Grid& g) : q(g), u(g), F(g), S(g) {}
};

// Extra source terms (manufactured-solution forcing); called with the stage
// time, adds into the derivative.
using Forcing = std::function<void(double t, StateDeriv& d)>;

// Right-hand side of the rescaled compressible system.  The divergence
// constraint div(rho(F_j+Fbar_j)) = 0 is not imposed here; it propagates from
// the data and is monitored by the diagnostics.
StateDeriv rhs(const State& s, const EquationOfState& eos,
               const BackgroundDeformation& fbar, const Grid& g,
               Exec exec = Exec::Parallel);

// Acoustic-dominated stable step: cfl * h_min / max(|u| + |F+Fbar|_F +
// 1/(eps sqrt(a rho))).  Without fbar the perturbation columns alone enter
// the elastic speed.
double stable_dt(const State& s, const EquationOfState& eos, const Grid& g,
                 double cfl, const BackgroundDeformation* fbar = nullptr,
                 Exec exec = Exec::Parallel);

struct Trajectory {
  std::vector<State> outputs;        // states at the exact output instants
  std::vector<double> output_times;
  std::vector<EnergyReport> reports;
  std::vector<std::string> warnings;
  State final_state;
  TrajWindow window() const;         // view over the retained ring
  std::vector<State> ring;           // last history_depth states, oldest first
  double dt = 0.0;
  int steps = 0;
  bool aborted = false;
  std::string abort_reason;
};

// Classical four-stage Runge-Kutta with boundary enforcement after every
// stage, fixed dt chosen from the initial state (and snapped to divide the
// output spacing when n_out > 0), deterministic for a given config.
Trajectory integrate(const State& state0, const CompressibleConfig& cfg,
                     const EquationOfState& eos,
                     const BackgroundDeformation& fbar, const Grid& g,
                     const Forcing& forcing = nullptr,
                     Exec exec = Exec::Parallel);

// Compatibility residuals max|d_t^k u3| at the walls for k = 0..2, evaluated
// by chaining the right-hand side; violations are reported, not fatal.
std::array<double, 3> compatibility_residuals(const State& s,
                                              const EquationOfState& eos,
                                              const BackgroundDeformation& fbar,
                                              const Grid& g,
                                              Exec exec = Exec::Parallel);

}  // namespace machlimit
