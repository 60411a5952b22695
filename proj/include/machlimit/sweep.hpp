#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "machlimit/compressible.hpp"
#include "machlimit/incompressible.hpp"
#include "machlimit/initial_data.hpp"

namespace machlimit {

struct SweepConfig {
  std::vector<double> eps_list;  // strictly decreasing, in (0, 1]
  Preparedness prepared = Preparedness::Ill;
  Grid grid;
  EquationOfState eos;
  BackgroundDeformation fbar = BackgroundDeformation::defaults(2);
  double cfl = 0.4;
  double T = 0.5;            // metric window; runs integrate to T
  int n_out = 64;            // common output instants k*T/n_out
  unsigned long long seed = 1234;
  double locality_radius = -1.0;  // < 0 picks the default L3/4
  DataParams data;
  int snapshot_stride = 16;
  int history_depth = 5;
  bool clean_F = false;

  double resolved_locality() const {
    return locality_radius > 0.0 ? locality_radius : grid.L3 / 4.0;
  }
  void validate() const;
};

// Limit metrics of one epsilon-run against the incompressible reference.
// The locality ball B sits mid-slab with the configured radius.  Local
// time-mean field norms are the slab surrogate for the filtered limit: the
// L2-in-time norms of the oscillatory quantities cannot decay in a bounded
// slab, their time means do.
struct RunMetrics {
  double eps = 0.0;
  bool aborted = false;
  std::string abort_reason;

  double sup_E0 = 0.0;
  double sup_W0 = 0.0;
  double sup_E0W0 = 0.0;

  double q_linf_l2 = 0.0;        // sup_t |q(t)|_0
  double q_l2t_l2_loc = 0.0;     // L2 in time of |q|_{L2(B)}
  double divu_l2t_l2_loc = 0.0;
  double Qu_l2t_l2_loc = 0.0;
  double q_mean_field_loc = 0.0;     // |time-mean of q|_{L2(B)}
  double divu_mean_field_loc = 0.0;
  double udiff_linf_l2 = 0.0;    // sup_t |u_eps - u0|_0
  double udiff_l2t_l2 = 0.0;
  double osc_amplitude = 0.0;    // max_t |q|_0 - mean_t |q|_0
};

struct FitResult {
  double slope = 0.0;
  double residual = 0.0;  // rms residual of the log-log fit
};

struct SweepResult {
  std::vector<RunMetrics> runs;
  std::vector<std::vector<EnergyReport>> energy_series;  // parallel to runs
  FitResult udiff_slope;   // log |u_eps - u0|_{LinfL2} vs log eps
  FitResult e0w0_slope;    // log sup_t(E0+W0) vs log eps
  std::string run_hash;
  bool any_aborted = false;
};

RunMetrics convergence_metrics(const Trajectory& comp,
                               const IncompressibleTrajectory& inc,
                               const Grid& g, double locality_radius,
                               Exec exec = Exec::Parallel);

// Integrates the compressible system for every epsilon (independent runs,
// parallelized over the list) and the incompressible reference once, with
// the limit data of the construction: u0 = construct_w0 of the common
// velocity profile, F and varrho built with rho(0, S0).
SweepResult mach_sweep(const SweepConfig& cfg, Exec exec = Exec::Parallel);

// sweep_summary.json, per-eps energy CSVs, and a plot-ready metrics CSV with
// precomputed log-log columns.
void emit_reports(const SweepResult& result, const SweepConfig& cfg,
                  const std::filesystem::path& out_dir);

FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

std::string fnv64_hex(const std::string& payload);

}  // namespace machlimit
