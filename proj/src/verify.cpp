#include "machlimit/verify.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "machlimit/compressible.hpp"
#include "machlimit/diagnostics.hpp"
#include "machlimit/initial_data.hpp"
#include "machlimit/mms.hpp"
#include "machlimit/ops.hpp"
#include "machlimit/projection.hpp"
#include "machlimit/reduce.hpp"
#include "machlimit/sweep.hpp"
#include "machlimit/wavepacket.hpp"

namespace machlimit {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

Grid square_grid(int n) {
  Grid g;
  g.n1 = n;
  g.n3 = n;
  return g;
}

State stratified_state(const Grid& g, double eps, double amp) {
  State s(g, eps);
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i) {
      const double r = (g.x3(j3) + 0.5 * g.L3) / (0.3 * g.L3);
      s.S(i, j3) = std::fabs(r) < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
    }
  enforce_boundary(s, g);
  return s;
}

// Closed-form smooth velocity-class field (grid-independent continuum field).
VectorField trig_velocity(const Grid& g, int variant) {
  VectorField X(g);
  const double k = 2.0 * M_PI / g.L1, kz = M_PI / g.L3;
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int i = 0; i < g.n1; ++i) {
      const double x = g.x1(i), s = g.x3(j3) + g.L3;
      X[0](i, j3) = std::cos(k * x + 0.3 * variant) * std::cos(kz * s) +
                    0.5 * std::cos(2 * k * x) * std::cos(2 * kz * s);
      X[1](i, j3) = std::sin(k * x + 0.1 * variant) * std::sin(kz * s) +
                    0.4 * std::sin(2 * k * x + 0.5) * std::sin(2 * kz * s);
    }
  return X;
}

struct RefinementResiduals {
  std::vector<double> h;
  std::vector<double> div0, divT;       // constraint residual at t=0 and t=T
  std::vector<double> wave, commutator, commutator_neg;
};

// One ladder of ill-prepared runs shared by the constraint, commutator and
// wave-equation criteria.
RefinementResiduals refinement_study(const std::vector<int>& grids, double eps,
                                     double T) {
  EquationOfState eos;
  auto fbar = BackgroundDeformation::defaults(2);
  DataParams data;
  data.N0 = 0.4;
  data.amp_u = 0.5;
  data.amp_q = 0.5;
  data.amp_F = 0.25;

  RefinementResiduals out;
  for (int n : grids) {
    Grid g = square_grid(n);
    State s0 = make_initial_data(Preparedness::Ill, g, eos, fbar, eps, 99, data);
    out.div0.push_back(constraint_residuals(s0, eos, fbar, g).divF_max);

    CompressibleConfig cfg;
    cfg.t_end = T;
    cfg.snapshot_stride = 1 << 30;
    Trajectory tr = integrate(s0, cfg, eos, fbar, g);
    if (tr.aborted)
      throw IntegratorError("refinement run aborted: " + tr.abort_reason, 0.0);
    out.divT.push_back(constraint_residuals(tr.final_state, eos, fbar, g).divF_max);
    TrajWindow w = tr.window();
    out.wave.push_back(wave_residual(w, eos, fbar, g));
    auto com = commutator_residual(w, fbar, g, 1.0);
    auto neg = commutator_residual(w, fbar, g, 2.0);
    out.commutator.push_back(std::max(com[0], com[1]));
    out.commutator_neg.push_back(std::max(neg[0], neg[1]));
    out.h.push_back(g.h3());
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::string fmt_f(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << v;
  return os.str();
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt) {
  (void)opt;
  std::vector<CriterionResult> results;
  EquationOfState eos;
  auto fbar2 = BackgroundDeformation::defaults(2);

  // Shared heavy artifacts.
  Trajectory equilibrium_traj;
  {
    // 1. Equilibrium preservation: 64x64, eps = 0.5, 1000 steps.
    Timer timer;
    Grid g = square_grid(64);
    State s0 = stratified_state(g, 0.5, 0.5);
    CompressibleConfig cfg;
    const double dt = stable_dt(s0, eos, g, cfg.cfl, &fbar2);
    cfg.t_end = 1000.0 * dt;
    cfg.snapshot_stride = 100;
    equilibrium_traj = integrate(s0, cfg, eos, fbar2, g);

    double drift = max_pointwise_diff(equilibrium_traj.final_state.q, s0.q, g);
    drift = std::max(drift, max_pointwise_diff(equilibrium_traj.final_state.S, s0.S, g));
    for (int d = 0; d < 2; ++d) {
      drift = std::max(drift,
                       max_pointwise_diff(equilibrium_traj.final_state.u[d], s0.u[d], g));
      for (int j = 0; j < 2; ++j)
        drift = std::max(drift, max_pointwise_diff(equilibrium_traj.final_state.F[j][d],
                                                   s0.F[j][d], g));
    }
    double e0_drift = 0.0, w0_max = 0.0;
    for (const auto& r : equilibrium_traj.reports) {
      e0_drift = std::max(e0_drift,
                          std::fabs(r.E0 - equilibrium_traj.reports.front().E0));
      w0_max = std::max(w0_max, r.W0);
    }
    const bool pass = !equilibrium_traj.aborted && drift <= 1e-10 &&
                      e0_drift <= 1e-10 && w0_max <= 1e-10;
    results.push_back({1, "equilibrium preservation", pass,
                       "drift=" + fmt(drift) + " dE0=" + fmt(e0_drift) +
                           " W0=" + fmt(w0_max),
                       timer.seconds()});
  }

  {
    // 2. MMS order for both solvers on 32/64/128.
    Timer timer;
    MmsOrderResult rc = mms_order_compressible({32, 64, 128}, 0.25, 0.8, 0.4);
    MmsOrderResult ri = mms_order_incompressible({32, 64, 128}, 0.25, 0.4);
    const bool pass = rc.observed_order >= 1.7 && rc.observed_order <= 2.3 &&
                      ri.observed_order >= 1.7 && ri.observed_order <= 2.3;
    results.push_back({2, "manufactured-solution order",
                       pass,
                       "compressible=" + fmt_f(rc.observed_order) +
                           " incompressible=" + fmt_f(ri.observed_order),
                       timer.seconds()});
  }

  RefinementResiduals refine;
  {
    // 3. Constraint propagation under refinement.
    Timer timer;
    refine = refinement_study({32, 64, 128}, 0.4, 0.5);
    // Fit C on the coarsest grid, check the bound on the finer ones, and the
    // decay order across the ladder.
    const double C = (refine.divT[0] - refine.div0[0]) / (refine.h[0] * refine.h[0]);
    bool bound_ok = true;
    for (std::size_t k = 0; k < refine.h.size(); ++k)
      bound_ok = bound_ok &&
                 refine.divT[k] <= 10.0 * (refine.div0[k] +
                                           std::max(C, 0.0) * refine.h[k] * refine.h[k]);
    FitResult fit = fit_loglog(refine.h, refine.divT);
    const bool pass = bound_ok && fit.slope >= 1.8;
    results.push_back({3, "divergence-constraint propagation", pass,
                       "order=" + fmt_f(fit.slope) + " r(T)=" + fmt(refine.divT.back()) +
                           " bound=" + (bound_ok ? "ok" : "violated"),
                       timer.seconds()});
  }

  {
    // 4. Commutator identity and its negative control.
    Timer timer;
    FitResult fit = fit_loglog(refine.h, refine.commutator);
    const double neg_ratio = refine.commutator_neg.back() /
                             std::max(refine.commutator.back(), 1e-300);
    const bool neg_flat =
        refine.commutator_neg.back() >= 0.5 * refine.commutator_neg.front();
    const bool pass = fit.slope >= 1.8 && neg_ratio >= 10.0 && neg_flat;
    results.push_back({4, "entropy-direction commutator", pass,
                       "order=" + fmt_f(fit.slope) +
                           " control/identity=" + fmt(neg_ratio),
                       timer.seconds()});
  }

  {
    // 5. Wave-equation consistency.
    Timer timer;
    FitResult fit = fit_loglog(refine.h, refine.wave);
    Grid g = square_grid(64);
    const double eq_resid =
        wave_residual(equilibrium_traj.window(), eos, fbar2, g);
    const bool pass = fit.slope >= 1.8 && eq_resid <= 1e-10;
    results.push_back({5, "pressure wave-equation residual", pass,
                       "order=" + fmt_f(fit.slope) + " equilibrium=" + fmt(eq_resid),
                       timer.seconds()});
  }

  SweepResult ill_sweep;
  SweepConfig ill_cfg;
  {
    // 6. Uniformity in eps for ill-prepared data.
    Timer timer;
    ill_cfg.eps_list = {0.4, 0.2, 0.1, 0.05};
    ill_cfg.prepared = Preparedness::Ill;
    ill_cfg.grid = square_grid(64);
    ill_cfg.T = 0.5;
    ill_cfg.n_out = 64;
    ill_cfg.seed = 2024;
    ill_sweep = mach_sweep(ill_cfg);
    const bool pass = !ill_sweep.any_aborted &&
                      std::fabs(ill_sweep.e0w0_slope.slope) <= 0.2;
    results.push_back({6, "uniform-in-eps energy (ill-prepared)", pass,
                       "slope=" + fmt_f(ill_sweep.e0w0_slope.slope) +
                           " residual=" + fmt_f(ill_sweep.e0w0_slope.residual),
                       timer.seconds()});
  }

  {
    // 7. Well-prepared limit rate.
    Timer timer;
    SweepConfig cfg;
    cfg.eps_list = {0.2, 0.1, 0.05, 0.025};
    cfg.prepared = Preparedness::Well;
    cfg.grid = square_grid(64);
    cfg.T = 0.25;
    cfg.n_out = 32;
    cfg.seed = 2024;
    SweepResult sw = mach_sweep(cfg);
    const bool pass = !sw.any_aborted && sw.udiff_slope.slope >= 0.8;
    results.push_back({7, "well-prepared limit rate", pass,
                       "slope=" + fmt_f(sw.udiff_slope.slope) +
                           " |u-u0|(eps_min)=" + fmt(sw.runs.back().udiff_linf_l2),
                       timer.seconds()});
  }

  {
    // 8. Ill-prepared filtered limit: local time means decay, oscillation
    // amplitude persists.
    Timer timer;
    bool mono_q = true, mono_div = true;
    const auto& runs = ill_sweep.runs;
    for (std::size_t k = 1; k < runs.size(); ++k) {
      mono_q = mono_q && runs[k].q_mean_field_loc <= 1.1 * runs[k - 1].q_mean_field_loc;
      mono_div = mono_div &&
                 runs[k].divu_mean_field_loc <= 1.1 * runs[k - 1].divu_mean_field_loc;
    }
    mono_q = mono_q && runs.back().q_mean_field_loc < runs.front().q_mean_field_loc;
    mono_div =
        mono_div && runs.back().divu_mean_field_loc < runs.front().divu_mean_field_loc;
    double sup_min = runs.front().q_linf_l2, sup_max = runs.front().q_linf_l2;
    for (const auto& r : runs) {
      sup_min = std::min(sup_min, r.q_linf_l2);
      sup_max = std::max(sup_max, r.q_linf_l2);
    }
    const bool factor2 = sup_max < 2.0 * sup_min;
    const bool pass = !ill_sweep.any_aborted && mono_q && mono_div && factor2;
    results.push_back({8, "filtered limit (acoustic averaging)", pass,
                       std::string("mean-q ") + (mono_q ? "down" : "NOT down") +
                           ", mean-divu " + (mono_div ? "down" : "NOT down") +
                           ", sup-ratio=" + fmt_f(sup_max / sup_min),
                       timer.seconds()});
  }

  {
    // 9. Projector and w0 algebra.
    Timer timer;
    Grid g = square_grid(64);
    PoissonSolver solver(g);
    VectorField X = trig_velocity(g, 1);
    ProjectionResult pr = leray_project(X, g, solver);
    ProjectionResult pr2 = leray_project(pr.P, g, solver);
    double idem = 0.0;
    for (int d = 0; d < 2; ++d)
      idem = std::max(idem, max_pointwise_diff(pr2.P[d], pr.P[d], g));
    const double xnorm = std::sqrt(l2_sq(X, g));
    const double ortho = std::fabs(inner(pr.P, pr.Q, g));

    // w0 defining residuals under refinement against closed-form data.
    std::vector<double> hs, divs, curls;
    for (int n : {32, 64, 128}) {
      Grid gn = square_grid(n);
      PoissonSolver sn(gn);
      VectorField u = trig_velocity(gn, 2);
      ScalarField rho0(gn);
      for (int j3 = 0; j3 < gn.nodes3(); ++j3)
        for (int i = 0; i < gn.n1; ++i)
          rho0(i, j3) = std::exp(
              -0.4 * std::cos(M_PI * (gn.x3(j3) + gn.L3) / gn.L3) / eos.gamma);
      W0Result w0 = construct_w0(u, rho0, gn, sn);
      hs.push_back(gn.h3());
      divs.push_back(w0.div_residual);
      curls.push_back(w0.curl_mismatch);
    }
    FitResult fit_div = fit_loglog(hs, divs);
    FitResult fit_curl = fit_loglog(hs, curls);
    const double Cd = divs[0] / (hs[0] * hs[0]);
    const double Cc = curls[0] / (hs[0] * hs[0]);
    bool bound_ok = true;
    for (std::size_t k = 0; k < hs.size(); ++k)
      bound_ok = bound_ok && divs[k] <= 1.5 * Cd * hs[k] * hs[k] &&
                 curls[k] <= 1.5 * Cc * hs[k] * hs[k];

    const bool pass = idem <= 1e-9 * xnorm && ortho <= 1e-10 * xnorm * xnorm &&
                      fit_div.slope >= 1.8 && fit_curl.slope >= 1.8 && bound_ok;
    results.push_back({9, "projector and w0 algebra", pass,
                       "idem=" + fmt(idem / xnorm) + " ortho=" +
                           fmt(ortho / (xnorm * xnorm)) + " w0 orders=" +
                           fmt_f(fit_div.slope) + "/" + fmt_f(fit_curl.slope),
                       timer.seconds()});
  }

  {
    // 10. Wave-packet transform: isometry and frequency localization.
    Timer timer;
    const double eps = 0.05;
    const double width = 0.5;
    const int n_s = 2048;
    const double s_min = -2.0, s_max = 2.0;
    const double ds = (s_max - s_min) / (n_s - 1);
    auto bump = [&](double s) {
      const double r = s / width;
      return std::fabs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
    };
    std::vector<double> v(n_s);
    for (int m = 0; m < n_s; ++m) v[m] = bump(s_min + m * ds);

    WavePacketGrid wg;
    wg.t_min = -2.0;
    wg.t_max = 2.0;
    wg.n_t = 160;
    wg.tau_min = -3.0;
    wg.tau_max = 3.0;
    wg.n_tau = 240;
    WavePacketTransform W = wave_packet_transform(v, s_min, ds, eps, wg);
    const double ratio =
        std::sqrt(transform_l2_sq(W) / signal_l2_sq(v, ds));

    // cos(w0 s / eps) * bump localizes at tau = +-w0.
    const double w0 = 2.0;
    std::vector<double> vc(n_s);
    for (int m = 0; m < n_s; ++m) {
      const double s = s_min + m * ds;
      vc[m] = std::cos(w0 * s / eps) * bump(s);
    }
    WavePacketGrid wg2 = wg;
    wg2.tau_min = -4.0;
    wg2.tau_max = 4.0;
    wg2.n_tau = 320;
    WavePacketTransform Wc = wave_packet_transform(vc, s_min, ds, eps, wg2);
    const int kt_center = wg2.n_t / 2;
    int argmax = 0;
    double best = -1.0;
    for (int m = 0; m < wg2.n_tau; ++m) {
      const double mag =
          Wc.magnitude[static_cast<std::size_t>(m) +
                       static_cast<std::size_t>(wg2.n_tau) * kt_center];
      if (mag > best) {
        best = mag;
        argmax = m;
      }
    }
    const double tau_peak = std::fabs(wg2.tau(argmax));
    const double cell = wg2.dtau();

    // Linearity of the transform.
    std::vector<double> vsum(n_s);
    for (int m = 0; m < n_s; ++m) vsum[m] = 2.0 * v[m] - 0.5 * vc[m];
    WavePacketTransform Wa = wave_packet_transform(v, s_min, ds, eps, wg2);
    WavePacketTransform Wb = wave_packet_transform(vsum, s_min, ds, eps, wg2);
    double lin_err = 0.0, lin_scale = 0.0;
    for (std::size_t k = 0; k < Wb.values.size(); ++k) {
      lin_err = std::max(lin_err,
                         std::abs(Wb.values[k] - (2.0 * Wa.values[k] -
                                                  0.5 * Wc.values[k])));
      lin_scale = std::max(lin_scale, std::abs(Wb.values[k]));
    }

    const bool pass = std::fabs(ratio - 1.0) <= 1e-3 &&
                      std::fabs(tau_peak - w0) <= cell &&
                      lin_err <= 1e-12 * std::max(lin_scale, 1.0);
    results.push_back({10, "wave-packet transform", pass,
                       "isometry=" + fmt_f(ratio) + " peak_tau=" + fmt_f(tau_peak) +
                           " (cell " + fmt_f(cell) + ")",
                       timer.seconds()});
  }

  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

void print_results(const std::vector<CriterionResult>& results, std::ostream& os) {
  for (const auto& r : results) {
    os << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.name
       << "  [" << r.details << "]  (" << fmt_f(r.seconds) << "s)\n";
  }
}

}  // namespace machlimit
