#include "machlimit/compressible.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "machlimit/ops.hpp"
#include "machlimit/poisson.hpp"
#include "machlimit/projection.hpp"
#include "machlimit/reduce.hpp"

namespace machlimit {

StateDeriv rhs(const State& s, const EquationOfState& eos,
               const BackgroundDeformation& fbar, const Grid& g, Exec exec) {
  const double eps = s.eps;
  EosFields ef = eos_eval(eos, s.q, s.S, eps, g, exec);

  StateDeriv d(g);
  VectorField gq = ops::grad(s.q, g, ops::WallRule::OneSided, exec);
  VectorField gS = ops::grad(s.S, g, ops::WallRule::OneSided, exec);
  ScalarField divu = ops::div(s.u, g, ops::WallRule::OneSided, exec);

  std::array<VectorField, 3> gu;  // gradient of each velocity component
  for (int c = 0; c < g.dim; ++c)
    gu[c] = ops::grad(s.u[c], g, ops::WallRule::OneSided, exec);

  // gF[j][c] = grad of component c of column j.
  std::array<std::array<VectorField, 3>, 3> gF;
  for (int j = 0; j < g.dim; ++j)
    for (int c = 0; c < g.dim; ++c)
      gF[j][c] = ops::grad(s.F[j][c], g, ops::WallRule::OneSided, exec);

  const int dim = g.dim;
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    double uc[3] = {0, 0, 0};
    for (int c = 0; c < dim; ++c) uc[c] = s.u[c](i, j2, j3);

    // d_t q = -u.grad q - (eps a)^{-1} div u
    double adv_q = 0.0;
    for (int c = 0; c < dim; ++c) adv_q += uc[c] * gq[c](i, j2, j3);
    d.q(i, j2, j3) = -adv_q - divu(i, j2, j3) / (eps * ef.a(i, j2, j3));

    // d_t S = -u.grad S
    double adv_S = 0.0;
    for (int c = 0; c < dim; ++c) adv_S += uc[c] * gS[c](i, j2, j3);
    d.S(i, j2, j3) = -adv_S;

    // columns f_j = F_j + Fbar_j at this node
    double fj[3][3];
    for (int j = 0; j < dim; ++j)
      for (int c = 0; c < dim; ++c)
        fj[j][c] = s.F[j][c](i, j2, j3) + fbar(c, j);

    // d_t u_c = -u.grad u_c - (eps rho)^{-1} d_c q + sum_j f_j.grad F_jc
    const double iepsrho = 1.0 / (eps * ef.rho(i, j2, j3));
    for (int c = 0; c < dim; ++c) {
      double adv = 0.0;
      for (int b = 0; b < dim; ++b) adv += uc[b] * gu[c][b](i, j2, j3);
      double elastic = 0.0;
      for (int j = 0; j < dim; ++j)
        for (int b = 0; b < dim; ++b) elastic += fj[j][b] * gF[j][c][b](i, j2, j3);
      d.u[c](i, j2, j3) = -adv - iepsrho * gq[c](i, j2, j3) + elastic;
    }

    // d_t F_jc = -u.grad F_jc + f_j.grad u_c
    for (int j = 0; j < dim; ++j)
      for (int c = 0; c < dim; ++c) {
        double adv = 0.0, stretch = 0.0;
        for (int b = 0; b < dim; ++b) {
          adv += uc[b] * gF[j][c][b](i, j2, j3);
          stretch += fj[j][b] * gu[c][b](i, j2, j3);
        }
        d.F[j][c](i, j2, j3) = -adv + stretch;
      }
  });
  return d;
}

double stable_dt(const State& s, const EquationOfState& eos, const Grid& g,
                 double cfl, const BackgroundDeformation* fbar, Exec exec) {
  EosFields ef = eos_eval(eos, s.q, s.S, s.eps, g, exec);
  const double c_max = max_nodes(g, exec, [&](int i, int j2, int j3) {
    double usq = 0.0;
    for (int c = 0; c < g.dim; ++c) {
      const double v = s.u[c](i, j2, j3);
      usq += v * v;
    }
    // Frobenius norm of the total deformation columns.
    double fsq = 0.0;
    for (int j = 0; j < g.dim; ++j)
      for (int c = 0; c < g.dim; ++c) {
        const double v = s.F[j][c](i, j2, j3) + (fbar ? (*fbar)(c, j) : 0.0);
        fsq += v * v;
      }
    const double ac = 1.0 / (s.eps * std::sqrt(ef.a(i, j2, j3) * ef.rho(i, j2, j3)));
    return std::sqrt(usq) + std::sqrt(fsq) + ac;
  });
  if (!std::isfinite(c_max) || c_max <= 0.0)
    throw IntegratorError("stable_dt: nonfinite wave speed", s.t);
  return cfl * g.h_min() / c_max;
}

namespace {

void state_stage(State& out, const State& base, const StateDeriv& k, double a,
                 const Grid& g, Exec exec) {
  out.eps = base.eps;
  out.t = base.t;
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    out.q(i, j2, j3) = base.q(i, j2, j3) + a * k.q(i, j2, j3);
    out.S(i, j2, j3) = base.S(i, j2, j3) + a * k.S(i, j2, j3);
    for (int c = 0; c < g.dim; ++c) {
      out.u[c](i, j2, j3) = base.u[c](i, j2, j3) + a * k.u[c](i, j2, j3);
      for (int j = 0; j < g.dim; ++j)
        out.F[j][c](i, j2, j3) = base.F[j][c](i, j2, j3) + a * k.F[j][c](i, j2, j3);
    }
  });
}

void rk4_combine(State& s, const StateDeriv& k1, const StateDeriv& k2,
                 const StateDeriv& k3, const StateDeriv& k4, double dt,
                 const Grid& g, Exec exec) {
  const double c = dt / 6.0;
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    s.q(i, j2, j3) += c * (k1.q(i, j2, j3) + 2.0 * k2.q(i, j2, j3) +
                           2.0 * k3.q(i, j2, j3) + k4.q(i, j2, j3));
    s.S(i, j2, j3) += c * (k1.S(i, j2, j3) + 2.0 * k2.S(i, j2, j3) +
                           2.0 * k3.S(i, j2, j3) + k4.S(i, j2, j3));
    for (int d = 0; d < g.dim; ++d) {
      s.u[d](i, j2, j3) += c * (k1.u[d](i, j2, j3) + 2.0 * k2.u[d](i, j2, j3) +
                                2.0 * k3.u[d](i, j2, j3) + k4.u[d](i, j2, j3));
      for (int j = 0; j < g.dim; ++j)
        s.F[j][d](i, j2, j3) +=
            c * (k1.F[j][d](i, j2, j3) + 2.0 * k2.F[j][d](i, j2, j3) +
                 2.0 * k3.F[j][d](i, j2, j3) + k4.F[j][d](i, j2, j3));
    }
  });
}

// Projection cleanup of the deformation columns: restores div(rho f_j) = 0
// without touching the curl part.  Optional rescue knob for long runs.
void clean_columns(State& s, const EquationOfState& eos,
                   const BackgroundDeformation& fbar, const Grid& g,
                   PoissonSolver& solver, Exec exec) {
  EosFields ef = eos_eval(eos, s.q, s.S, s.eps, g, exec);
  ScalarField ones(g);
  ones.fill(1.0);
  for (int j = 0; j < g.dim; ++j) {
    VectorField V(g);
    for (int c = 0; c < g.dim; ++c)
      for_each_node(g, exec, [&](int i, int j2, int j3) {
        V[c](i, j2, j3) =
            ef.rho(i, j2, j3) * (s.F[j][c](i, j2, j3) + fbar(c, j));
      });
    ProjectionResult pr = project_weighted(V, ones, g, solver, 1e-10, 200, exec);
    for (int c = 0; c < g.dim; ++c)
      for_each_node(g, exec, [&](int i, int j2, int j3) {
        s.F[j][c](i, j2, j3) = pr.P[c](i, j2, j3) / ef.rho(i, j2, j3) - fbar(c, j);
      });
  }
}

}  // namespace

std::array<double, 3> compatibility_residuals(const State& s,
                                              const EquationOfState& eos,
                                              const BackgroundDeformation& fbar,
                                              const Grid& g, Exec exec) {
  std::array<double, 3> r{};
  r[0] = wall_trace_max(s.u, g);
  StateDeriv d1 = rhs(s, eos, fbar, g, exec);
  r[1] = wall_trace_max(d1.u, g);
  // d_t^2 u3 by chaining: finite difference of the rhs along the flow.
  const double delta = 1e-6;
  State sp(g, s.eps);
  state_stage(sp, s, d1, delta, g, exec);
  sp.t = s.t + delta;
  StateDeriv d2 = rhs(sp, eos, fbar, g, exec);
  VectorField ddt_u(g);
  for (int c = 0; c < g.dim; ++c)
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      ddt_u[c](i, j2, j3) = (d2.u[c](i, j2, j3) - d1.u[c](i, j2, j3)) / delta;
    });
  r[2] = wall_trace_max(ddt_u, g);
  return r;
}

TrajWindow Trajectory::window() const {
  TrajWindow w;
  w.dt = dt;
  for (const State& s : ring) w.states.push_back(&s);
  return w;
}

Trajectory integrate(const State& state0, const CompressibleConfig& cfg,
                     const EquationOfState& eos,
                     const BackgroundDeformation& fbar, const Grid& g,
                     const Forcing& forcing, Exec exec) {
  cfg.validate();
  fbar.validate();

  Trajectory traj;
  State s = state0;
  enforce_boundary(s, g, exec);

  {
    auto compat = compatibility_residuals(s, eos, fbar, g, exec);
    const double tol = 1e-6;
    if (compat[0] > tol || compat[1] > tol || compat[2] > tol) {
      std::ostringstream w;
      w << "compatibility residuals at t=0 exceed " << tol << ": |u3|="
        << compat[0] << " |dt u3|=" << compat[1] << " |dt2 u3|=" << compat[2];
      traj.warnings.push_back(w.str());
    }
  }

  double dt = stable_dt(s, eos, g, cfg.cfl, &fbar, exec);
  std::vector<double> out_times;
  if (cfg.n_out > 0) {
    const double delta = cfg.t_end / cfg.n_out;
    dt = delta / std::ceil(delta / dt - 1e-12);
    for (int k = 1; k <= cfg.n_out; ++k) out_times.push_back(k * delta);
  }
  const long n_steps = static_cast<long>(std::ceil(cfg.t_end / dt - 1e-9));
  traj.dt = dt;

  const double u0_max = std::max(max_abs(s.u, g, exec), 1.0);
  const double u_limit = cfg.instability_factor * u0_max;

  std::deque<State> ring;
  ring.push_back(s);

  std::unique_ptr<PoissonSolver> cleaner;
  if (cfg.clean_F) cleaner = std::make_unique<PoissonSolver>(g);

  State stage(g, s.eps);
  traj.outputs.push_back(s);
  traj.output_times.push_back(s.t);
  std::size_t next_out = 0;

  auto window_of = [&](void) {
    TrajWindow w;
    w.dt = dt;
    for (const State& st : ring) w.states.push_back(&st);
    return w;
  };
  traj.reports.push_back(energy_suite(window_of(), eos, fbar, g, exec));

  for (long step = 1; step <= n_steps; ++step) {
    const double t0 = s.t;
    try {
      StateDeriv k1 = rhs(s, eos, fbar, g, exec);
      if (forcing) forcing(t0, k1);
      state_stage(stage, s, k1, 0.5 * dt, g, exec);
      enforce_boundary(stage, g, exec);

      StateDeriv k2 = rhs(stage, eos, fbar, g, exec);
      if (forcing) forcing(t0 + 0.5 * dt, k2);
      state_stage(stage, s, k2, 0.5 * dt, g, exec);
      enforce_boundary(stage, g, exec);

      StateDeriv k3 = rhs(stage, eos, fbar, g, exec);
      if (forcing) forcing(t0 + 0.5 * dt, k3);
      state_stage(stage, s, k3, dt, g, exec);
      enforce_boundary(stage, g, exec);

      StateDeriv k4 = rhs(stage, eos, fbar, g, exec);
      if (forcing) forcing(t0 + dt, k4);

      rk4_combine(s, k1, k2, k3, k4, dt, g, exec);
      enforce_boundary(s, g, exec);
      s.t = t0 + dt;
    } catch (const EosDomainError& e) {
      traj.aborted = true;
      traj.abort_reason = std::string(e.what()) + " (last good t=" +
                          std::to_string(t0) + ")";
      break;
    }

    if (!all_finite(s, g)) {
      traj.aborted = true;
      traj.abort_reason =
          "nonfinite field values (last good t=" + std::to_string(t0) + ")";
      break;
    }
    if (max_abs(s.u, g, exec) > u_limit) {
      traj.aborted = true;
      traj.abort_reason =
          "instability detector tripped: |u|_inf > " +
          std::to_string(cfg.instability_factor) + " x initial (t=" +
          std::to_string(s.t) + ")";
      break;
    }

    if (cfg.clean_F && cleaner && step % cfg.clean_interval == 0)
      clean_columns(s, eos, fbar, g, *cleaner, exec);

    ring.push_back(s);
    if (static_cast<int>(ring.size()) > cfg.history_depth) ring.pop_front();

    if (step % cfg.snapshot_stride == 0 || step == n_steps)
      traj.reports.push_back(energy_suite(window_of(), eos, fbar, g, exec));

    if (next_out < out_times.size() &&
        std::fabs(s.t - out_times[next_out]) < 0.25 * dt) {
      traj.outputs.push_back(s);
      traj.output_times.push_back(s.t);
      ++next_out;
    }
  }

  traj.ring.assign(ring.begin(), ring.end());
  traj.final_state = s;
  traj.steps = static_cast<int>(n_steps);
  return traj;
}

}  // namespace machlimit
