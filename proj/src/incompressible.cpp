#include "machlimit/incompressible.hpp"

#include <cmath>

#include "machlimit/ops.hpp"
#include "machlimit/projection.hpp"
#include "machlimit/reduce.hpp"

namespace machlimit {

void enforce_boundary_incompressible(IncompressibleState& s, const Grid& g) {
  const int last = g.nodes3() - 1;
  const int na = g.normal_axis();
  for (int j2 = 0; j2 < g.nodes2(); ++j2)
    for (int i = 0; i < g.nodes1(); ++i) {
      s.u[na](i, j2, 0) = 0.0;
      s.u[na](i, j2, last) = 0.0;
      for (int j = 0; j < g.dim; ++j) {
        s.F[j][na](i, j2, 0) = 0.0;
        s.F[j][na](i, j2, last) = 0.0;
      }
    }
  fill_ghosts_even(s.S, g);
  fill_ghosts_even(s.varrho, g);
  for (int d = 0; d < g.dim; ++d) {
    if (d == na)
      fill_ghosts_odd(s.u[d], g);
    else
      fill_ghosts_even(s.u[d], g);
    for (int j = 0; j < g.dim; ++j) {
      if (d == na)
        fill_ghosts_odd(s.F[j][d], g);
      else
        fill_ghosts_even(s.F[j][d], g);
    }
  }
}

IncompressibleDeriv rhs_incompressible(const IncompressibleState& s,
                                       const BackgroundDeformation& fbar,
                                       const Grid& g, PoissonSolver& solver,
                                       VectorField* pi_grad,
                                       const IncompressibleForcing& forcing,
                                       Exec exec) {
  IncompressibleDeriv d(g);

  VectorField gS = ops::grad(s.S, g, ops::WallRule::OneSided, exec);
  VectorField gr = ops::grad(s.varrho, g, ops::WallRule::OneSided, exec);
  std::array<VectorField, 3> gu;
  for (int c = 0; c < g.dim; ++c)
    gu[c] = ops::grad(s.u[c], g, ops::WallRule::OneSided, exec);
  std::array<std::array<VectorField, 3>, 3> gF;
  for (int j = 0; j < g.dim; ++j)
    for (int c = 0; c < g.dim; ++c)
      gF[j][c] = ops::grad(s.F[j][c], g, ops::WallRule::OneSided, exec);

  const int dim = g.dim;
  VectorField momentum(g);  // unprojected velocity right-hand side
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    double uc[3] = {0, 0, 0};
    for (int c = 0; c < dim; ++c) uc[c] = s.u[c](i, j2, j3);

    double fj[3][3];
    for (int j = 0; j < dim; ++j)
      for (int c = 0; c < dim; ++c)
        fj[j][c] = s.F[j][c](i, j2, j3) + fbar(c, j);

    for (int c = 0; c < dim; ++c) {
      double adv = 0.0, elastic = 0.0;
      for (int b = 0; b < dim; ++b) {
        adv += uc[b] * gu[c][b](i, j2, j3);
        for (int j = 0; j < dim; ++j) elastic += fj[j][b] * gF[j][c][b](i, j2, j3);
      }
      momentum[c](i, j2, j3) = -adv + elastic;
    }

    double advS = 0.0, advr = 0.0;
    for (int b = 0; b < dim; ++b) {
      advS += uc[b] * gS[b](i, j2, j3);
      advr += uc[b] * gr[b](i, j2, j3);
    }
    d.S(i, j2, j3) = -advS;
    d.varrho(i, j2, j3) = -advr;

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

  if (forcing) {
    IncompressibleDeriv extra(g);
    forcing(s.t, extra);
    for (int c = 0; c < dim; ++c) axpy(momentum[c], 1.0, extra.u[c]);
    axpy(d.S, 1.0, extra.S);
    axpy(d.varrho, 1.0, extra.varrho);
    for (int j = 0; j < dim; ++j)
      for (int c = 0; c < dim; ++c) axpy(d.F[j][c], 1.0, extra.F[j][c]);
  }

  // Weighted projection: momentum = d_t u + varrho^{-1} grad pi.
  ScalarField c(g);
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    const double r = s.varrho(i, j2, j3);
    if (!(r > 0.0)) c(i, j2, j3) = 0.0;
    else c(i, j2, j3) = 1.0 / r;
  });
  ProjectionResult pr = project_weighted(momentum, c, g, solver, 1e-10, 200, exec);
  d.u = std::move(pr.P);
  if (pi_grad) *pi_grad = std::move(pr.Q);
  return d;
}

double stable_dt_incompressible(const IncompressibleState& s,
                                const BackgroundDeformation& fbar,
                                const Grid& g, double cfl, Exec exec) {
  const double c_max = max_nodes(g, exec, [&](int i, int j2, int j3) {
    double usq = 0.0, fsq = 0.0;
    for (int c = 0; c < g.dim; ++c) {
      usq += s.u[c](i, j2, j3) * s.u[c](i, j2, j3);
      for (int j = 0; j < g.dim; ++j) {
        const double v = s.F[j][c](i, j2, j3) + fbar(c, j);
        fsq += v * v;
      }
    }
    return std::sqrt(usq) + std::sqrt(fsq);
  });
  if (!std::isfinite(c_max))
    throw IntegratorError("stable_dt_incompressible: nonfinite wave speed", s.t);
  return cfl * g.h_min() / std::max(c_max, 1e-3);
}

namespace {

void stage_state(IncompressibleState& out, const IncompressibleState& base,
                 const IncompressibleDeriv& k, double a, const Grid& g,
                 Exec exec) {
  out.t = base.t;
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    out.S(i, j2, j3) = base.S(i, j2, j3) + a * k.S(i, j2, j3);
    out.varrho(i, j2, j3) = base.varrho(i, j2, j3) + a * k.varrho(i, j2, j3);
    for (int c = 0; c < g.dim; ++c) {
      out.u[c](i, j2, j3) = base.u[c](i, j2, j3) + a * k.u[c](i, j2, j3);
      for (int j = 0; j < g.dim; ++j)
        out.F[j][c](i, j2, j3) = base.F[j][c](i, j2, j3) + a * k.F[j][c](i, j2, j3);
    }
  });
}

}  // namespace

IncompressibleTrajectory integrate_incompressible(
    const IncompressibleState& state0, const CompressibleConfig& cfg,
    const BackgroundDeformation& fbar, const Grid& g,
    const IncompressibleForcing& forcing, Exec exec) {
  cfg.validate();
  fbar.validate();
  PoissonSolver solver(g);

  IncompressibleTrajectory traj;
  IncompressibleState s = state0;
  enforce_boundary_incompressible(s, g);

  double dt = stable_dt_incompressible(s, fbar, g, cfg.cfl, exec);
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

  IncompressibleState stage(g);
  traj.outputs.push_back(s);
  traj.output_times.push_back(s.t);
  traj.div_u_history.push_back(
      std::sqrt(l2_sq(ops::div(s.u, g, ops::WallRule::Odd, exec), g, exec)));
  std::size_t next_out = 0;

  for (long step = 1; step <= n_steps; ++step) {
    const double t0 = s.t;
    try {
      IncompressibleDeriv k1 =
          rhs_incompressible(s, fbar, g, solver, &s.pi_grad, forcing, exec);
      stage_state(stage, s, k1, 0.5 * dt, g, exec);
      stage.t = t0 + 0.5 * dt;
      enforce_boundary_incompressible(stage, g);
      IncompressibleDeriv k2 =
          rhs_incompressible(stage, fbar, g, solver, nullptr, forcing, exec);
      stage_state(stage, s, k2, 0.5 * dt, g, exec);
      stage.t = t0 + 0.5 * dt;
      enforce_boundary_incompressible(stage, g);
      IncompressibleDeriv k3 =
          rhs_incompressible(stage, fbar, g, solver, nullptr, forcing, exec);
      stage_state(stage, s, k3, dt, g, exec);
      stage.t = t0 + dt;
      enforce_boundary_incompressible(stage, g);
      IncompressibleDeriv k4 =
          rhs_incompressible(stage, fbar, g, solver, nullptr, forcing, exec);

      const double c = dt / 6.0;
      for_each_node(g, exec, [&](int i, int j2, int j3) {
        s.S(i, j2, j3) += c * (k1.S(i, j2, j3) + 2 * k2.S(i, j2, j3) +
                               2 * k3.S(i, j2, j3) + k4.S(i, j2, j3));
        s.varrho(i, j2, j3) += c * (k1.varrho(i, j2, j3) + 2 * k2.varrho(i, j2, j3) +
                                    2 * k3.varrho(i, j2, j3) + k4.varrho(i, j2, j3));
        for (int d = 0; d < g.dim; ++d) {
          s.u[d](i, j2, j3) += c * (k1.u[d](i, j2, j3) + 2 * k2.u[d](i, j2, j3) +
                                    2 * k3.u[d](i, j2, j3) + k4.u[d](i, j2, j3));
          for (int j = 0; j < g.dim; ++j)
            s.F[j][d](i, j2, j3) +=
                c * (k1.F[j][d](i, j2, j3) + 2 * k2.F[j][d](i, j2, j3) +
                     2 * k3.F[j][d](i, j2, j3) + k4.F[j][d](i, j2, j3));
        }
      });
      s.t = t0 + dt;
      enforce_boundary_incompressible(s, g);

      // Per-step projection keeps the accumulated divergence at solver
      // tolerance (RK combination of projected stages is not exactly
      // projected).
      ScalarField ivr(g);
      for_each_node(g, exec, [&](int i, int j2, int j3) {
        ivr(i, j2, j3) = 1.0 / s.varrho(i, j2, j3);
      });
      ProjectionResult pru = project_weighted(s.u, ivr, g, solver, 1e-10, 200, exec);
      s.u = std::move(pru.P);
      enforce_boundary_incompressible(s, g);
    } catch (const SolverError& e) {
      traj.aborted = true;
      traj.abort_reason = std::string(e.what()) + " (last good t=" +
                          std::to_string(t0) + ")";
      break;
    }

    if (!all_finite(s.u, g) || !all_finite(s.S, g) || !all_finite(s.varrho, g)) {
      traj.aborted = true;
      traj.abort_reason =
          "nonfinite field values (last good t=" + std::to_string(t0) + ")";
      break;
    }
    if (max_abs(s.u, g, exec) > u_limit) {
      traj.aborted = true;
      traj.abort_reason = "instability detector tripped (t=" +
                          std::to_string(s.t) + ")";
      break;
    }

    if (next_out < out_times.size() &&
        std::fabs(s.t - out_times[next_out]) < 0.25 * dt) {
      traj.outputs.push_back(s);
      traj.output_times.push_back(s.t);
      traj.div_u_history.push_back(std::sqrt(
          l2_sq(ops::div(s.u, g, ops::WallRule::Odd, exec), g, exec)));
      ++next_out;
    }
  }

  traj.final_state = s;
  traj.steps = static_cast<int>(n_steps);
  return traj;
}

}  // namespace machlimit
