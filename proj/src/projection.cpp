#include "machlimit/projection.hpp"

#include <cmath>
#include <sstream>

#include "machlimit/ops.hpp"

namespace machlimit {

namespace {

// Parity-closure divergence and gradient used throughout the projector.
void div_p(const VectorField& X, const Grid& g, ScalarField& out, Exec exec) {
  ops::div(X, g, out, ops::WallRule::Odd, exec);
}

void grad_p(const ScalarField& f, const Grid& g, VectorField& out, Exec exec) {
  ops::grad(f, g, out, ops::WallRule::Even, exec);
}

double mean_weighted(const ScalarField& c, const Grid& g, Exec exec) {
  const double s = sum_nodes(
      g, exec, [&](int i, int j2, int j3) { return g.cell_volume(j3) * c(i, j2, j3); });
  return s / g.volume();
}

}  // namespace

ProjectionResult project_weighted(const VectorField& X, const ScalarField& c,
                                  const Grid& g, PoissonSolver& solver,
                                  double tol, int max_iter, Exec exec) {
  if (X.dim != g.dim) throw ShapeError("project_weighted: dimension mismatch");
  require_match(c, g, "project_weighted(c)");

  const int na = g.normal_axis();
  const int last = g.nodes3() - 1;

  ProjectionResult res;
  res.Q = VectorField(g);

  // Wall-normal trace carrier: T is quadratic in x3 so the one-sided stencil
  // reproduces its wall derivative exactly, leaving X' with a zero trace.
  double trace_mag = 0.0;
  for (int j2 = 0; j2 < g.nodes2(); ++j2)
    for (int i = 0; i < g.nodes1(); ++i) {
      trace_mag = std::max(trace_mag, std::fabs(X[na](i, j2, 0)));
      trace_mag = std::max(trace_mag, std::fabs(X[na](i, j2, last)));
    }

  VectorField Xp = X;  // becomes the zero-trace remainder
  if (trace_mag > 0.0) {
    ScalarField T(g);
    const double L3 = g.L3;
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      const double s = static_cast<double>(j3) / g.n3;
      const double eta_b = L3 * (s - 0.5 * s * s);
      const double eta_t = L3 * 0.5 * s * s;
      const double gb = X[na](i, j2, 0) / c(i, j2, 0);
      const double gt = X[na](i, j2, last) / c(i, j2, last);
      T(i, j2, j3) = gb * eta_b + gt * eta_t;
    });
    VectorField gT = ops::grad(T, g, ops::WallRule::OneSided, exec);
    for (int d = 0; d < g.dim; ++d)
      for_each_node(g, exec, [&](int i, int j2, int j3) {
        const double q = c(i, j2, j3) * gT[d](i, j2, j3);
        res.Q[d](i, j2, j3) = q;
        Xp[d](i, j2, j3) -= q;
      });
    // Pin the remainder trace to exactly zero (c*(x/c) rounding).
    for (int j2 = 0; j2 < g.nodes2(); ++j2)
      for (int i = 0; i < g.nodes1(); ++i) {
        res.Q[na](i, j2, 0) = X[na](i, j2, 0);
        res.Q[na](i, j2, last) = X[na](i, j2, last);
        Xp[na](i, j2, 0) = 0.0;
        Xp[na](i, j2, last) = 0.0;
      }
  }

  ScalarField rhs(g);
  div_p(Xp, g, rhs, exec);
  const double rhs_norm = std::sqrt(l2_sq(rhs, g, exec));
  // Rounding floor of the divergence stencil: below this the right-hand side
  // is noise (e.g. re-projecting an already projected field) and the solve is
  // considered converged.
  const double floor = 1e-13 * std::max(1.0, max_abs(X, g, exec)) / g.h_min();
  const double thresh = std::max(tol * rhs_norm, floor);

  ScalarField psi(g), dpsi(g), r = rhs;
  VectorField gpsi(g);
  const double cbar = mean_weighted(c, g, exec);
  if (cbar <= 0.0) throw SolverError("project_weighted: nonpositive mean coefficient");

  double res_norm = rhs_norm;
  int it = 0;
  while (res_norm > thresh && it < max_iter) {
    ++it;
    solver.solve(r, dpsi);
    axpy(psi, 1.0 / cbar, dpsi);
    grad_p(psi, g, gpsi, exec);
    // r = rhs - D.(c grad psi)
    VectorField cg(g);
    for (int d = 0; d < g.dim; ++d)
      for_each_node(g, exec, [&](int i, int j2, int j3) {
        cg[d](i, j2, j3) = c(i, j2, j3) * gpsi[d](i, j2, j3);
      });
    div_p(cg, g, r, exec);
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      r(i, j2, j3) = rhs(i, j2, j3) - r(i, j2, j3);
    });
    res_norm = std::sqrt(l2_sq(r, g, exec));
  }
  const double rel = res_norm / std::max(rhs_norm, floor);
  if (res_norm > thresh) {
    std::ostringstream msg;
    msg << "project_weighted: no convergence after " << it
        << " iterations, relative residual " << rel;
    throw SolverError(msg.str());
  }

  if (it > 0) {
    grad_p(psi, g, gpsi, exec);
    for (int d = 0; d < g.dim; ++d)
      for_each_node(g, exec, [&](int i, int j2, int j3) {
        res.Q[d](i, j2, j3) += c(i, j2, j3) * gpsi[d](i, j2, j3);
      });
  }

  res.P = VectorField(g);
  for (int d = 0; d < g.dim; ++d)
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      res.P[d](i, j2, j3) = X[d](i, j2, j3) - res.Q[d](i, j2, j3);
    });
  res.rel_residual = rel;
  res.iterations = it;
  return res;
}

ProjectionResult leray_project(const VectorField& X, const Grid& g,
                               PoissonSolver& solver, double tol, Exec exec) {
  ScalarField ones(g);
  ones.fill(1.0);
  return project_weighted(X, ones, g, solver, tol, 200, exec);
}

W0Result construct_w0(const VectorField& u0_comp, const ScalarField& rho0,
                      const Grid& g, PoissonSolver& solver, double tol,
                      Exec exec) {
  require_match(rho0, g, "construct_w0(rho0)");
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int j2 = 0; j2 < g.nodes2(); ++j2)
      for (int i = 0; i < g.nodes1(); ++i)
        if (!(rho0(i, j2, j3) > 0.0))
          throw SolverError("construct_w0: rho0 must be positive");

  ScalarField c(g);
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    c(i, j2, j3) = 1.0 / rho0(i, j2, j3);
  });

  ProjectionResult pr = project_weighted(u0_comp, c, g, solver, tol, 200, exec);

  W0Result out;
  out.w0 = std::move(pr.P);
  out.solve_residual = pr.rel_residual;
  out.iterations = pr.iterations;

  // Defining residuals, measured with the one-sided diagnostic stencils.
  ScalarField dv = ops::div(out.w0, g, ops::WallRule::OneSided, exec);
  out.div_residual = std::sqrt(l2_sq(dv, g, exec));

  VectorField rw(g), ru(g);
  for (int d = 0; d < g.dim; ++d)
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      rw[d](i, j2, j3) = rho0(i, j2, j3) * out.w0[d](i, j2, j3);
      ru[d](i, j2, j3) = rho0(i, j2, j3) * u0_comp[d](i, j2, j3);
    });
  VectorField cw = ops::curl(rw, g, ops::WallRule::OneSided, exec);
  VectorField cu = ops::curl(ru, g, ops::WallRule::OneSided, exec);
  axpy(cw, -1.0, cu);
  out.curl_mismatch = std::sqrt(l2_sq(cw, g, exec));
  return out;
}

}  // namespace machlimit
