#include "machlimit/initial_data.hpp"

#include <cmath>
#include <random>

#include "machlimit/ops.hpp"
#include "machlimit/poisson.hpp"
#include "machlimit/reduce.hpp"

namespace machlimit {

namespace {

struct TrigMode {
  int m3, k1, k2;
  double c, phase1, phase2;
};

// Random trig sum in the even (cos pi m s) or odd (sin pi m s) wall class;
// coefficients decay with the mode numbers so the fields stay smooth.
std::vector<TrigMode> draw_modes(std::mt19937_64& rng, const Grid& g, bool odd,
                                 int n_modes) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  std::vector<TrigMode> modes;
  for (int m = odd ? 1 : 0; m <= n_modes; ++m)
    for (int k1 = 0; k1 <= n_modes; ++k1)
      for (int k2 = 0; k2 <= (g.dim == 3 ? n_modes : 0); ++k2)
        modes.push_back({m, k1, k2,
                         coef(rng) / (1.0 + m * m + k1 * k1 + k2 * k2),
                         phase(rng), phase(rng)});
  return modes;
}

ScalarField eval_modes(const std::vector<TrigMode>& modes, const Grid& g,
                       bool odd, double amp, Exec exec) {
  ScalarField f(g);
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    const double s = static_cast<double>(j3) / g.n3;
    double v = 0.0;
    for (const auto& md : modes) {
      const double wall = odd ? std::sin(M_PI * md.m3 * s) : std::cos(M_PI * md.m3 * s);
      double tan = std::cos(2.0 * M_PI * md.k1 * g.x1(i) / g.L1 + md.phase1);
      if (g.dim == 3)
        tan *= std::cos(2.0 * M_PI * md.k2 * g.x2(j2) / g.L2 + md.phase2);
      v += md.c * wall * tan;
    }
    f(i, j2, j3) = amp * v;
  });
  return f;
}

// Discretely divergence-free velocity-class field from stream potentials,
// built with the parity stencils so the projector's divergence vanishes to
// rounding.
VectorField solenoidal_from_potentials(const Grid& g, std::mt19937_64& rng,
                                       double amp, int n_modes, Exec exec) {
  VectorField X(g);
  if (g.dim == 2) {
    ScalarField phi = eval_modes(draw_modes(rng, g, true, n_modes), g, true, amp, exec);
    ops::deriv(phi, g, g.normal_axis(), ops::WallRule::Odd, X[0], exec);
    scale(X[0], -1.0);
    ops::deriv(phi, g, 0, ops::WallRule::OneSided, X[1], exec);
    return X;
  }
  // curl of (A1, A2, A3): tangential potentials odd (vanish at walls),
  // normal potential even.
  ScalarField A1 = eval_modes(draw_modes(rng, g, true, n_modes), g, true, amp, exec);
  ScalarField A2 = eval_modes(draw_modes(rng, g, true, n_modes), g, true, amp, exec);
  ScalarField A3 = eval_modes(draw_modes(rng, g, false, n_modes), g, false, amp, exec);
  ScalarField d2A3 = ops::deriv(A3, g, 1, ops::WallRule::OneSided, exec);
  ScalarField d3A2 = ops::deriv(A2, g, 2, ops::WallRule::Odd, exec);
  ScalarField d3A1 = ops::deriv(A1, g, 2, ops::WallRule::Odd, exec);
  ScalarField d1A3 = ops::deriv(A3, g, 0, ops::WallRule::OneSided, exec);
  ScalarField d1A2 = ops::deriv(A2, g, 0, ops::WallRule::OneSided, exec);
  ScalarField d2A1 = ops::deriv(A1, g, 1, ops::WallRule::OneSided, exec);
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    X[0](i, j2, j3) = d2A3(i, j2, j3) - d3A2(i, j2, j3);
    X[1](i, j2, j3) = d3A1(i, j2, j3) - d1A3(i, j2, j3);
    X[2](i, j2, j3) = d1A2(i, j2, j3) - d2A1(i, j2, j3);
  });
  return X;
}

}  // namespace

State make_initial_data(Preparedness mode, const Grid& g,
                        const EquationOfState& eos,
                        const BackgroundDeformation& fbar, double eps,
                        unsigned long long seed, const DataParams& params,
                        Exec exec) {
  g.validate();
  eos.validate();
  fbar.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);

  State s(g, eps);

  // Entropy bump: compact support strictly inside the slab.
  const double phase_S = phase(rng);
  const double center = -0.5 * g.L3;
  const double half_width = 0.5 * params.sigma * g.L3;
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    const double r = (g.x3(j3) - center) / half_width;
    double bump = 0.0;
    if (std::fabs(r) < 1.0) bump = std::exp(1.0 - 1.0 / (1.0 - r * r));
    double tan = 0.6 + 0.4 * std::cos(2.0 * M_PI * g.x1(i) / g.L1 + phase_S);
    if (g.dim == 3)
      tan *= 0.6 + 0.4 * std::cos(2.0 * M_PI * g.x2(j2) / g.L2 + phase_S);
    s.S(i, j2, j3) = params.N0 * bump * tan;
  });

  // Divergence-free velocity part.
  VectorField u_sol = solenoidal_from_potentials(g, rng, params.amp_u,
                                                 params.n_modes, exec);
  for (int d = 0; d < g.dim; ++d) s.u[d] = u_sol[d];

  // Ill-prepared extras are drawn either way to keep the RNG stream (and so
  // the solenoidal/deformation parts) identical between the two modes.
  auto grad_modes = draw_modes(rng, g, false, params.n_modes);
  auto q_modes = draw_modes(rng, g, false, params.n_modes);
  if (mode == Preparedness::Ill) {
    ScalarField phi_g = eval_modes(grad_modes, g, false, params.amp_q, exec);
    VectorField gp = ops::grad(phi_g, g, ops::WallRule::Even, exec);
    for (int d = 0; d < g.dim; ++d) axpy(s.u[d], 1.0, gp[d]);
    s.q = eval_modes(q_modes, g, false, params.amp_q, exec);
  }

  // Deformation columns through a potential solve: div(rho(F_j+Fbar_j)) = 0
  // discretely, wall-normal traces exactly zero.
  EosFields ef = eos_eval(eos, s.q, s.S, eps, g, exec);
  PoissonSolver solver(g);
  for (int j = 0; j < g.dim; ++j) {
    VectorField Vbar(g);
    for (int c = 0; c < g.dim; ++c)
      for_each_node(g, exec, [&](int i, int j2, int j3) {
        Vbar[c](i, j2, j3) = ef.rho(i, j2, j3) * fbar(c, j);
      });
    ScalarField gdiv = ops::div(Vbar, g, ops::WallRule::Odd, exec);
    scale(gdiv, -1.0);
    ScalarField psi(g);
    solver.solve(gdiv, psi);
    VectorField W = ops::grad(psi, g, ops::WallRule::Even, exec);
    VectorField Wsol = solenoidal_from_potentials(g, rng, params.amp_F,
                                                  params.n_modes, exec);
    for (int c = 0; c < g.dim; ++c)
      for_each_node(g, exec, [&](int i, int j2, int j3) {
        s.F[j][c](i, j2, j3) =
            (W[c](i, j2, j3) + Wsol[c](i, j2, j3)) / ef.rho(i, j2, j3);
      });
  }

  enforce_boundary(s, g, exec);
  return s;
}

}  // namespace machlimit
