#include "machlimit/diagnostics.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "machlimit/ops.hpp"
#include "machlimit/reduce.hpp"
#include "json.hpp"

namespace machlimit {

namespace {

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// Backward-difference time derivative at the newest entry; hist oldest first.
// Returns the accuracy order of the formula used (2 when the history allows,
// 1 otherwise).  Throws when the history cannot support the derivative.
int time_deriv(const std::vector<const ScalarField*>& hist, int k, double dt,
               const Grid& g, ScalarField& out, Exec exec) {
  const int depth = static_cast<int>(hist.size());
  if (depth < k + 1) {
    std::ostringstream m;
    m << "time derivative of order " << k << " needs " << k + 1
      << " snapshots, have " << depth;
    throw ArityError(m.str());
  }
  if (!out.matches(g)) out = ScalarField(g);
  if (k == 0) {
    out = *hist.back();
    return 2;
  }

  // Coefficients apply to entries newest-first.
  std::vector<double> c;
  int order = 2;
  const double idt = 1.0 / dt;
  switch (k) {
    case 1:
      if (depth >= 3)
        c = {1.5 * idt, -2.0 * idt, 0.5 * idt};
      else {
        c = {idt, -idt};
        order = 1;
      }
      break;
    case 2: {
      const double idt2 = idt * idt;
      if (depth >= 4)
        c = {2.0 * idt2, -5.0 * idt2, 4.0 * idt2, -idt2};
      else {
        c = {idt2, -2.0 * idt2, idt2};
        order = 1;
      }
      break;
    }
    case 3: {
      const double idt3 = idt * idt * idt;
      if (depth >= 5)
        c = {2.5 * idt3, -9.0 * idt3, 12.0 * idt3, -7.0 * idt3, 1.5 * idt3};
      else {
        c = {idt3, -3.0 * idt3, 3.0 * idt3, -idt3};
        order = 1;
      }
      break;
    }
    default:
      throw ArityError("time derivatives supported up to order 3");
  }

  const int m = static_cast<int>(c.size());
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    double v = 0.0;
    for (int s = 0; s < m; ++s)
      v += c[static_cast<std::size_t>(s)] *
           (*hist[hist.size() - 1 - static_cast<std::size_t>(s)])(i, j2, j3);
    out(i, j2, j3) = v;
  });
  return order;
}

using MultiIndex = std::array<int, 3>;

// All spatial derivative fields d^alpha f for |alpha| <= m, canonical
// application order (highest axis outermost).
std::map<MultiIndex, ScalarField> derivative_table(const ScalarField& f, int m,
                                                   const Grid& g, Exec exec) {
  std::map<MultiIndex, ScalarField> table;
  table[{0, 0, 0}] = f;
  for (int level = 1; level <= m; ++level) {
    std::vector<MultiIndex> todo;
    for (int a0 = 0; a0 <= level; ++a0)
      for (int a1 = 0; a1 <= level - a0; ++a1) {
        const int a2 = level - a0 - a1;
        if (g.dim == 2 && a1 > 0) continue;
        todo.push_back({a0, a1, a2});
      }
    for (const MultiIndex& alpha : todo) {
      int d = 2;
      while (d >= 0 && alpha[static_cast<std::size_t>(d)] == 0) --d;
      MultiIndex parent = alpha;
      parent[static_cast<std::size_t>(d)] -= 1;
      const int axis = d == 2 ? g.normal_axis() : d;
      ScalarField df(g);
      ops::deriv(table.at(parent), g, axis, ops::WallRule::OneSided, df, exec);
      table[alpha] = std::move(df);
    }
  }
  return table;
}

double hs_from_table(const std::map<MultiIndex, ScalarField>& table, int m,
                     const Grid& g, Exec exec) {
  double total = 0.0;
  for (const auto& [alpha, field] : table) {
    if (alpha[0] + alpha[1] + alpha[2] > m) continue;
    total += l2_sq(field, g, exec);
  }
  return total;
}

// Tolerant mixed norm squared used inside the energy suite: available time
// derivatives only, flags truncation instead of throwing.
double mixed_sq(const std::vector<const ScalarField*>& hist, int s, double eps,
                double dt, const Grid& g, bool& truncated, Exec exec) {
  const int depth = static_cast<int>(hist.size());
  double total = 0.0;
  double epow = 1.0;
  ScalarField fk(g);
  for (int k = 0; k <= s; ++k) {
    if (depth < k + 1) {
      truncated = true;
      break;
    }
    if (time_deriv(hist, k, dt, g, fk, exec) < 2 && k > 0) truncated = true;
    total += epow * hs_norm_sq(fk, s - k, g, exec);
    epow *= eps * eps;
  }
  return total;
}

ScalarField advect(const VectorField& u, const ScalarField& f, const Grid& g,
                   Exec exec) {
  VectorField gf = ops::grad(f, g, ops::WallRule::OneSided, exec);
  ScalarField out(g);
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    double v = 0.0;
    for (int d = 0; d < g.dim; ++d) v += u[d](i, j2, j3) * gf[d](i, j2, j3);
    out(i, j2, j3) = v;
  });
  return out;
}

double l2_sq_interior(const ScalarField& f, const Grid& g, Exec exec) {
  const int last = g.nodes3() - 1;
  return sum_nodes(g, exec, [&](int i, int j2, int j3) {
    if (j3 == 0 || j3 == last) return 0.0;
    const double v = f(i, j2, j3);
    return g.cell_volume(j3) * v * v;
  });
}

}  // namespace

double hs_norm_sq(const ScalarField& f, int m, const Grid& g, Exec exec) {
  require_match(f, g, "hs_norm_sq");
  if (m == 0) return l2_sq(f, g, exec);
  auto table = derivative_table(f, m, g, exec);
  return hs_from_table(table, m, g, exec);
}

double sobolev_norm(const std::vector<const ScalarField*>& f_history, int s,
                    double eps, double dt, const Grid& g, bool* truncated,
                    Exec exec) {
  if (s < 0 || s > 3) throw ArityError("sobolev_norm: s must be in 0..3");
  const int depth = static_cast<int>(f_history.size());
  if (depth < s + 1) {
    std::ostringstream m;
    m << "sobolev_norm: order " << s << " needs at least " << s + 1
      << " snapshots, have " << depth;
    throw ArityError(m.str());
  }
  bool trunc = false;
  const double total = mixed_sq(f_history, s, eps, dt, g, trunc, exec);
  if (truncated) *truncated = trunc;
  return std::sqrt(total);
}

ConstraintResiduals constraint_residuals(const State& s,
                                         const EquationOfState& eos,
                                         const BackgroundDeformation& fbar,
                                         const Grid& g, Exec exec) {
  EosFields ef = eos_eval(eos, s.q, s.S, s.eps, g, exec);
  ConstraintResiduals out;
  for (int j = 0; j < g.dim; ++j) {
    VectorField V(g);
    for (int c = 0; c < g.dim; ++c)
      for_each_node(g, exec, [&](int i, int j2, int j3) {
        V[c](i, j2, j3) = ef.rho(i, j2, j3) * (s.F[j][c](i, j2, j3) + fbar(c, j));
      });
    ScalarField dv = ops::div(V, g, ops::WallRule::OneSided, exec);
    out.divF[static_cast<std::size_t>(j)] = std::sqrt(l2_sq(dv, g, exec));
    out.divF_max = std::max(out.divF_max, out.divF[static_cast<std::size_t>(j)]);
  }
  out.wall_trace = wall_trace_max(s, g);
  return out;
}

double wave_residual(const TrajWindow& w, const EquationOfState& eos,
                     const BackgroundDeformation& fbar, const Grid& g,
                     Exec exec) {
  if (w.depth() < 3) throw ArityError("wave_residual: window depth must be >= 3");
  const State& head = w.head();
  const double eps = head.eps;
  EosFields ef = eos_eval(eos, head.q, head.S, eps, g, exec);

  std::vector<const ScalarField*> hq, hu[3];
  for (const State* st : w.states) {
    hq.push_back(&st->q);
    for (int d = 0; d < g.dim; ++d) hu[d].push_back(&st->u[d]);
  }

  ScalarField dtq(g), dt2q(g);
  time_deriv(hq, 1, w.dt, g, dtq, exec);
  time_deriv(hq, 2, w.dt, g, dt2q, exec);
  std::array<ScalarField, 3> dtu;
  for (int d = 0; d < g.dim; ++d) {
    dtu[d] = ScalarField(g);
    time_deriv(hu[d], 1, w.dt, g, dtu[d], exec);
  }

  // Dt^2 q = dtt q + 2 u.grad(dt q) + (dt u).grad q + u.grad(u.grad q)
  VectorField gq = ops::grad(head.q, g, ops::WallRule::OneSided, exec);
  ScalarField advq = advect(head.u, head.q, g, exec);
  ScalarField adv_dtq = advect(head.u, dtq, g, exec);
  ScalarField adv_advq = advect(head.u, advq, g, exec);
  ScalarField Dt2q(g), Dtq(g);
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    double dtu_gq = 0.0;
    for (int d = 0; d < g.dim; ++d) dtu_gq += dtu[d](i, j2, j3) * gq[d](i, j2, j3);
    Dt2q(i, j2, j3) = dt2q(i, j2, j3) + 2.0 * adv_dtq(i, j2, j3) + dtu_gq +
                      adv_advq(i, j2, j3);
    Dtq(i, j2, j3) = dtq(i, j2, j3) + advq(i, j2, j3);
  });

  // div(rho^{-1} grad q)
  VectorField irho_gq(g);
  for (int d = 0; d < g.dim; ++d)
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      irho_gq[d](i, j2, j3) = gq[d](i, j2, j3) / ef.rho(i, j2, j3);
    });
  ScalarField div_irho_gq = ops::div(irho_gq, g, ops::WallRule::OneSided, exec);

  // velocity/deformation gradient contraction sum_il (di u_l)(dl u_i)
  std::array<VectorField, 3> gu;
  for (int c = 0; c < g.dim; ++c)
    gu[c] = ops::grad(head.u[c], g, ops::WallRule::OneSided, exec);
  ScalarField u_contract(g);
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    double v = 0.0;
    for (int a = 0; a < g.dim; ++a)
      for (int b = 0; b < g.dim; ++b)
        v += gu[b][a](i, j2, j3) * gu[a][b](i, j2, j3);
    u_contract(i, j2, j3) = v;
  });

  // Per-column pieces.
  std::array<ScalarField, 3> fdq, fdS, f2q, f2S, F_contract;
  for (int j = 0; j < g.dim; ++j) {
    VectorField fj = total_column(head.F, fbar, j, g, exec);
    fdq[j] = ops::directional_derivative(fj, head.q, g, ops::WallRule::OneSided, exec);
    fdS[j] = ops::directional_derivative(fj, head.S, g, ops::WallRule::OneSided, exec);
    f2q[j] = ops::directional_derivative(fj, fdq[j], g, ops::WallRule::OneSided, exec);
    f2S[j] = ops::directional_derivative(fj, fdS[j], g, ops::WallRule::OneSided, exec);

    std::array<VectorField, 3> gFj;
    for (int c = 0; c < g.dim; ++c)
      gFj[c] = ops::grad(head.F[j][c], g, ops::WallRule::OneSided, exec);
    F_contract[j] = ScalarField(g);
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      double v = 0.0;
      for (int a = 0; a < g.dim; ++a)
        for (int b = 0; b < g.dim; ++b)
          v += gFj[b][a](i, j2, j3) * gFj[a][b](i, j2, j3);
      F_contract[j](i, j2, j3) = v;
    });
  }

  const double e2 = eps * eps, e3 = e2 * eps;
  ScalarField res(g);
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    const double p = 1.0 + eps * head.q(i, j2, j3);
    const double S = head.S(i, j2, j3);
    const double a = ef.a(i, j2, j3);
    const double b = ef.b(i, j2, j3);
    const double dpa = eos.dp_a(p, S), dSa = eos.dS_a(p, S);
    const double dpb = eos.dp_b(p, S), dSb = eos.dS_b(p, S);

    double source = eps * u_contract(i, j2, j3) -
                    e3 * dpa * Dtq(i, j2, j3) * Dtq(i, j2, j3);
    double fterms = 0.0;
    for (int j = 0; j < g.dim; ++j) {
      const double fq = fdq[j](i, j2, j3), fS = fdS[j](i, j2, j3);
      source += e3 * dpa * fq * fq + e2 * (dSa + dpb) * fq * fS +
                eps * b * f2S[j](i, j2, j3) + eps * dSb * fS * fS -
                eps * F_contract[j](i, j2, j3);
      fterms += e2 * a * f2q[j](i, j2, j3);
    }
    res(i, j2, j3) = e2 * a * Dt2q(i, j2, j3) - div_irho_gq(i, j2, j3) -
                     fterms - source;
  });
  return std::sqrt(l2_sq_interior(res, g, exec));
}

std::array<double, 3> commutator_residual(const TrajWindow& w,
                                          const BackgroundDeformation& fbar,
                                          const Grid& g, double velocity_scale,
                                          Exec exec) {
  if (w.depth() < 2)
    throw ArityError("commutator_residual: window depth must be >= 2");
  const State& head = w.head();
  std::array<double, 3> out{};
  for (int j = 0; j < g.dim; ++j) {
    // f_j.grad S at every snapshot.
    std::vector<ScalarField> series;
    series.reserve(w.states.size());
    for (const State* st : w.states) {
      VectorField fj = total_column(st->F, fbar, j, g, exec);
      series.push_back(
          ops::directional_derivative(fj, st->S, g, ops::WallRule::OneSided, exec));
    }
    std::vector<const ScalarField*> hist;
    for (const auto& f : series) hist.push_back(&f);
    ScalarField dtG(g);
    time_deriv(hist, 1, w.dt, g, dtG, exec);
    ScalarField adv = advect(head.u, series.back(), g, exec);
    ScalarField res(g);
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      res(i, j2, j3) = dtG(i, j2, j3) + velocity_scale * adv(i, j2, j3);
    });
    out[static_cast<std::size_t>(j)] = std::sqrt(l2_sq(res, g, exec));
  }
  return out;
}

namespace {

// Tangential-Fourier trace seminorm |g|_{sigma}^2 over one wall plane.
double trace_seminorm_sq(const ScalarField& f, int j3, double sigma,
                         const Grid& g) {
  const int n1 = g.nodes1(), n2 = g.nodes2();
  std::vector<double> in(static_cast<std::size_t>(n1) * n2);
  for (int j2 = 0; j2 < n2; ++j2)
    for (int i = 0; i < n1; ++i)
      in[static_cast<std::size_t>(i) + static_cast<std::size_t>(n1) * j2] = f(i, j2, j3);

  const int nc1 = n1 / 2 + 1;
  std::vector<fftw_complex> out(static_cast<std::size_t>(nc1) * n2);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_plan plan;
    if (g.dim == 3) {
      int n[2] = {n2, n1};
      plan = fftw_plan_dft_r2c(2, n, in.data(), out.data(), FFTW_ESTIMATE);
    } else {
      plan = fftw_plan_dft_r2c_1d(n1, in.data(), out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }

  const double area_el = g.h1() * (g.dim == 3 ? g.h2() : 1.0);
  const double npts = static_cast<double>(n1) * n2;
  double total = 0.0;
  for (int m2 = 0; m2 < n2; ++m2)
    for (int m1 = 0; m1 < nc1; ++m1) {
      const auto& cv = out[static_cast<std::size_t>(m1) + static_cast<std::size_t>(nc1) * m2];
      const double mag2 = cv[0] * cv[0] + cv[1] * cv[1];
      const double k1 = 2.0 * M_PI * m1 / g.L1;
      const int m2s = m2 <= n2 / 2 ? m2 : n2 - m2;
      const double k2 = g.dim == 3 ? 2.0 * M_PI * m2s / g.L2 : 0.0;
      const double weight = std::pow(1.0 + k1 * k1 + k2 * k2, sigma);
      // Hermitian half: double all modes except the self-conjugate ones.
      const double mult = (m1 == 0 || 2 * m1 == n1) ? 1.0 : 2.0;
      total += mult * weight * mag2;
    }
  return total * area_el / npts;
}

}  // namespace

HodgeCheck hodge_bound_check(const VectorField& X, int s, const Grid& g,
                             Exec exec) {
  if (s < 1 || s > 2) throw ArityError("hodge_bound_check: s must be 1 or 2");
  HodgeCheck out;
  for (int d = 0; d < g.dim; ++d) out.lhs += hs_norm_sq(X[d], s, g, exec);
  out.l2 = l2_sq(X, g, exec);
  ScalarField dv = ops::div(X, g, ops::WallRule::OneSided, exec);
  out.div_sm1 = hs_norm_sq(dv, s - 1, g, exec);
  VectorField cu = ops::curl(X, g, ops::WallRule::OneSided, exec);
  for (int d = 0; d < g.dim; ++d) out.curl_sm1 += hs_norm_sq(cu[d], s - 1, g, exec);
  const double sigma = s - 0.5;
  out.trace_sm12 = trace_seminorm_sq(X[g.normal_axis()], 0, sigma, g) +
                   trace_seminorm_sq(X[g.normal_axis()], g.nodes3() - 1, sigma, g);
  return out;
}

WeightedCurls curl_weighted(const State& s, const EquationOfState& eos,
                            const Grid& g, Exec exec) {
  ScalarField rho0(g);
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    rho0(i, j2, j3) = eos.rho(1.0, s.S(i, j2, j3));
  });
  WeightedCurls out;
  VectorField ru(g);
  for (int d = 0; d < g.dim; ++d)
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      ru[d](i, j2, j3) = rho0(i, j2, j3) * s.u[d](i, j2, j3);
    });
  out.curl_rho0_u = ops::curl(ru, g, ops::WallRule::OneSided, exec);
  for (int j = 0; j < g.dim; ++j) {
    VectorField rF(g);
    for (int d = 0; d < g.dim; ++d)
      for_each_node(g, exec, [&](int i, int j2, int j3) {
        rF[d](i, j2, j3) = rho0(i, j2, j3) * s.F[j][d](i, j2, j3);
      });
    out.curl_rho0_F[static_cast<std::size_t>(j)] =
        ops::curl(rF, g, ops::WallRule::OneSided, exec);
  }
  return out;
}

EnergyReport energy_suite(const TrajWindow& w, const EquationOfState& eos,
                          const BackgroundDeformation& fbar, const Grid& g,
                          Exec exec) {
  if (w.depth() < 1) throw ArityError("energy_suite: empty window");
  const State& head = w.head();
  const double eps = head.eps;
  const double dt = w.dt;
  const int depth = w.depth();

  EnergyReport rep;
  rep.t = head.t;
  EosFields ef = eos_eval(eos, head.q, head.S, eps, g, exec);

  // E0
  rep.E0 = 0.5 * sum_nodes(g, exec, [&](int i, int j2, int j3) {
    double usq = 0.0, Fsq = 0.0;
    for (int d = 0; d < g.dim; ++d) {
      usq += head.u[d](i, j2, j3) * head.u[d](i, j2, j3);
      for (int j = 0; j < g.dim; ++j)
        Fsq += head.F[j][d](i, j2, j3) * head.F[j][d](i, j2, j3);
    }
    const double S = head.S(i, j2, j3), q = head.q(i, j2, j3);
    return g.cell_volume(j3) *
           (ef.rho(i, j2, j3) * (usq + Fsq + S * S) + ef.a(i, j2, j3) * q * q);
  });

  // Histories.
  std::vector<const ScalarField*> hq, hS, hu[3], hF[3][3];
  for (const State* st : w.states) {
    hq.push_back(&st->q);
    hS.push_back(&st->S);
    for (int d = 0; d < g.dim; ++d) {
      hu[d].push_back(&st->u[d]);
      for (int j = 0; j < g.dim; ++j) hF[j][d].push_back(&st->F[j][d]);
    }
  }

  // f_j.grad S per snapshot (owned storage, then pointer views).
  std::vector<std::array<ScalarField, 3>> fs_series(w.states.size());
  for (std::size_t m = 0; m < w.states.size(); ++m)
    for (int j = 0; j < g.dim; ++j) {
      VectorField fj = total_column(w.states[m]->F, fbar, j, g, exec);
      fs_series[m][static_cast<std::size_t>(j)] = ops::directional_derivative(
          fj, w.states[m]->S, g, ops::WallRule::OneSided, exec);
    }
  std::vector<const ScalarField*> hFS[3];
  for (int j = 0; j < g.dim; ++j)
    for (std::size_t m = 0; m < w.states.size(); ++m)
      hFS[j].push_back(&fs_series[m][static_cast<std::size_t>(j)]);

  // W0: a|eps Dt q|^2 + rho^{-1}|grad q|^2 + sum_j a |eps f_j.grad q|^2.
  VectorField gq = ops::grad(head.q, g, ops::WallRule::OneSided, exec);
  ScalarField Dtq(g);
  if (depth >= 2) {
    ScalarField dtq(g);
    if (time_deriv(hq, 1, dt, g, dtq, exec) < 2) rep.truncated = true;
    ScalarField advq = advect(head.u, head.q, g, exec);
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      Dtq(i, j2, j3) = dtq(i, j2, j3) + advq(i, j2, j3);
    });
  } else {
    rep.truncated = true;
  }
  std::array<ScalarField, 3> fdq;
  for (int j = 0; j < g.dim; ++j) {
    VectorField fj = total_column(head.F, fbar, j, g, exec);
    fdq[j] = ops::directional_derivative(fj, head.q, g, ops::WallRule::OneSided, exec);
  }
  rep.W0 = 0.5 * sum_nodes(g, exec, [&](int i, int j2, int j3) {
    double v = ef.a(i, j2, j3) * eps * eps * Dtq(i, j2, j3) * Dtq(i, j2, j3);
    double gq2 = 0.0;
    for (int d = 0; d < g.dim; ++d) gq2 += gq[d](i, j2, j3) * gq[d](i, j2, j3);
    v += gq2 / ef.rho(i, j2, j3);
    for (int j = 0; j < g.dim; ++j)
      v += ef.a(i, j2, j3) * eps * eps * fdq[j](i, j2, j3) * fdq[j](i, j2, j3);
    return g.cell_volume(j3) * v;
  });

  // Mixed-norm table and E.
  for (int s = 0; s <= 3; ++s) {
    rep.q_norm[s] = std::sqrt(mixed_sq(hq, s, eps, dt, g, rep.truncated, exec));
    rep.S_norm[s] = std::sqrt(mixed_sq(hS, s, eps, dt, g, rep.truncated, exec));
    double usum = 0.0;
    for (int d = 0; d < g.dim; ++d)
      usum += mixed_sq(hu[d], s, eps, dt, g, rep.truncated, exec);
    rep.u_norm[s] = std::sqrt(usum);
    for (int j = 0; j < g.dim; ++j) {
      double fsum = 0.0;
      for (int d = 0; d < g.dim; ++d)
        fsum += mixed_sq(hF[j][d], s, eps, dt, g, rep.truncated, exec);
      rep.F_norm[j][s] = std::sqrt(fsum);
      rep.FS_norm[j][s] =
          std::sqrt(mixed_sq(hFS[j], s, eps, dt, g, rep.truncated, exec));
    }
  }
  rep.E = rep.q_norm[3] * rep.q_norm[3] + rep.u_norm[3] * rep.u_norm[3] +
          rep.S_norm[3] * rep.S_norm[3];
  for (int j = 0; j < g.dim; ++j)
    rep.E += rep.F_norm[j][3] * rep.F_norm[j][3] +
             rep.FS_norm[j][3] * rep.FS_norm[j][3];

  // E1: full time derivatives in L2, entropy norms, weighted curls.
  {
    double e1 = 0.0;
    ScalarField fk(g);
    double epow = 1.0;
    for (int k = 0; k <= 3; ++k) {
      if (depth < k + 1) {
        rep.truncated = true;
        break;
      }
      if (time_deriv(hq, k, dt, g, fk, exec) < 2 && k > 0) rep.truncated = true;
      e1 += epow * l2_sq(fk, g, exec);
      for (int d = 0; d < g.dim; ++d) {
        time_deriv(hu[d], k, dt, g, fk, exec);
        e1 += epow * l2_sq(fk, g, exec);
        for (int j = 0; j < g.dim; ++j) {
          time_deriv(hF[j][d], k, dt, g, fk, exec);
          e1 += epow * l2_sq(fk, g, exec);
        }
      }
      epow *= eps * eps;
    }
    e1 += rep.S_norm[3] * rep.S_norm[3];
    for (int j = 0; j < g.dim; ++j)
      e1 += rep.FS_norm[j][3] * rep.FS_norm[j][3];

    // Weighted curl histories.
    std::vector<WeightedCurls> curls(w.states.size());
    for (std::size_t m = 0; m < w.states.size(); ++m)
      curls[m] = curl_weighted(*w.states[m], eos, g, exec);
    for (int d = 0; d < g.dim; ++d) {
      std::vector<const ScalarField*> hcu;
      for (auto& c : curls) hcu.push_back(&c.curl_rho0_u[d]);
      e1 += mixed_sq(hcu, 2, eps, dt, g, rep.truncated, exec);
      for (int j = 0; j < g.dim; ++j) {
        std::vector<const ScalarField*> hcF;
        for (auto& c : curls) hcF.push_back(&c.curl_rho0_F[j][d]);
        e1 += mixed_sq(hcF, 2, eps, dt, g, rep.truncated, exec);
      }
    }
    rep.E1 = e1;
  }

  // E2: gradients, divergences and curls in the mixed norm.
  {
    struct Series {
      std::vector<ScalarField> f;
    };
    std::vector<Series> series;
    auto push_series = [&](auto&& maker) {
      Series s2;
      for (const State* st : w.states) s2.f.push_back(maker(*st));
      series.push_back(std::move(s2));
    };
    for (int d = 0; d < g.dim; ++d)
      push_series([&](const State& st) {
        return ops::deriv(st.q, g, d == g.normal_axis() ? g.normal_axis() : d,
                          ops::WallRule::OneSided, exec);
      });
    push_series([&](const State& st) {
      return ops::div(st.u, g, ops::WallRule::OneSided, exec);
    });
    for (int j = 0; j < g.dim; ++j)
      push_series([&](const State& st) {
        return ops::div(st.F[j], g, ops::WallRule::OneSided, exec);
      });
    const int curl_comps = g.dim == 2 ? 1 : 3;
    for (int d = 0; d < curl_comps; ++d)
      push_series([&](const State& st) {
        VectorField c = ops::curl(st.u, g, ops::WallRule::OneSided, exec);
        return c[d];
      });
    for (int j = 0; j < g.dim; ++j)
      for (int d = 0; d < curl_comps; ++d)
        push_series([&](const State& st) {
          VectorField c = ops::curl(st.F[j], g, ops::WallRule::OneSided, exec);
          return c[d];
        });

    double e2 = 0.0;
    for (const Series& s2 : series) {
      std::vector<const ScalarField*> hist;
      for (const auto& f : s2.f) hist.push_back(&f);
      e2 += mixed_sq(hist, 2, eps, dt, g, rep.truncated, exec);
    }
    rep.E2 = e2;
  }

  ConstraintResiduals cr = constraint_residuals(head, eos, fbar, g, exec);
  for (int j = 0; j < g.dim; ++j) rep.divF_residual[j] = cr.divF[j];
  rep.divF_residual_max = cr.divF_max;
  rep.wall_trace = cr.wall_trace;

  if (depth >= 3)
    rep.wave_residual = wave_residual(w, eos, fbar, g, exec);
  else
    rep.truncated = true;
  if (depth >= 2) {
    auto com = commutator_residual(w, fbar, g, 1.0, exec);
    for (int j = 0; j < g.dim; ++j) {
      rep.commutator[j] = com[j];
      rep.commutator_max = std::max(rep.commutator_max, com[j]);
    }
  }
  return rep;
}

namespace {

std::vector<std::string> column_labels(int dim) {
  return dim == 2 ? std::vector<std::string>{"1", "3"}
                  : std::vector<std::string>{"1", "2", "3"};
}

}  // namespace

void write_reports_csv(const std::filesystem::path& path,
                       const std::vector<EnergyReport>& reports, int dim) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string());
  out.precision(17);
  const auto labels = column_labels(dim);
  out << "t,E0,W0,E1,E2,E";
  for (int s = 0; s <= 3; ++s) out << ",norm_q_s" << s;
  for (int s = 0; s <= 3; ++s) out << ",norm_u_s" << s;
  for (int s = 0; s <= 3; ++s) out << ",norm_S_s" << s;
  for (int j = 0; j < dim; ++j)
    for (int s = 0; s <= 3; ++s) out << ",norm_F" << labels[j] << "_s" << s;
  for (int j = 0; j < dim; ++j)
    for (int s = 0; s <= 3; ++s) out << ",norm_FdS" << labels[j] << "_s" << s;
  for (int j = 0; j < dim; ++j) out << ",divF_residual_" << labels[j];
  out << ",wall_trace,wave_residual";
  for (int j = 0; j < dim; ++j) out << ",commutator_" << labels[j];
  out << ",truncated\n";
  for (const EnergyReport& r : reports) {
    out << r.t << ',' << r.E0 << ',' << r.W0 << ',' << r.E1 << ',' << r.E2
        << ',' << r.E;
    for (int s = 0; s <= 3; ++s) out << ',' << r.q_norm[s];
    for (int s = 0; s <= 3; ++s) out << ',' << r.u_norm[s];
    for (int s = 0; s <= 3; ++s) out << ',' << r.S_norm[s];
    for (int j = 0; j < dim; ++j)
      for (int s = 0; s <= 3; ++s) out << ',' << r.F_norm[j][s];
    for (int j = 0; j < dim; ++j)
      for (int s = 0; s <= 3; ++s) out << ',' << r.FS_norm[j][s];
    for (int j = 0; j < dim; ++j) out << ',' << r.divF_residual[j];
    out << ',' << r.wall_trace << ',' << r.wave_residual;
    for (int j = 0; j < dim; ++j) out << ',' << r.commutator[j];
    out << ',' << (r.truncated ? 1 : 0) << '\n';
  }
}

void write_reports_jsonl(const std::filesystem::path& path,
                         const std::vector<EnergyReport>& reports, int dim) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string());
  const auto labels = column_labels(dim);
  for (const EnergyReport& r : reports) {
    nlohmann::json rec;
    rec["t"] = r.t;
    rec["E0"] = r.E0;
    rec["W0"] = r.W0;
    rec["E1"] = r.E1;
    rec["E2"] = r.E2;
    rec["E"] = r.E;
    for (int s = 0; s <= 3; ++s) {
      rec["norm_q"][s] = r.q_norm[s];
      rec["norm_u"][s] = r.u_norm[s];
      rec["norm_S"][s] = r.S_norm[s];
    }
    for (int j = 0; j < dim; ++j) {
      rec["norm_F" + labels[j]] = std::vector<double>(r.F_norm[j].begin(),
                                                      r.F_norm[j].end());
      rec["norm_FdS" + labels[j]] = std::vector<double>(r.FS_norm[j].begin(),
                                                        r.FS_norm[j].end());
      rec["divF_residual_" + labels[j]] = r.divF_residual[j];
      rec["commutator_" + labels[j]] = r.commutator[j];
    }
    rec["wall_trace"] = r.wall_trace;
    rec["wave_residual"] = r.wave_residual;
    rec["truncated"] = r.truncated;
    out << rec.dump() << "\n";
  }
}

}  // namespace machlimit
