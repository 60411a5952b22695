#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "machlimit/eos.hpp"
#include "machlimit/state.hpp"
#include "machlimit/window.hpp"

namespace machlimit {

// Per-time diagnostic record: quadratic energies, mixed space-time Sobolev
// norms, and the structural residuals of the system.
struct EnergyReport {
  double t = 0.0;

  double E0 = 0.0;  // 1/2 int rho|u|^2 + sum_j rho|F_j|^2 + rho S^2 + a q^2
  double W0 = 0.0;  // 1/2 int a|eps Dt q|^2 + rho^{-1}|grad q|^2 + sum_j a|eps f_j.grad q|^2
  double E1 = 0.0;
  double E2 = 0.0;
  double E = 0.0;   // |(q,u,S)|_{3,eps}^2 + sum_j |(F_j, f_j.grad S)|_{3,eps}^2

  // Mixed norms |.|_{s,eps} for s = 0..3 (norms, not squares).
  std::array<double, 4> q_norm{};
  std::array<double, 4> u_norm{};
  std::array<double, 4> S_norm{};
  std::array<std::array<double, 4>, 3> F_norm{};
  std::array<std::array<double, 4>, 3> FS_norm{};  // (F_j+Fbar_j).grad S

  std::array<double, 3> divF_residual{};  // |div(rho (F_j+Fbar_j))|_0 per column
  double divF_residual_max = 0.0;
  double wall_trace = 0.0;
  double wave_residual = 0.0;
  std::array<double, 3> commutator{};
  double commutator_max = 0.0;

  bool truncated = false;  // time-derivative order limited by history depth
};

// Mixed space-time Sobolev norm |f|_{s,eps}: time derivatives by backward
// differences over the equispaced history (oldest first), spatial derivatives
// by the one-sided stencils, trapezoid quadrature.  Throws ArityError when
// the history cannot support any k-th time derivative for k <= s; sets
// *truncated when a first-order fallback formula had to be used.
double sobolev_norm(const std::vector<const ScalarField*>& f_history, int s,
                    double eps, double dt, const Grid& g,
                    bool* truncated = nullptr, Exec exec = Exec::Parallel);

// Spatial-only H^m norm squared, all multi-indices |alpha| <= m.
double hs_norm_sq(const ScalarField& f, int m, const Grid& g,
                  Exec exec = Exec::Parallel);

EnergyReport energy_suite(const TrajWindow& w, const EquationOfState& eos,
                          const BackgroundDeformation& fbar, const Grid& g,
                          Exec exec = Exec::Parallel);

struct ConstraintResiduals {
  std::array<double, 3> divF{};
  double divF_max = 0.0;
  double wall_trace = 0.0;
};

ConstraintResiduals constraint_residuals(const State& s,
                                         const EquationOfState& eos,
                                         const BackgroundDeformation& fbar,
                                         const Grid& g,
                                         Exec exec = Exec::Parallel);

// L2 (interior rows) of the pressure wave-equation residual
//   eps^2 a Dt^2 q - div(rho^{-1} grad q) - sum_j eps^2 a (f_j.grad)^2 q - G
// with the source G assembled term by term from the system.  Needs depth >= 3.
double wave_residual(const TrajWindow& w, const EquationOfState& eos,
                     const BackgroundDeformation& fbar, const Grid& g,
                     Exec exec = Exec::Parallel);

// |d_t(f_j.grad S) + velocity_scale * u.grad(f_j.grad S)|_0 per column.
// velocity_scale != 1 is the negative control (transport with the wrong
// velocity); the identity predicts zero only for scale == 1.
std::array<double, 3> commutator_residual(const TrajWindow& w,
                                          const BackgroundDeformation& fbar,
                                          const Grid& g,
                                          double velocity_scale = 1.0,
                                          Exec exec = Exec::Parallel);

struct HodgeCheck {
  double lhs = 0.0;        // |X|_s^2
  double l2 = 0.0;         // |X|_0^2
  double div_sm1 = 0.0;    // |div X|_{s-1}^2
  double curl_sm1 = 0.0;   // |curl X|_{s-1}^2
  double trace_sm12 = 0.0; // |X.N|_{s-1/2}^2, tangential-Fourier trace norm
  double rhs_sum() const { return l2 + div_sm1 + curl_sm1 + trace_sm12; }
};

HodgeCheck hodge_bound_check(const VectorField& X, int s, const Grid& g,
                             Exec exec = Exec::Parallel);

struct WeightedCurls {
  VectorField curl_rho0_u;
  std::array<VectorField, 3> curl_rho0_F;
};

// curl(rho0 u) and curl(rho0 F_j) with rho0 = rho(0, S).
WeightedCurls curl_weighted(const State& s, const EquationOfState& eos,
                            const Grid& g, Exec exec = Exec::Parallel);

void write_reports_csv(const std::filesystem::path& path,
                       const std::vector<EnergyReport>& reports, int dim);
void write_reports_jsonl(const std::filesystem::path& path,
                         const std::vector<EnergyReport>& reports, int dim);

}  // namespace machlimit
