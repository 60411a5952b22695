#pragma once

#include <cmath>

#include "machlimit/exec.hpp"
#include "machlimit/field.hpp"

namespace machlimit {

// Polytropic gamma-law closure: rho(p,S) = p^{1/gamma} e^{-S/gamma}.
// a = (1/rho) d rho/dp and b = (1/rho) d rho/dS; the dp_/dS_ members are the
// partial derivatives of a and b themselves, needed by the pressure
// wave-equation source.
struct EquationOfState {
  double gamma = 1.4;
  double rho_floor = 1e-2;

  double rho(double p, double S) const {
    return std::pow(p, 1.0 / gamma) * std::exp(-S / gamma);
  }
  double a(double p, double /*S*/) const { return 1.0 / (gamma * p); }
  double b(double /*p*/, double /*S*/) const { return -1.0 / gamma; }

  double dp_a(double p, double /*S*/) const { return -1.0 / (gamma * p * p); }
  double dS_a(double /*p*/, double /*S*/) const { return 0.0; }
  double dp_b(double /*p*/, double /*S*/) const { return 0.0; }
  double dS_b(double /*p*/, double /*S*/) const { return 0.0; }

  void validate() const {
    if (gamma <= 1.0) throw ConfigError("eos.gamma must be > 1");
    if (rho_floor <= 0.0) throw ConfigError("eos.rho_floor must be > 0");
  }
};

struct EosFields {
  ScalarField rho;
  ScalarField a;
  ScalarField b;
};

// Evaluates rho, a, b at (1 + eps q, S).  Nonpositive pressure raises
// EosDomainError naming the offending node; rho below the floor raises a
// hyperbolicity-loss error.  The floor is a check, not a clamp.
EosFields eos_eval(const EquationOfState& eos, const ScalarField& q,
                   const ScalarField& S, double eps, const Grid& g,
                   Exec exec = Exec::Parallel);

}  // namespace machlimit
