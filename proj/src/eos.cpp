#include "machlimit/eos.hpp"

#include <sstream>

namespace machlimit {

EosFields eos_eval(const EquationOfState& eos, const ScalarField& q,
                   const ScalarField& S, double eps, const Grid& g, Exec exec) {
  require_match(q, g, "eos_eval(q)");
  require_match(S, g, "eos_eval(S)");
  EosFields out{ScalarField(g), ScalarField(g), ScalarField(g)};

  for_each_node(g, exec, [&](int i, int j2, int j3) {
    const double p = 1.0 + eps * q(i, j2, j3);
    if (p > 0.0) {
      const double s = S(i, j2, j3);
      out.rho(i, j2, j3) = eos.rho(p, s);
      out.a(i, j2, j3) = eos.a(p, s);
      out.b(i, j2, j3) = eos.b(p, s);
    } else {
      out.rho(i, j2, j3) = -1.0;  // flagged below
    }
  });

  // Serial rescan so the first offending node is reported deterministically.
  for (int j3 = 0; j3 < g.nodes3(); ++j3)
    for (int j2 = 0; j2 < g.nodes2(); ++j2)
      for (int i = 0; i < g.nodes1(); ++i) {
        const double p = 1.0 + eps * q(i, j2, j3);
        if (p <= 0.0) {
          std::ostringstream msg;
          msg << "eos_eval: nonpositive pressure " << p << " at node (i=" << i
              << ", j2=" << j2 << ", j3=" << j3 << ")";
          throw EosDomainError(msg.str());
        }
        if (out.rho(i, j2, j3) < eos.rho_floor) {
          std::ostringstream msg;
          msg << "eos_eval: hyperbolicity loss, rho=" << out.rho(i, j2, j3)
              << " < floor " << eos.rho_floor << " at node (i=" << i
              << ", j2=" << j2 << ", j3=" << j3 << ")";
          throw EosDomainError(msg.str());
        }
      }
  return out;
}

}  // namespace machlimit
