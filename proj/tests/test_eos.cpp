#include <cmath>

#include "doctest.h"
#include "machlimit/eos.hpp"
#include "machlimit/reduce.hpp"

using namespace machlimit;

TEST_CASE("eos: reference state") {
  Grid g;
  g.n1 = 8;
  g.n3 = 8;
  EquationOfState eos;
  eos.gamma = 1.4;
  ScalarField q(g), S(g);
  EosFields f = eos_eval(eos, q, S, 0.5, g);
  CHECK(f.rho(0, 0) == doctest::Approx(1.0));
  CHECK(f.a(0, 0) == doctest::Approx(1.0 / 1.4));
  CHECK(f.b(0, 0) == doctest::Approx(-1.0 / 1.4));
  // a(1,0) = 1/gamma for the gamma-law closure.
  CHECK(f.a(3, 4) == doctest::Approx(0.714285714).epsilon(1e-9));
}

TEST_CASE("eos: closed form, eps*q = 2^gamma - 1 gives rho = 2") {
  Grid g;
  g.n1 = 8;
  g.n3 = 8;
  EquationOfState eos;
  eos.gamma = 1.4;
  ScalarField q(g), S(g);
  const double eps = 0.5;
  q.fill((std::pow(2.0, eos.gamma) - 1.0) / eps);
  EosFields f = eos_eval(eos, q, S, eps, g);
  CHECK(f.rho(2, 2) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("eos: rho strictly increasing in p at fixed S") {
  EquationOfState eos;
  eos.gamma = 1.4;
  double prev = 0.0;
  for (int k = 1; k <= 40; ++k) {
    const double p = 0.1 + 0.1 * k;
    const double r = eos.rho(p, 0.3);
    CHECK(r > prev);
    prev = r;
  }
}

TEST_CASE("eos: nonpositive pressure names the offending node") {
  Grid g;
  g.n1 = 8;
  g.n3 = 8;
  EquationOfState eos;
  ScalarField q(g), S(g);
  q(3, 5) = -2.5;  // 1 + eps*q <= 0 at this node
  try {
    eos_eval(eos, q, S, 1.0, g);
    FAIL("expected EosDomainError");
  } catch (const EosDomainError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("i=3") != std::string::npos);
    CHECK(msg.find("j3=5") != std::string::npos);
  }
}

TEST_CASE("eos: density below floor raises hyperbolicity error") {
  Grid g;
  g.n1 = 8;
  g.n3 = 8;
  EquationOfState eos;
  eos.rho_floor = 0.5;
  ScalarField q(g), S(g);
  S.fill(2.0);  // rho = e^{-2/1.4} ~ 0.24 < 0.5
  CHECK_THROWS_AS(eos_eval(eos, q, S, 0.1, g), EosDomainError);
}
