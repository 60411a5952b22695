#include "machlimit/ops.hpp"

namespace machlimit {
namespace ops {

namespace {

inline int wrap_up(int i, int n) { return i + 1 == n ? 0 : i + 1; }
inline int wrap_dn(int i, int n) { return i == 0 ? n - 1 : i - 1; }

}  // namespace

void deriv(const ScalarField& f, const Grid& g, int axis, WallRule rule,
           ScalarField& out, Exec exec) {
  require_match(f, g, "deriv");
  if (!out.matches(g)) out = ScalarField(g);
  const int n1 = g.nodes1(), n2 = g.nodes2(), nn3 = g.nodes3();
  const int last = nn3 - 1;

  if (axis == 0) {
    const double c = 1.0 / (2.0 * g.h1());
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      out(i, j2, j3) = c * (f(wrap_up(i, n1), j2, j3) - f(wrap_dn(i, n1), j2, j3));
    });
    return;
  }
  if (axis == 1 && g.dim == 3) {
    const double c = 1.0 / (2.0 * g.h2());
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      out(i, j2, j3) = c * (f(i, wrap_up(j2, n2), j3) - f(i, wrap_dn(j2, n2), j3));
    });
    return;
  }
  if (axis != g.normal_axis())
    throw ShapeError("deriv: axis out of range for grid dimension");

  const double c = 1.0 / (2.0 * g.h3());
  const double ch = 1.0 / g.h3();
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    if (j3 > 0 && j3 < last) {
      out(i, j2, j3) = c * (f(i, j2, j3 + 1) - f(i, j2, j3 - 1));
    } else if (j3 == 0) {
      switch (rule) {
        case WallRule::OneSided:
          out(i, j2, 0) = c * (-3.0 * f(i, j2, 0) + 4.0 * f(i, j2, 1) - f(i, j2, 2));
          break;
        case WallRule::Even:
          out(i, j2, 0) = 0.0;
          break;
        case WallRule::Odd:
          out(i, j2, 0) = ch * f(i, j2, 1);
          break;
      }
    } else {
      switch (rule) {
        case WallRule::OneSided:
          out(i, j2, last) =
              c * (3.0 * f(i, j2, last) - 4.0 * f(i, j2, last - 1) + f(i, j2, last - 2));
          break;
        case WallRule::Even:
          out(i, j2, last) = 0.0;
          break;
        case WallRule::Odd:
          out(i, j2, last) = -ch * f(i, j2, last - 1);
          break;
      }
    }
  });
}

ScalarField deriv(const ScalarField& f, const Grid& g, int axis, WallRule rule,
                  Exec exec) {
  ScalarField out(g);
  deriv(f, g, axis, rule, out, exec);
  return out;
}

void deriv2(const ScalarField& f, const Grid& g, int axis, WallRule rule,
            ScalarField& out, Exec exec) {
  require_match(f, g, "deriv2");
  if (!out.matches(g)) out = ScalarField(g);
  const int n1 = g.nodes1(), n2 = g.nodes2(), nn3 = g.nodes3();
  const int last = nn3 - 1;

  if (axis == 0) {
    const double c = 1.0 / (g.h1() * g.h1());
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      out(i, j2, j3) = c * (f(wrap_up(i, n1), j2, j3) - 2.0 * f(i, j2, j3) +
                            f(wrap_dn(i, n1), j2, j3));
    });
    return;
  }
  if (axis == 1 && g.dim == 3) {
    const double c = 1.0 / (g.h2() * g.h2());
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      out(i, j2, j3) = c * (f(i, wrap_up(j2, n2), j3) - 2.0 * f(i, j2, j3) +
                            f(i, wrap_dn(j2, n2), j3));
    });
    return;
  }
  if (axis != g.normal_axis())
    throw ShapeError("deriv2: axis out of range for grid dimension");

  const double c = 1.0 / (g.h3() * g.h3());
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    if (j3 > 0 && j3 < last) {
      out(i, j2, j3) =
          c * (f(i, j2, j3 + 1) - 2.0 * f(i, j2, j3) + f(i, j2, j3 - 1));
    } else if (j3 == 0) {
      switch (rule) {
        case WallRule::OneSided:
          out(i, j2, 0) = c * (2.0 * f(i, j2, 0) - 5.0 * f(i, j2, 1) +
                               4.0 * f(i, j2, 2) - f(i, j2, 3));
          break;
        case WallRule::Even:
          out(i, j2, 0) = 2.0 * c * (f(i, j2, 1) - f(i, j2, 0));
          break;
        case WallRule::Odd:
          out(i, j2, 0) = -2.0 * c * f(i, j2, 0);
          break;
      }
    } else {
      switch (rule) {
        case WallRule::OneSided:
          out(i, j2, last) = c * (2.0 * f(i, j2, last) - 5.0 * f(i, j2, last - 1) +
                                  4.0 * f(i, j2, last - 2) - f(i, j2, last - 3));
          break;
        case WallRule::Even:
          out(i, j2, last) = 2.0 * c * (f(i, j2, last - 1) - f(i, j2, last));
          break;
        case WallRule::Odd:
          out(i, j2, last) = -2.0 * c * f(i, j2, last);
          break;
      }
    }
  });
}

void grad(const ScalarField& f, const Grid& g, VectorField& out, WallRule rule,
          Exec exec) {
  if (out.dim != g.dim) out = VectorField(g);
  for (int d = 0; d < g.dim; ++d) deriv(f, g, d, rule, out[d], exec);
}

VectorField grad(const ScalarField& f, const Grid& g, WallRule rule, Exec exec) {
  VectorField out(g);
  grad(f, g, out, rule, exec);
  return out;
}

void div(const VectorField& X, const Grid& g, ScalarField& out,
         WallRule normal_rule, Exec exec) {
  if (X.dim != g.dim) throw ShapeError("div: vector dimension mismatch");
  if (!out.matches(g)) out = ScalarField(g);
  ScalarField tmp(g);
  deriv(X[0], g, 0, WallRule::OneSided, out, exec);
  for (int d = 1; d < g.dim; ++d) {
    deriv(X[d], g, d, d == g.normal_axis() ? normal_rule : WallRule::OneSided,
          tmp, exec);
    for_each_node(g, exec,
                  [&](int i, int j2, int j3) { out(i, j2, j3) += tmp(i, j2, j3); });
  }
}

ScalarField div(const VectorField& X, const Grid& g, WallRule normal_rule,
                Exec exec) {
  ScalarField out(g);
  div(X, g, out, normal_rule, exec);
  return out;
}

void curl(const VectorField& X, const Grid& g, VectorField& out,
          WallRule tangential_rule, Exec exec) {
  if (X.dim != g.dim) throw ShapeError("curl: vector dimension mismatch");
  if (out.dim != g.dim) out = VectorField(g);
  const int na = g.normal_axis();
  if (g.dim == 2) {
    ScalarField d1x3 = deriv(X[1], g, 0, WallRule::OneSided, exec);
    ScalarField d3x1 = deriv(X[0], g, na, tangential_rule, exec);
    for_each_node(g, exec, [&](int i, int j2, int j3) {
      out[0](i, j2, j3) = d1x3(i, j2, j3) - d3x1(i, j2, j3);
      out[1](i, j2, j3) = 0.0;
    });
    return;
  }
  // 3D: (d2 X3 - d3 X2, d3 X1 - d1 X3, d1 X2 - d2 X1)
  ScalarField a = deriv(X[2], g, 1, WallRule::OneSided, exec);
  ScalarField b = deriv(X[1], g, 2, tangential_rule, exec);
  ScalarField c = deriv(X[0], g, 2, tangential_rule, exec);
  ScalarField d = deriv(X[2], g, 0, WallRule::OneSided, exec);
  ScalarField e = deriv(X[1], g, 0, WallRule::OneSided, exec);
  ScalarField f = deriv(X[0], g, 1, WallRule::OneSided, exec);
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    out[0](i, j2, j3) = a(i, j2, j3) - b(i, j2, j3);
    out[1](i, j2, j3) = c(i, j2, j3) - d(i, j2, j3);
    out[2](i, j2, j3) = e(i, j2, j3) - f(i, j2, j3);
  });
}

VectorField curl(const VectorField& X, const Grid& g, WallRule tangential_rule,
                 Exec exec) {
  VectorField out(g);
  curl(X, g, out, tangential_rule, exec);
  return out;
}

void laplacian(const ScalarField& f, const Grid& g, ScalarField& out,
               WallRule rule, Exec exec) {
  if (!out.matches(g)) out = ScalarField(g);
  ScalarField tmp(g);
  deriv2(f, g, 0, rule, out, exec);
  for (int d = 1; d < g.dim; ++d) {
    deriv2(f, g, d, rule, tmp, exec);
    for_each_node(g, exec,
                  [&](int i, int j2, int j3) { out(i, j2, j3) += tmp(i, j2, j3); });
  }
}

ScalarField laplacian(const ScalarField& f, const Grid& g, WallRule rule,
                      Exec exec) {
  ScalarField out(g);
  laplacian(f, g, out, rule, exec);
  return out;
}

void directional_derivative(const VectorField& fj_total, const ScalarField& f,
                            const Grid& g, ScalarField& out, WallRule rule,
                            Exec exec) {
  if (fj_total.dim != g.dim)
    throw ShapeError("directional_derivative: vector dimension mismatch");
  require_match(f, g, "directional_derivative");
  if (!out.matches(g)) out = ScalarField(g);
  VectorField gf = grad(f, g, rule, exec);
  for_each_node(g, exec, [&](int i, int j2, int j3) {
    double s = 0.0;
    for (int d = 0; d < g.dim; ++d) s += fj_total[d](i, j2, j3) * gf[d](i, j2, j3);
    out(i, j2, j3) = s;
  });
}

ScalarField directional_derivative(const VectorField& fj_total,
                                   const ScalarField& f, const Grid& g,
                                   WallRule rule, Exec exec) {
  ScalarField out(g);
  directional_derivative(fj_total, f, g, out, rule, exec);
  return out;
}

}  // namespace ops
}  // namespace machlimit
