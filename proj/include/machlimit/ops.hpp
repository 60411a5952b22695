#pragma once

#include "machlimit/exec.hpp"
#include "machlimit/field.hpp"
#include "machlimit/grid.hpp"

namespace machlimit {
namespace ops {

// Treatment of the normal-axis derivative on the wall rows.  OneSided is the
// generic 2nd-order closure (exact on linears).  Even/Odd evaluate the
// centered stencil against a parity reflection of the field across the wall;
// they are 2nd-order on fields of the matching symmetry class and are what
// the projection solver and the solver right-hand sides use.
enum class WallRule { OneSided, Even, Odd };

// d/dx_axis.  Tangential axes are periodic centered; `rule` applies only to
// the wall rows of the normal axis.
void deriv(const ScalarField& f, const Grid& g, int axis, WallRule rule,
           ScalarField& out, Exec exec = Exec::Parallel);
ScalarField deriv(const ScalarField& f, const Grid& g, int axis,
                  WallRule rule = WallRule::OneSided, Exec exec = Exec::Parallel);

// Fused second derivative along one axis (used by laplacian).
void deriv2(const ScalarField& f, const Grid& g, int axis, WallRule rule,
            ScalarField& out, Exec exec = Exec::Parallel);

void grad(const ScalarField& f, const Grid& g, VectorField& out,
          WallRule rule = WallRule::OneSided, Exec exec = Exec::Parallel);
VectorField grad(const ScalarField& f, const Grid& g,
                 WallRule rule = WallRule::OneSided, Exec exec = Exec::Parallel);

// Divergence; `normal_rule` applies to the wall-normal component (Odd for
// velocity-class fields under the parity calculus).
void div(const VectorField& X, const Grid& g, ScalarField& out,
         WallRule normal_rule = WallRule::OneSided, Exec exec = Exec::Parallel);
ScalarField div(const VectorField& X, const Grid& g,
                WallRule normal_rule = WallRule::OneSided,
                Exec exec = Exec::Parallel);

// Curl; in 2D the scalar d1 X3 - d3 X1 is returned in component 0.
// `tangential_rule` applies to normal-axis derivatives of tangential
// components (Even for velocity-class fields).
void curl(const VectorField& X, const Grid& g, VectorField& out,
          WallRule tangential_rule = WallRule::OneSided,
          Exec exec = Exec::Parallel);
VectorField curl(const VectorField& X, const Grid& g,
                 WallRule tangential_rule = WallRule::OneSided,
                 Exec exec = Exec::Parallel);

void laplacian(const ScalarField& f, const Grid& g, ScalarField& out,
               WallRule rule = WallRule::OneSided, Exec exec = Exec::Parallel);
ScalarField laplacian(const ScalarField& f, const Grid& g,
                      WallRule rule = WallRule::OneSided,
                      Exec exec = Exec::Parallel);

// (Fj + Fbar_j) . grad f, with Fj_total the full column.
void directional_derivative(const VectorField& fj_total, const ScalarField& f,
                            const Grid& g, ScalarField& out,
                            WallRule rule = WallRule::OneSided,
                            Exec exec = Exec::Parallel);
ScalarField directional_derivative(const VectorField& fj_total,
                                   const ScalarField& f, const Grid& g,
                                   WallRule rule = WallRule::OneSided,
                                   Exec exec = Exec::Parallel);

}  // namespace ops
}  // namespace machlimit
