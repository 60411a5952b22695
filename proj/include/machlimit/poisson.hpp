#pragma once

#include <memory>
#include <vector>

#include "machlimit/field.hpp"
#include "machlimit/grid.hpp"

namespace machlimit {

// Direct solver for the composed stencil Laplacian D.(G psi) under the parity
// closures (psi even across both walls), where D and G are the centered
// 2nd-order divergence/gradient of module ops.  The operator is diagonalized
// exactly by an FFT over the periodic tangential axes and a DCT-I along the
// wall axis, because the parity closure of the wide stencil is precisely the
// cosine reflection.  Modes annihilated by the stencil symbol (mean and
// checkerboards) are pinned to zero; for compatible right-hand sides their
// content is at rounding level.
//
// Not copyable (owns FFTW plans); not thread-safe across concurrent solves on
// the same instance.  Plan creation is serialized internally.
class PoissonSolver {
 public:
  explicit PoissonSolver(const Grid& g);
  ~PoissonSolver();
  PoissonSolver(const PoissonSolver&) = delete;
  PoissonSolver& operator=(const PoissonSolver&) = delete;

  // Solves D.(G psi) = rhs; returns the relative modal mass pinned away
  // (rounding-level when rhs is in the operator range).
  double solve(const ScalarField& rhs, ScalarField& psi);

  const Grid& grid() const { return g_; }

 private:
  struct Impl;
  Grid g_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace machlimit
