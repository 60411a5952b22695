#pragma once

#include <vector>

#include "machlimit/state.hpp"

namespace machlimit {

// View over the integrator's ring buffer: equispaced states, oldest first.
// Diagnostics read the window; they never advance it.
struct TrajWindow {
  std::vector<const State*> states;
  double dt = 0.0;

  int depth() const { return static_cast<int>(states.size()); }
  const State& head() const { return *states.back(); }
  // k steps behind the head.
  const State& back(int k) const { return *states[states.size() - 1 - k]; }
};

}  // namespace machlimit
