#pragma once

#include <vector>

#include "machlimit/grid.hpp"

namespace machlimit {

// Kernel driver selection.  Parallel and Serial run the same per-node body;
// the serial path is the reference implementation the tests compare against
// and must stay bit-identical to the parallel one.
enum class Exec { Serial, Parallel };

template <class Body>
inline void for_each_node(const Grid& g, Exec exec, Body body) {
  const int nn3 = g.nodes3();
  const int n2 = g.nodes2();
  const int n1 = g.nodes1();
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int j3 = 0; j3 < nn3; ++j3)
      for (int j2 = 0; j2 < n2; ++j2)
        for (int i = 0; i < n1; ++i) body(i, j2, j3);
  } else {
    for (int j3 = 0; j3 < nn3; ++j3)
      for (int j2 = 0; j2 < n2; ++j2)
        for (int i = 0; i < n1; ++i) body(i, j2, j3);
  }
}

// Deterministic reduction: per-plane partial sums accumulated in fixed j3
// order so the result does not depend on the number of threads.
template <class Body>
inline double sum_nodes(const Grid& g, Exec exec, Body per_node) {
  const int nn3 = g.nodes3();
  const int n2 = g.nodes2();
  const int n1 = g.nodes1();
  std::vector<double> partial(static_cast<std::size_t>(nn3), 0.0);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int j3 = 0; j3 < nn3; ++j3) {
      double s = 0.0;
      for (int j2 = 0; j2 < n2; ++j2)
        for (int i = 0; i < n1; ++i) s += per_node(i, j2, j3);
      partial[j3] = s;
    }
  } else {
    for (int j3 = 0; j3 < nn3; ++j3) {
      double s = 0.0;
      for (int j2 = 0; j2 < n2; ++j2)
        for (int i = 0; i < n1; ++i) s += per_node(i, j2, j3);
      partial[j3] = s;
    }
  }
  double total = 0.0;
  for (int j3 = 0; j3 < nn3; ++j3) total += partial[j3];
  return total;
}

template <class Body>
inline double max_nodes(const Grid& g, Exec exec, Body per_node) {
  const int nn3 = g.nodes3();
  const int n2 = g.nodes2();
  const int n1 = g.nodes1();
  std::vector<double> partial(static_cast<std::size_t>(nn3), 0.0);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int j3 = 0; j3 < nn3; ++j3) {
      double m = 0.0;
      for (int j2 = 0; j2 < n2; ++j2)
        for (int i = 0; i < n1; ++i) {
          const double v = per_node(i, j2, j3);
          if (v > m) m = v;
        }
      partial[j3] = m;
    }
  } else {
    for (int j3 = 0; j3 < nn3; ++j3) {
      double m = 0.0;
      for (int j2 = 0; j2 < n2; ++j2)
        for (int i = 0; i < n1; ++i) {
          const double v = per_node(i, j2, j3);
          if (v > m) m = v;
        }
      partial[j3] = m;
    }
  }
  double total = 0.0;
  for (int j3 = 0; j3 < nn3; ++j3)
    if (partial[j3] > total) total = partial[j3];
  return total;
}

}  // namespace machlimit
