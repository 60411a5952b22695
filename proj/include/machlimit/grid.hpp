#pragma once

#include <string>

#include "machlimit/errors.hpp"

namespace machlimit {

// Slab grid: axis 1 (and axis 2 in 3D) periodic with extent L, axis 3 spans
// [-L3, 0] with solid walls at both ends.  Counts are cells; the wall axis
// carries n3+1 nodes so both walls sit exactly on grid nodes.  Node layout is
// x1-fastest, matching the snapshot format.
struct Grid {
  int dim = 2;
  int n1 = 64;
  int n2 = 1;  // used only when dim == 3
  int n3 = 64;
  double L1 = 1.0;
  double L2 = 1.0;
  double L3 = 1.0;

  double h1() const { return L1 / n1; }
  double h2() const { return L2 / n2; }
  double h3() const { return L3 / n3; }
  double h_min() const;

  int nodes1() const { return n1; }            // periodic, no duplicate node
  int nodes2() const { return dim == 3 ? n2 : 1; }
  int nodes3() const { return n3 + 1; }        // walls at j3 = 0 and j3 = n3

  double x1(int i) const { return i * h1(); }
  double x2(int j) const { return j * h2(); }
  double x3(int j) const { return -L3 + j * h3(); }

  double volume() const { return L1 * (dim == 3 ? L2 : 1.0) * L3; }

  // Trapezoid weight along the wall axis; periodic axes carry uniform weights.
  double w3(int j3) const { return (j3 == 0 || j3 == n3) ? 0.5 : 1.0; }
  double cell_volume(int j3) const {
    return h1() * (dim == 3 ? h2() : 1.0) * h3() * w3(j3);
  }

  int normal_axis() const { return dim - 1; }

  void validate() const;
  bool operator==(const Grid&) const = default;
};

inline double Grid::h_min() const {
  double h = h1() < h3() ? h1() : h3();
  if (dim == 3 && h2() < h) h = h2();
  return h;
}

inline void Grid::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("grid.dim must be 2 or 3");
  if (n1 < 8 || n3 < 8 || (dim == 3 && n2 < 8))
    throw ConfigError("grid cell counts must be >= 8 per axis");
  if (L1 <= 0.0 || L3 <= 0.0 || (dim == 3 && L2 <= 0.0))
    throw ConfigError("grid extents must be positive");
}

}  // namespace machlimit
