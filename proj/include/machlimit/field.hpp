#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "machlimit/errors.hpp"
#include "machlimit/grid.hpp"

namespace machlimit {

// Nodal scalar field on a Grid.  One ghost node is allocated past each wall
// (j3 = -1 and j3 = nodes3); enforce_boundary fills them by parity reflection.
// Stencil operators never read ghosts: wall rows use explicit closures.
class ScalarField {
 public:
  static constexpr int kGhost = 1;

  ScalarField() = default;
  explicit ScalarField(const Grid& g)
      : n1_(g.nodes1()), n2_(g.nodes2()), nn3_(g.nodes3()),
        v_(static_cast<std::size_t>(n1_) * n2_ * (nn3_ + 2 * kGhost), 0.0) {}

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int nn3() const { return nn3_; }

  double& operator()(int i, int j2, int j3) { return v_[index(i, j2, j3)]; }
  const double& operator()(int i, int j2, int j3) const { return v_[index(i, j2, j3)]; }

  // 2D convenience (n2 == 1).
  double& operator()(int i, int j3) { return v_[index(i, 0, j3)]; }
  const double& operator()(int i, int j3) const { return v_[index(i, 0, j3)]; }

  std::size_t interior_size() const {
    return static_cast<std::size_t>(n1_) * n2_ * nn3_;
  }

  bool same_shape(const ScalarField& o) const {
    return n1_ == o.n1_ && n2_ == o.n2_ && nn3_ == o.nn3_;
  }
  bool matches(const Grid& g) const {
    return n1_ == g.nodes1() && n2_ == g.nodes2() && nn3_ == g.nodes3();
  }

  void fill(double c) { v_.assign(v_.size(), c); }
  bool empty() const { return v_.empty(); }

  const std::vector<double>& raw() const { return v_; }
  std::vector<double>& raw() { return v_; }

 private:
  std::size_t index(int i, int j2, int j3) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n1_) *
               (static_cast<std::size_t>(j2) +
                static_cast<std::size_t>(n2_) *
                    static_cast<std::size_t>(j3 + kGhost));
  }

  int n1_ = 0, n2_ = 0, nn3_ = 0;
  std::vector<double> v_;
};

// Vector field with dim components; component dim-1 is wall-normal.
struct VectorField {
  int dim = 0;
  std::array<ScalarField, 3> comp;

  VectorField() = default;
  explicit VectorField(const Grid& g) : dim(g.dim) {
    for (int d = 0; d < dim; ++d) comp[d] = ScalarField(g);
  }
  ScalarField& operator[](int d) { return comp[d]; }
  const ScalarField& operator[](int d) const { return comp[d]; }
  ScalarField& normal() { return comp[dim - 1]; }
  const ScalarField& normal() const { return comp[dim - 1]; }
};

// Deformation perturbation: dim columns, each a dim-vector.
struct TensorField {
  int dim = 0;
  std::array<VectorField, 3> col;

  TensorField() = default;
  explicit TensorField(const Grid& g) : dim(g.dim) {
    for (int j = 0; j < dim; ++j) col[j] = VectorField(g);
  }
  VectorField& operator[](int j) { return col[j]; }
  const VectorField& operator[](int j) const { return col[j]; }
};

inline void require_match(const ScalarField& f, const Grid& g, const char* what) {
  if (!f.matches(g))
    throw ShapeError(std::string(what) + ": field shape does not match grid");
}

}  // namespace machlimit
