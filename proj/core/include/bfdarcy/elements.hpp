#pragma once

#include <array>
#include <span>
#include <vector>

#include "bfdarcy/mesh.hpp"
#include "bfdarcy/quadrature.hpp"

namespace bfdarcy {

/// Affine geometry of one mesh triangle.
struct TriangleGeometry {
  std::array<Vec2, 3> p;
  double area = 0.0;
  std::array<Vec2, 3> grad_bary;       // gradients of the barycentric coordinates
  std::array<double, 3> edge_length;   // local edge i is opposite vertex i
  std::array<Vec2, 3> outward_normal;
  std::array<int, 3> sign;             // orientation of the global edge normal

  TriangleGeometry(const Mesh& mesh, int t);

  [[nodiscard]] Vec2 map(const Vec2& xi) const {
    return p[0] + xi.x() * (p[1] - p[0]) + xi.y() * (p[2] - p[0]);
  }
  [[nodiscard]] static std::array<double, 3> bary(const Vec2& xi) {
    return {1.0 - xi.x() - xi.y(), xi.x(), xi.y()};
  }
  [[nodiscard]] std::array<double, 3> bary_at(const Vec2& x) const;
  [[nodiscard]] Vec2 global_normal(int i) const { return sign[i] * outward_normal[i]; }
};

/// Local Bernardi-Raugel basis, ordered [v0x, v0y, v1x, v1y, v2x, v2y, e0, e1, e2].
///
/// The basis is dual to the degrees of freedom "vertex value" and
/// "edge flux along the global edge normal": vertex functions carry zero
/// flux through every edge and each bubble carries unit flux through its
/// own edge.
struct BRBasis {
  static constexpr int size = 9;
  std::array<Vec2, 9> value;
  std::array<Mat2, 9> grad;  // grad(i, j) = d v_i / d x_j
  std::array<double, 9> div;
};

[[nodiscard]] BRBasis eval_br(const TriangleGeometry& g, const std::array<double, 3>& bary);

/// Lowest-order Raviart-Thomas basis; phi_i has unit flux through local
/// edge i along the global edge normal.
struct RT0Basis {
  static constexpr int size = 3;
  std::array<Vec2, 3> value;
  std::array<double, 3> div;
};

[[nodiscard]] RT0Basis eval_rt0(const TriangleGeometry& g, const Vec2& x);

/// Bernardi-Raugel numbering: two components per vertex, then one bubble
/// per edge, over the triangles of one region.
class BRSpace {
 public:
  BRSpace(const Mesh& mesh, Region region);

  [[nodiscard]] int size() const { return size_; }
  [[nodiscard]] int num_vertex_dofs() const { return 2 * num_vertices_; }
  /// -1 when the vertex is not in the region.
  [[nodiscard]] int vertex_dof(int vertex, int component) const;
  [[nodiscard]] int edge_dof(int edge) const { return edge_index_[edge]; }
  [[nodiscard]] std::array<int, 9> local_dofs(int t) const;
  [[nodiscard]] const std::vector<int>& triangles() const { return triangles_; }
  [[nodiscard]] const Mesh& mesh() const { return *mesh_; }

 private:
  const Mesh* mesh_;
  std::vector<int> vertex_index_;
  std::vector<int> edge_index_;
  std::vector<int> triangles_;
  int num_vertices_ = 0;
  int size_ = 0;
};

/// RT0 numbering: one flux per edge of the region's triangles.
class RT0Space {
 public:
  RT0Space(const Mesh& mesh, Region region);

  [[nodiscard]] int size() const { return size_; }
  [[nodiscard]] int edge_dof(int edge) const { return edge_index_[edge]; }
  [[nodiscard]] std::array<int, 3> local_dofs(int t) const;
  [[nodiscard]] const std::vector<int>& triangles() const { return triangles_; }
  [[nodiscard]] const Mesh& mesh() const { return *mesh_; }

 private:
  const Mesh* mesh_;
  std::vector<int> edge_index_;
  std::vector<int> triangles_;
  int size_ = 0;
};

/// Continuous piecewise-linear hats on the Sigma_2h macro-edges.
class MultiplierSpace {
 public:
  MultiplierSpace(const Mesh& mesh, const InterfaceData& iface);

  [[nodiscard]] int size() const { return static_cast<int>(iface_->nodes.size()); }
  [[nodiscard]] const InterfaceData& interface() const { return *iface_; }

  struct LocalHats {
    std::array<int, 2> node;
    std::array<double, 2> value;
    std::array<double, 2> slope;  // derivative along increasing arclength
  };
  /// Hats that are nonzero on Sigma_h edge k at parameter t in [0, 1]
  /// (measured from the edge's start vertex).
  [[nodiscard]] LocalHats eval(int k, double t) const;

  /// Arclength coordinate of each multiplier node, starting at 0.
  [[nodiscard]] const std::vector<double>& node_arclength() const { return node_s_; }
  [[nodiscard]] double total_length() const { return node_s_.back(); }
  /// Values of all hats at arclength s (the partition-of-unity check).
  [[nodiscard]] std::vector<double> eval_all(double s) const;

 private:
  const InterfaceData* iface_;
  std::vector<double> edge_len_;
  std::vector<double> node_s_;
};

/// Bernardi-Raugel interpolant: vertex values of v and edge fluxes of v.
[[nodiscard]] Vector interpolate_br(const VectorField& v, const BRSpace& space,
                                    int edge_points = 6);
/// Raviart-Thomas interpolant: edge fluxes of v.
[[nodiscard]] Vector interpolate_rt0(const VectorField& v, const RT0Space& space,
                                     int edge_points = 6);
/// Elementwise L2 projection onto P0; entries ordered like `triangles`.
[[nodiscard]] Vector project_p0(const ScalarField& f, const Mesh& mesh,
                                std::span<const int> triangles, int degree = 6);

/// Evaluate discrete fields on triangle t at physical point x.
[[nodiscard]] Vec2 eval_br_field(const BRSpace& space, std::span<const double> coeffs, int t,
                                 const Vec2& x);
[[nodiscard]] Mat2 eval_br_gradient(const BRSpace& space, std::span<const double> coeffs, int t,
                                    const Vec2& x);
[[nodiscard]] Vec2 eval_rt0_field(const RT0Space& space, std::span<const double> coeffs, int t,
                                  const Vec2& x);
[[nodiscard]] double rt0_divergence(const RT0Space& space, std::span<const double> coeffs, int t);

/// Triangles of `mesh` belonging to `region`, in mesh order.
[[nodiscard]] std::vector<int> region_triangles(const Mesh& mesh, Region region);

}  // namespace bfdarcy
