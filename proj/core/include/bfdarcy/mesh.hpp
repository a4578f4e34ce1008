#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "bfdarcy/common.hpp"

namespace bfdarcy {

/// Tag attached to edges that lie on the outer boundary or on the interface.
enum class BoundaryTag {
  none,
  gb_left,
  gb_top,
  gb_right,
  gd_left,
  gd_bottom,
  gd_right,
  sigma,
};

[[nodiscard]] std::string_view to_string(BoundaryTag tag);
[[nodiscard]] std::optional<BoundaryTag> parse_boundary_tag(std::string_view s);
[[nodiscard]] bool is_brinkman_boundary(BoundaryTag tag);
[[nodiscard]] bool is_darcy_boundary(BoundaryTag tag);

struct Triangle {
  std::array<int, 3> v;
  Region region;
};

struct TaggedEdge {
  int a;
  int b;
  BoundaryTag tag;
};

/// Conforming triangulation of Omega_B u Sigma u Omega_D.
///
/// Local edge i of a triangle is opposite its local vertex i.  Every edge
/// carries a global unit normal pointing out of its lower-indexed incident
/// triangle (outward on the boundary); `edge_sign(t, i)` is +1 when that
/// normal is the outward normal of triangle t and -1 otherwise.
class Mesh {
 public:
  /// Validates and builds edge connectivity.  Throws Error with code
  /// inverted_triangle, non_matching_interface or mesh_format.
  Mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
       std::vector<TaggedEdge> tagged_edges);

  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_triangles() const { return static_cast<int>(triangles_.size()); }
  [[nodiscard]] int num_edges() const { return static_cast<int>(edges_.size()); }

  [[nodiscard]] const Vec2& vertex(int i) const { return vertices_[i]; }
  [[nodiscard]] const std::vector<Vec2>& vertices() const { return vertices_; }
  [[nodiscard]] const Triangle& triangle(int t) const { return triangles_[t]; }
  [[nodiscard]] const std::vector<Triangle>& triangles() const { return triangles_; }
  [[nodiscard]] Region region(int t) const { return triangles_[t].region; }

  [[nodiscard]] const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  /// Incident triangles; the second entry is -1 on the boundary.
  [[nodiscard]] const std::array<int, 2>& edge_triangles(int e) const { return edge_tris_[e]; }
  [[nodiscard]] BoundaryTag edge_tag(int e) const { return edge_tags_[e]; }
  [[nodiscard]] int triangle_edge(int t, int i) const { return tri_edges_[t][i]; }
  [[nodiscard]] int edge_sign(int t, int i) const { return tri_signs_[t][i]; }
  [[nodiscard]] const Vec2& edge_normal(int e) const { return edge_normals_[e]; }
  [[nodiscard]] double edge_length(int e) const;
  [[nodiscard]] double area(int t) const;

  /// Edges carrying a tag other than none, in edge order.
  [[nodiscard]] std::vector<TaggedEdge> tagged_edges() const;

  [[nodiscard]] double h_brinkman() const { return h_b_; }
  [[nodiscard]] double h_darcy() const { return h_d_; }
  [[nodiscard]] double h_sigma() const { return h_sigma_; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 2>> edge_tris_;
  std::vector<BoundaryTag> edge_tags_;
  std::vector<Vec2> edge_normals_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::array<int, 3>> tri_signs_;
  double h_b_ = 0.0;
  double h_d_ = 0.0;
  double h_sigma_ = 0.0;
};

/// Omega_D = (x_min, x_max) x (y_bottom, y_interface) below
/// Omega_B = (x_min, x_max) x (y_interface, y_top); Sigma is the shared side.
struct StackedGeometry {
  double x_min = -0.5;
  double x_max = 0.5;
  double y_bottom = -0.5;
  double y_interface = 0.5;
  double y_top = 1.5;
};

enum class MeshPattern { right_diagonal, crisscross };

Mesh generate_stacked_rect(const StackedGeometry& geometry, int nx, int ny_b, int ny_d,
                           MeshPattern pattern = MeshPattern::right_diagonal);

/// Ordered interface partition Sigma_h and its pairing into Sigma_2h.
struct InterfaceData {
  struct SigmaEdge {
    int edge;
    int brinkman_triangle;
    int darcy_triangle;
    int start_vertex;  // in increasing-x order along Sigma
    int end_vertex;
    int macro;         // index of the Sigma_2h macro-edge
    bool second_half;  // true for the right half of its macro-edge
    Vec2 normal;       // unit normal, outward from Omega_B
  };

  std::vector<SigmaEdge> edges;
  /// Vertex indices of the multiplier nodes (macro-edge endpoints).
  std::vector<int> nodes;
  /// Normal outward from Omega_B (taken from the first Sigma edge).
  Vec2 normal = Vec2::Zero();

  [[nodiscard]] int num_macro_edges() const { return static_cast<int>(nodes.size()) - 1; }
};

InterfaceData build_interface(const Mesh& mesh);

/// ASCII mesh I/O, header `bfdarcy-mesh v1`.
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
Mesh load_mesh(const std::filesystem::path& path);

}  // namespace bfdarcy
