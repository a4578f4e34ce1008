#include "bfdarcy/elements.hpp"

#include <algorithm>
#include <cmath>

namespace bfdarcy {

TriangleGeometry::TriangleGeometry(const Mesh& mesh, int t) {
  const auto& v = mesh.triangle(t).v;
  for (int i = 0; i < 3; ++i) p[i] = mesh.vertex(v[i]);
  area = mesh.area(t);
  for (int i = 0; i < 3; ++i) {
    const Vec2 d = p[(i + 2) % 3] - p[(i + 1) % 3];
    edge_length[i] = d.norm();
    outward_normal[i] = Vec2(d.y(), -d.x()) / edge_length[i];
    // grad(eta_i) points inward, normal to the opposite edge, with
    // magnitude 1 / height = |e_i| / (2|T|).
    grad_bary[i] = -outward_normal[i] * edge_length[i] / (2.0 * area);
    sign[i] = mesh.edge_sign(t, i);
  }
}

std::array<double, 3> TriangleGeometry::bary_at(const Vec2& x) const {
  std::array<double, 3> l{};
  for (int i = 0; i < 3; ++i) l[i] = 1.0 / 3.0 + grad_bary[i].dot(x - (p[0] + p[1] + p[2]) / 3.0);
  return l;
}

BRBasis eval_br(const TriangleGeometry& g, const std::array<double, 3>& l) {
  BRBasis out;
  std::array<Vec2, 3> bubble;
  std::array<Mat2, 3> bubble_grad;
  for (int e = 0; e < 3; ++e) {
    const int a = (e + 1) % 3;
    const int b = (e + 2) % 3;
    const Vec2 n = g.global_normal(e);
    const double scale = 6.0 / g.edge_length[e];
    bubble[e] = scale * l[a] * l[b] * n;
    const Vec2 grad_ab = l[a] * g.grad_bary[b] + l[b] * g.grad_bary[a];
    bubble_grad[e] = scale * n * grad_ab.transpose();
    out.value[6 + e] = bubble[e];
    out.grad[6 + e] = bubble_grad[e];
  }
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 2; ++k) {
      Vec2 val = Vec2::Zero();
      val[k] = l[i];
      Mat2 grad = Mat2::Zero();
      grad.row(k) = g.grad_bary[i].transpose();
      // Remove the flux of eta_i e_k through the two edges touching vertex i.
      for (int e : {(i + 1) % 3, (i + 2) % 3}) {
        const double flux = 0.5 * g.edge_length[e] * g.global_normal(e)[k];
        val -= flux * bubble[e];
        grad -= flux * bubble_grad[e];
      }
      out.value[2 * i + k] = val;
      out.grad[2 * i + k] = grad;
    }
  }
  for (int j = 0; j < 9; ++j) out.div[j] = out.grad[j].trace();
  return out;
}

RT0Basis eval_rt0(const TriangleGeometry& g, const Vec2& x) {
  RT0Basis out;
  for (int i = 0; i < 3; ++i) {
    out.value[i] = g.sign[i] * (x - g.p[i]) / (2.0 * g.area);
    out.div[i] = g.sign[i] / g.area;
  }
  return out;
}

std::vector<int> region_triangles(const Mesh& mesh, Region region) {
  std::vector<int> out;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (mesh.region(t) == region) out.push_back(t);
  }
  return out;
}

BRSpace::BRSpace(const Mesh& mesh, Region region)
    : mesh_(&mesh),
      vertex_index_(static_cast<std::size_t>(mesh.num_vertices()), -1),
      edge_index_(static_cast<std::size_t>(mesh.num_edges()), -1),
      triangles_(region_triangles(mesh, region)) {
  for (int t : triangles_) {
    for (int v : mesh.triangle(t).v) {
      if (vertex_index_[v] < 0) vertex_index_[v] = num_vertices_++;
    }
  }
  int next = 2 * num_vertices_;
  for (int t : triangles_) {
    for (int i = 0; i < 3; ++i) {
      const int e = mesh.triangle_edge(t, i);
      if (edge_index_[e] < 0) edge_index_[e] = next++;
    }
  }
  size_ = next;
}

int BRSpace::vertex_dof(int vertex, int component) const {
  const int idx = vertex_index_[vertex];
  return idx < 0 ? -1 : 2 * idx + component;
}

std::array<int, 9> BRSpace::local_dofs(int t) const {
  const auto& v = mesh_->triangle(t).v;
  std::array<int, 9> out{};
  for (int i = 0; i < 3; ++i) {
    out[2 * i] = vertex_dof(v[i], 0);
    out[2 * i + 1] = vertex_dof(v[i], 1);
    out[6 + i] = edge_index_[mesh_->triangle_edge(t, i)];
  }
  return out;
}

RT0Space::RT0Space(const Mesh& mesh, Region region)
    : mesh_(&mesh),
      edge_index_(static_cast<std::size_t>(mesh.num_edges()), -1),
      triangles_(region_triangles(mesh, region)) {
  for (int t : triangles_) {
    for (int i = 0; i < 3; ++i) {
      const int e = mesh.triangle_edge(t, i);
      if (edge_index_[e] < 0) edge_index_[e] = size_++;
    }
  }
}

std::array<int, 3> RT0Space::local_dofs(int t) const {
  return {edge_index_[mesh_->triangle_edge(t, 0)], edge_index_[mesh_->triangle_edge(t, 1)],
          edge_index_[mesh_->triangle_edge(t, 2)]};
}

MultiplierSpace::MultiplierSpace(const Mesh& mesh, const InterfaceData& iface)
    : iface_(&iface) {
  for (const auto& se : iface.edges) edge_len_.push_back(mesh.edge_length(se.edge));
  node_s_.push_back(0.0);
  for (std::size_t k = 0; k + 1 < edge_len_.size(); k += 2) {
    node_s_.push_back(node_s_.back() + edge_len_[k] + edge_len_[k + 1]);
  }
}

MultiplierSpace::LocalHats MultiplierSpace::eval(int k, double t) const {
  const auto& se = iface_->edges[static_cast<std::size_t>(k)];
  const int m = se.macro;
  const double first = edge_len_[static_cast<std::size_t>(2 * m)];
  const double macro_len = first + edge_len_[static_cast<std::size_t>(2 * m + 1)];
  const double s = (se.second_half ? first + t * edge_len_[static_cast<std::size_t>(k)]
                                   : t * edge_len_[static_cast<std::size_t>(k)]) /
                   macro_len;
  return {{m, m + 1}, {1.0 - s, s}, {-1.0 / macro_len, 1.0 / macro_len}};
}

std::vector<double> MultiplierSpace::eval_all(double s) const {
  std::vector<double> out(static_cast<std::size_t>(size()), 0.0);
  const auto m = std::min<std::size_t>(
      static_cast<std::size_t>(std::upper_bound(node_s_.begin(), node_s_.end(), s) -
                               node_s_.begin()),
      node_s_.size() - 1);
  const std::size_t left = m == 0 ? 0 : m - 1;
  const double r = (s - node_s_[left]) / (node_s_[left + 1] - node_s_[left]);
  out[left] = 1.0 - r;
  out[left + 1] = r;
  return out;
}

Vector interpolate_br(const VectorField& v, const BRSpace& space, int edge_points) {
  const Mesh& mesh = space.mesh();
  Vector out = Vector::Zero(space.size());
  for (int x = 0; x < mesh.num_vertices(); ++x) {
    if (space.vertex_dof(x, 0) < 0) continue;
    const Vec2 val = v(mesh.vertex(x));
    out[space.vertex_dof(x, 0)] = val.x();
    out[space.vertex_dof(x, 1)] = val.y();
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int dof = space.edge_dof(e);
    if (dof < 0) continue;
    const Vec2 n = mesh.edge_normal(e);
    out[dof] = integrate_segment(mesh.vertex(mesh.edge(e)[0]), mesh.vertex(mesh.edge(e)[1]),
                                 edge_points, [&](const Vec2& p) { return v(p).dot(n); });
  }
  return out;
}

Vector interpolate_rt0(const VectorField& v, const RT0Space& space, int edge_points) {
  const Mesh& mesh = space.mesh();
  Vector out = Vector::Zero(space.size());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int dof = space.edge_dof(e);
    if (dof < 0) continue;
    const Vec2 n = mesh.edge_normal(e);
    out[dof] = integrate_segment(mesh.vertex(mesh.edge(e)[0]), mesh.vertex(mesh.edge(e)[1]),
                                 edge_points, [&](const Vec2& p) { return v(p).dot(n); });
  }
  return out;
}

Vector project_p0(const ScalarField& f, const Mesh& mesh, std::span<const int> triangles,
                  int degree) {
  const auto& rule = quad_rule(degree);
  Vector out(static_cast<Eigen::Index>(triangles.size()));
  for (std::size_t k = 0; k < triangles.size(); ++k) {
    const TriangleGeometry g(mesh, triangles[k]);
    double sum = 0.0;
    for (const auto& q : rule.points) sum += q.weight * f(g.map(q.xi));
    // weights sum to 1/2, so the mean is sum / (1/2)
    out[static_cast<Eigen::Index>(k)] = 2.0 * sum;
  }
  return out;
}

Vec2 eval_br_field(const BRSpace& space, std::span<const double> coeffs, int t, const Vec2& x) {
  const TriangleGeometry g(space.mesh(), t);
  const auto basis = eval_br(g, g.bary_at(x));
  const auto dofs = space.local_dofs(t);
  Vec2 out = Vec2::Zero();
  for (int j = 0; j < 9; ++j) out += coeffs[static_cast<std::size_t>(dofs[j])] * basis.value[j];
  return out;
}

Mat2 eval_br_gradient(const BRSpace& space, std::span<const double> coeffs, int t,
                      const Vec2& x) {
  const TriangleGeometry g(space.mesh(), t);
  const auto basis = eval_br(g, g.bary_at(x));
  const auto dofs = space.local_dofs(t);
  Mat2 out = Mat2::Zero();
  for (int j = 0; j < 9; ++j) out += coeffs[static_cast<std::size_t>(dofs[j])] * basis.grad[j];
  return out;
}

Vec2 eval_rt0_field(const RT0Space& space, std::span<const double> coeffs, int t, const Vec2& x) {
  const TriangleGeometry g(space.mesh(), t);
  const auto basis = eval_rt0(g, x);
  const auto dofs = space.local_dofs(t);
  Vec2 out = Vec2::Zero();
  for (int j = 0; j < 3; ++j) out += coeffs[static_cast<std::size_t>(dofs[j])] * basis.value[j];
  return out;
}

double rt0_divergence(const RT0Space& space, std::span<const double> coeffs, int t) {
  const TriangleGeometry g(space.mesh(), t);
  const auto dofs = space.local_dofs(t);
  double out = 0.0;
  for (int j = 0; j < 3; ++j) out += coeffs[static_cast<std::size_t>(dofs[j])] * g.sign[j] / g.area;
  return out;
}

}  // namespace bfdarcy
