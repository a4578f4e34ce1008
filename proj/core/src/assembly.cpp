#include "bfdarcy/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "bfdarcy/forchheimer.hpp"

namespace bfdarcy {

namespace {

// Visits every volume quadrature point of the triangles in `tris`.
template <class Fn>
void for_each_qp(const Mesh& mesh, const std::vector<int>& tris, Fn&& fn,
                 int degree = kVolumeDegree) {
  const auto& rule = quad_rule(degree);
  for (int t : tris) {
    const TriangleGeometry g(mesh, t);
    for (const auto& q : rule.points) {
      fn(t, g, TriangleGeometry::bary(q.xi), g.map(q.xi), 2.0 * g.area * q.weight);
    }
  }
}

Vec2 br_value(const BRBasis& basis, const std::array<int, 9>& dofs, const Vector& c, int offset) {
  Vec2 out = Vec2::Zero();
  for (int j = 0; j < 9; ++j) out += c[offset + dofs[j]] * basis.value[j];
  return out;
}

void push_nonzero(std::vector<Triplet>& out, int r, int c, double v) {
  if (v != 0.0) out.emplace_back(r, c, v);
}

}  // namespace

TensorField isotropic(double k) {
  return [k](const Vec2&) -> Mat2 { return k * Mat2::Identity(); };
}

TensorField constant_tensor(const Mat2& k) {
  return [k](const Vec2&) -> Mat2 { return k; };
}

void validate_params(const PhysicalParams& params, const Mesh& mesh) {
  if (!(params.mu > 0.0)) throw Error(ErrorCode::invalid_argument, "viscosity mu must be positive");
  if (!(params.forchheimer >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "Forchheimer coefficient F must be nonnegative");
  }
  if (!(params.exponent >= 3.0 && params.exponent <= 4.0)) {
    throw Error(ErrorCode::invalid_argument, "exponent out of range [3,4]");
  }
  if (!params.k_brinkman || !params.k_darcy) {
    throw Error(ErrorCode::invalid_argument, "permeability tensors are not set");
  }
  const auto& rule = quad_rule(kVolumeDegree);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleGeometry g(mesh, t);
    const auto& k = mesh.region(t) == Region::brinkman ? params.k_brinkman : params.k_darcy;
    for (const auto& q : rule.points) {
      const Mat2 kt = k(g.map(q.xi));
      if (std::abs(kt(0, 1) - kt(1, 0)) > 1e-12 * kt.norm()) {
        throw Error(ErrorCode::invalid_argument, "permeability tensor is not symmetric");
      }
      const Eigen::SelfAdjointEigenSolver<Mat2> eig(kt);
      if (!(eig.eigenvalues().minCoeff() > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "permeability tensor is not positive definite");
      }
    }
  }
}

bool BoundaryConditions::is_natural(BoundaryTag tag) const {
  return std::find(natural.begin(), natural.end(), tag) != natural.end();
}

ProblemData zero_data() {
  ProblemData d;
  d.f_brinkman = [](const Vec2&) -> Vec2 { return Vec2::Zero(); };
  d.f_darcy = d.f_brinkman;
  d.g_darcy = [](const Vec2&) { return 0.0; };
  d.u_brinkman_boundary = d.f_brinkman;
  d.u_darcy_boundary = d.f_brinkman;
  return d;
}

Discretization::Discretization(Mesh mesh, const ProblemData& data, ConstraintMode mode)
    : mesh_(std::make_shared<const Mesh>(std::move(mesh))), mode_(mode) {
  iface_ = std::make_shared<const InterfaceData>(build_interface(*mesh_));
  br_ = std::make_shared<const BRSpace>(*mesh_, Region::brinkman);
  rt_ = std::make_shared<const RT0Space>(*mesh_, Region::darcy);
  mult_ = std::make_shared<const MultiplierSpace>(*mesh_, *iface_);

  dofs_.offset_brinkman = 0;
  dofs_.offset_darcy = br_->size();
  dofs_.offset_pressure = dofs_.offset_darcy + rt_->size();
  dofs_.offset_lambda = dofs_.offset_pressure + mesh_->num_triangles();
  const int fe_end = dofs_.offset_lambda + mult_->size();
  dofs_.offset_zeta = mode == ConstraintMode::none ? -1 : fe_end;
  dofs_.size = fe_end + (mode == ConstraintMode::none ? 0 : 1);

  std::vector<double> value(static_cast<std::size_t>(dofs_.size), 0.0);
  dofs_.is_constrained.assign(static_cast<std::size_t>(dofs_.size), 0);
  auto prescribe = [&](int dof, double v) {
    const auto i = static_cast<std::size_t>(dof);
    if (dofs_.is_constrained[i]) {
      if (std::abs(value[i] - v) > 1e-12 * (1.0 + std::abs(v))) {
        throw Error(ErrorCode::invalid_argument,
                    "conflicting essential values on DOF " + std::to_string(dof));
      }
      return;
    }
    dofs_.is_constrained[i] = 1;
    value[i] = v;
    dofs_.constrained.push_back(dof);
  };

  const Mesh& m = *mesh_;
  for (int e = 0; e < m.num_edges(); ++e) {
    const BoundaryTag tag = m.edge_tag(e);
    if (tag == BoundaryTag::none || tag == BoundaryTag::sigma || data.bc.is_natural(tag)) continue;
    const Vec2& a = m.vertex(m.edge(e)[0]);
    const Vec2& b = m.vertex(m.edge(e)[1]);
    const Vec2 n = m.edge_normal(e);
    if (is_brinkman_boundary(tag)) {
      const auto& g = data.u_brinkman_boundary;
      for (int v : m.edge(e)) {
        const Vec2 val = g(m.vertex(v));
        prescribe(dofs_.offset_brinkman + br_->vertex_dof(v, 0), val.x());
        prescribe(dofs_.offset_brinkman + br_->vertex_dof(v, 1), val.y());
      }
      prescribe(dofs_.offset_brinkman + br_->edge_dof(e),
                integrate_segment(a, b, kEdgePoints, [&](const Vec2& x) { return g(x).dot(n); }));
    } else {
      const auto& g = data.u_darcy_boundary;
      prescribe(dofs_.offset_darcy + rt_->edge_dof(e),
                integrate_segment(a, b, kEdgePoints, [&](const Vec2& x) { return g(x).dot(n); }));
    }
  }
  std::sort(dofs_.constrained.begin(), dofs_.constrained.end());
  for (int d : dofs_.constrained) dofs_.constrained_values.push_back(value[static_cast<std::size_t>(d)]);
}

SparseMatrix SparseSystem::matrix() const {
  SparseMatrix a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> SparseSystem::csr() const {
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Vector assemble_a(const Discretization& disc, const PhysicalParams& params, const Vector& c) {
  const Mesh& mesh = disc.mesh();
  const auto& dofs = disc.dofs();
  Vector out = Vector::Zero(dofs.size);
  const int ob = dofs.offset_brinkman;
  for_each_qp(mesh, disc.br().triangles(), [&](int t, const TriangleGeometry& g,
                                               const std::array<double, 3>& l, const Vec2& x,
                                               double w) {
    const auto basis = eval_br(g, l);
    const auto local = disc.br().local_dofs(t);
    Vec2 u = Vec2::Zero();
    Mat2 grad = Mat2::Zero();
    for (int j = 0; j < 9; ++j) {
      u += c[ob + local[j]] * basis.value[j];
      grad += c[ob + local[j]] * basis.grad[j];
    }
    const Vec2 reaction = params.k_brinkman(x).inverse() * u +
                          params.forchheimer * forchheimer_flux(u, params.exponent);
    for (int i = 0; i < 9; ++i) {
      out[ob + local[i]] +=
          w * (params.mu * (grad.array() * basis.grad[i].array()).sum() + reaction.dot(basis.value[i]));
    }
  });
  const int od = dofs.offset_darcy;
  for_each_qp(mesh, disc.rt().triangles(), [&](int t, const TriangleGeometry& g,
                                               const std::array<double, 3>&, const Vec2& x,
                                               double w) {
    const auto basis = eval_rt0(g, x);
    const auto local = disc.rt().local_dofs(t);
    Vec2 u = Vec2::Zero();
    for (int j = 0; j < 3; ++j) u += c[od + local[j]] * basis.value[j];
    const Vec2 drag = params.k_darcy(x).inverse() * u;
    for (int i = 0; i < 3; ++i) out[od + local[i]] += w * drag.dot(basis.value[i]);
  });
  return out;
}

std::vector<Triplet> assemble_da(const Discretization& disc, const PhysicalParams& params,
                                 const Vector& c) {
  const Mesh& mesh = disc.mesh();
  const auto& dofs = disc.dofs();
  std::vector<Triplet> out;
  out.reserve(disc.br().triangles().size() * 81 + disc.rt().triangles().size() * 9);

  const int ob = dofs.offset_brinkman;
  const auto& rule = quad_rule(kVolumeDegree);
  const bool nonlinear = params.forchheimer != 0.0;
  for (int t : disc.br().triangles()) {
    const TriangleGeometry g(mesh, t);
    const auto local = disc.br().local_dofs(t);
    Eigen::Matrix<double, 9, 9> ke = Eigen::Matrix<double, 9, 9>::Zero();
    for (const auto& q : rule.points) {
      const auto basis = eval_br(g, TriangleGeometry::bary(q.xi));
      const Vec2 x = g.map(q.xi);
      const double w = 2.0 * g.area * q.weight;
      Mat2 reaction = params.k_brinkman(x).inverse();
      if (nonlinear) {
        const Vec2 wb = br_value(basis, local, c, ob);
        reaction += params.forchheimer * forchheimer_jacobian(wb, params.exponent);
      }
      for (int i = 0; i < 9; ++i) {
        const Vec2 ri = reaction.transpose() * basis.value[i];
        for (int j = 0; j < 9; ++j) {
          ke(i, j) += w * (params.mu * (basis.grad[i].array() * basis.grad[j].array()).sum() +
                           ri.dot(basis.value[j]));
        }
      }
    }
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) push_nonzero(out, ob + local[i], ob + local[j], ke(i, j));
    }
  }

  const int od = dofs.offset_darcy;
  for (int t : disc.rt().triangles()) {
    const TriangleGeometry g(mesh, t);
    const auto local = disc.rt().local_dofs(t);
    Eigen::Matrix3d ke = Eigen::Matrix3d::Zero();
    for (const auto& q : rule.points) {
      const Vec2 x = g.map(q.xi);
      const auto basis = eval_rt0(g, x);
      const double w = 2.0 * g.area * q.weight;
      const Mat2 kinv = params.k_darcy(x).inverse();
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) ke(i, j) += w * basis.value[i].dot(kinv * basis.value[j]);
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) push_nonzero(out, od + local[i], od + local[j], ke(i, j));
    }
  }
  return out;
}

std::vector<Triplet> assemble_b(const Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  const auto& dofs = disc.dofs();
  std::vector<Triplet> out;
  auto mirrored = [&](int row, int col, double v) {
    push_nonzero(out, row, col, v);
    push_nonzero(out, col, row, v);
  };

  // -(q, div v_B); div of a BR function is linear, degree 2 is exact.
  const auto& rule = quad_rule(2);
  for (int t : disc.br().triangles()) {
    const TriangleGeometry g(mesh, t);
    const auto local = disc.br().local_dofs(t);
    std::array<double, 9> integral{};
    for (const auto& q : rule.points) {
      const auto basis = eval_br(g, TriangleGeometry::bary(q.xi));
      for (int j = 0; j < 9; ++j) integral[j] += 2.0 * g.area * q.weight * basis.div[j];
    }
    for (int j = 0; j < 9; ++j) {
      // vertex functions carry no flux, so their integral vanishes up to rounding
      if (std::abs(integral[j]) < 1e-14 * g.edge_length[0]) continue;
      mirrored(disc.pressure_dof(t), dofs.offset_brinkman + local[j], -integral[j]);
    }
  }
  // -(q, div v_D)
  for (int t : disc.rt().triangles()) {
    const TriangleGeometry g(mesh, t);
    const auto local = disc.rt().local_dofs(t);
    for (int j = 0; j < 3; ++j) {
      mirrored(disc.pressure_dof(t), dofs.offset_darcy + local[j], -static_cast<double>(g.sign[j]));
    }
  }
  // <v_B . n - v_D . n, xi> on Sigma
  const auto& iface = disc.interface();
  const auto& mult = disc.multiplier();
  for (std::size_t k = 0; k < iface.edges.size(); ++k) {
    const auto& se = iface.edges[k];
    const Vec2& a = mesh.vertex(se.start_vertex);
    const Vec2& b = mesh.vertex(se.end_vertex);
    const double len = (b - a).norm();
    const TriangleGeometry gb(mesh, se.brinkman_triangle);
    const TriangleGeometry gd(mesh, se.darcy_triangle);
    const auto local_b = disc.br().local_dofs(se.brinkman_triangle);
    const auto local_d = disc.rt().local_dofs(se.darcy_triangle);
    Eigen::Matrix<double, 2, 9> cb = Eigen::Matrix<double, 2, 9>::Zero();
    Eigen::Matrix<double, 2, 3> cd = Eigen::Matrix<double, 2, 3>::Zero();
    MultiplierSpace::LocalHats hats{};
    for (const auto& q : gauss_legendre(kEdgePoints)) {
      const Vec2 x = a + q.t * (b - a);
      hats = mult.eval(static_cast<int>(k), q.t);
      const auto bb = eval_br(gb, gb.bary_at(x));
      const auto bd = eval_rt0(gd, x);
      for (int m = 0; m < 2; ++m) {
        const double w = q.weight * len * hats.value[m];
        for (int j = 0; j < 9; ++j) cb(m, j) += w * bb.value[j].dot(se.normal);
        for (int j = 0; j < 3; ++j) cd(m, j) -= w * bd.value[j].dot(se.normal);
      }
    }
    for (int m = 0; m < 2; ++m) {
      const int row = dofs.offset_lambda + hats.node[m];
      for (int j = 0; j < 9; ++j) {
        if (std::abs(cb(m, j)) > 1e-15) mirrored(row, dofs.offset_brinkman + local_b[j], cb(m, j));
      }
      for (int j = 0; j < 3; ++j) {
        if (std::abs(cd(m, j)) > 1e-15) mirrored(row, dofs.offset_darcy + local_d[j], cd(m, j));
      }
    }
  }
  return out;
}

Vector assemble_load(const Discretization& disc, const ProblemData& data) {
  const Mesh& mesh = disc.mesh();
  const auto& dofs = disc.dofs();
  Vector out = Vector::Zero(dofs.size);
  const int ob = dofs.offset_brinkman;
  for_each_qp(mesh, disc.br().triangles(), [&](int t, const TriangleGeometry& g,
                                               const std::array<double, 3>& l, const Vec2& x,
                                               double w) {
    const auto basis = eval_br(g, l);
    const auto local = disc.br().local_dofs(t);
    const Vec2 f = data.f_brinkman(x);
    for (int i = 0; i < 9; ++i) out[ob + local[i]] += w * f.dot(basis.value[i]);
  }, kSourceDegree);
  const int od = dofs.offset_darcy;
  for_each_qp(mesh, disc.rt().triangles(), [&](int t, const TriangleGeometry& g,
                                               const std::array<double, 3>&, const Vec2& x,
                                               double w) {
    const auto basis = eval_rt0(g, x);
    const auto local = disc.rt().local_dofs(t);
    const Vec2 f = data.f_darcy(x);
    for (int i = 0; i < 3; ++i) out[od + local[i]] += w * f.dot(basis.value[i]);
    out[disc.pressure_dof(t)] -= w * data.g_darcy(x);
  }, kSourceDegree);
  if (data.sigma_traction) {
    for (const auto& se : disc.interface().edges) {
      const Vec2& a = mesh.vertex(se.start_vertex);
      const Vec2& b = mesh.vertex(se.end_vertex);
      const double len = (b - a).norm();
      const TriangleGeometry g(mesh, se.brinkman_triangle);
      const auto local = disc.br().local_dofs(se.brinkman_triangle);
      for (const auto& q : gauss_legendre(kEdgePoints)) {
        const Vec2 x = a + q.t * (b - a);
        const auto basis = eval_br(g, g.bary_at(x));
        const Vec2 traction = data.sigma_traction(x);
        for (int i = 0; i < 9; ++i) out[ob + local[i]] += q.weight * len * traction.dot(basis.value[i]);
      }
    }
  }
  return out;
}

Vector newton_correction(const Discretization& disc, const PhysicalParams& params,
                         const Vector& c) {
  const auto& dofs = disc.dofs();
  Vector out = Vector::Zero(dofs.size);
  if (params.forchheimer == 0.0) return out;
  const int ob = dofs.offset_brinkman;
  const double scale = params.forchheimer * (params.exponent - 2.0);
  for_each_qp(disc.mesh(), disc.br().triangles(), [&](int t, const TriangleGeometry& g,
                                                      const std::array<double, 3>& l,
                                                      const Vec2&, double w) {
    const auto basis = eval_br(g, l);
    const auto local = disc.br().local_dofs(t);
    const Vec2 flux = scale * forchheimer_flux(br_value(basis, local, c, ob), params.exponent);
    for (int i = 0; i < 9; ++i) out[ob + local[i]] += w * flux.dot(basis.value[i]);
  });
  return out;
}

std::vector<Triplet> mean_pressure_coupling(const Discretization& disc) {
  std::vector<Triplet> out;
  const int zeta = disc.dofs().offset_zeta;
  if (zeta < 0) return out;
  for (int t = 0; t < disc.mesh().num_triangles(); ++t) {
    out.emplace_back(disc.pressure_dof(t), zeta, disc.mesh().area(t));
    out.emplace_back(zeta, disc.pressure_dof(t), disc.mesh().area(t));
  }
  if (disc.mode() == ConstraintMode::penalty) out.emplace_back(zeta, zeta, kPenaltyParameter);
  return out;
}

SparseSystem apply_constraints(SparseSystem system, const DofMap& dofs) {
  if (system.n != dofs.size || system.rhs.size() != dofs.size) {
    throw Error(ErrorCode::invalid_argument, "system size does not match the DOF map");
  }
  Vector value = Vector::Zero(dofs.size);
  for (std::size_t k = 0; k < dofs.constrained.size(); ++k) {
    value[dofs.constrained[k]] = dofs.constrained_values[k];
  }
  std::vector<Triplet> kept;
  kept.reserve(system.triplets.size() + dofs.constrained.size());
  for (const auto& tr : system.triplets) {
    const auto r = static_cast<std::size_t>(tr.row());
    const auto c = static_cast<std::size_t>(tr.col());
    if (dofs.is_constrained[r]) continue;
    if (dofs.is_constrained[c]) {
      system.rhs[tr.row()] -= tr.value() * value[tr.col()];
      continue;
    }
    kept.push_back(tr);
  }
  for (int d : dofs.constrained) {
    kept.emplace_back(d, d, 1.0);
    system.rhs[d] = value[d];
  }
  system.triplets = std::move(kept);
  return system;
}

SparseSystem assemble_newton_system(const Discretization& disc, const PhysicalParams& params,
                                    const ProblemData& data, const Vector& coeffs) {
  return assemble_newton_system(disc, params, assemble_load(disc, data), coeffs);
}

SparseSystem assemble_newton_system(const Discretization& disc, const PhysicalParams& params,
                                    const Vector& load, const Vector& coeffs) {
  SparseSystem sys;
  sys.n = disc.dofs().size;
  sys.triplets = assemble_da(disc, params, coeffs);
  const auto b = assemble_b(disc);
  sys.triplets.insert(sys.triplets.end(), b.begin(), b.end());
  const auto z = mean_pressure_coupling(disc);
  sys.triplets.insert(sys.triplets.end(), z.begin(), z.end());
  sys.rhs = load + newton_correction(disc, params, coeffs);
  return apply_constraints(std::move(sys), disc.dofs());
}

Vector nonlinear_residual(const Discretization& disc, const PhysicalParams& params,
                          const ProblemData& data, const Vector& coeffs) {
  SparseSystem lin;
  lin.n = disc.dofs().size;
  lin.triplets = assemble_b(disc);
  const auto z = mean_pressure_coupling(disc);
  lin.triplets.insert(lin.triplets.end(), z.begin(), z.end());
  Vector r = assemble_a(disc, params, coeffs) + lin.matrix() * coeffs - assemble_load(disc, data);
  const auto& dofs = disc.dofs();
  for (std::size_t k = 0; k < dofs.constrained.size(); ++k) {
    r[dofs.constrained[k]] = coeffs[dofs.constrained[k]] - dofs.constrained_values[k];
  }
  return r;
}

Vector initial_iterate(const Discretization& disc, const Vec2& u0) {
  const auto& dofs = disc.dofs();
  Vector x = Vector::Zero(dofs.size);
  x.segment(dofs.offset_brinkman, dofs.num_brinkman()) =
      interpolate_br([u0](const Vec2&) -> Vec2 { return u0; }, disc.br(), 1);
  for (std::size_t k = 0; k < dofs.constrained.size(); ++k) {
    x[dofs.constrained[k]] = dofs.constrained_values[k];
  }
  return x;
}

}  // namespace bfdarcy
