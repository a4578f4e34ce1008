#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "bfdarcy/elements.hpp"
#include "bfdarcy/mesh.hpp"

namespace bfdarcy {

/// Viscosity, Forchheimer coefficient and exponent, and the (viscosity
/// scaled) permeability tensors of the two regions.
struct PhysicalParams {
  double mu = 1.0;
  double forchheimer = 0.0;
  double exponent = 3.0;
  TensorField k_brinkman;
  TensorField k_darcy;
};

[[nodiscard]] TensorField isotropic(double k);
[[nodiscard]] TensorField constant_tensor(const Mat2& k);

/// Checks mu > 0, F >= 0, p in [3, 4] and that both permeabilities are
/// symmetric positive definite at every quadrature point of their region.
void validate_params(const PhysicalParams& params, const Mesh& mesh);

/// Boundary tags listed here carry the natural condition of their region
/// (zero traction on Gamma_B, zero pressure on Gamma_D); all others are
/// essential.
struct BoundaryConditions {
  std::vector<BoundaryTag> natural;

  [[nodiscard]] bool is_natural(BoundaryTag tag) const;
};

struct ProblemData {
  VectorField f_brinkman;
  VectorField f_darcy;
  ScalarField g_darcy;
  /// Dirichlet data for u_B on the essential part of Gamma_B.
  VectorField u_brinkman_boundary;
  /// Field whose normal flux is imposed on the essential part of Gamma_D.
  VectorField u_darcy_boundary;
  /// Optional traction added as <t, v_B> on Sigma.
  VectorField sigma_traction;
  BoundaryConditions bc;
};

/// Homogeneous data: zero sources and zero boundary values.
[[nodiscard]] ProblemData zero_data();

enum class ConstraintMode {
  exact,    // mean-zero pressure via one extra scalar unknown
  penalty,  // the same unknown with a 1e8 diagonal, i.e. a 1e-8 rank-one penalty
  none,     // pressure already fixed by natural boundary conditions
};

inline constexpr double kPenaltyParameter = 1e8;

/// Global numbering [u_B | u_D | p | lambda | zeta] and essential values.
struct DofMap {
  int offset_brinkman = 0;
  int offset_darcy = 0;
  int offset_pressure = 0;
  int offset_lambda = 0;
  int offset_zeta = -1;  // -1 without a mean-pressure unknown
  int size = 0;

  std::vector<int> constrained;
  std::vector<double> constrained_values;
  std::vector<char> is_constrained;

  [[nodiscard]] int num_brinkman() const { return offset_darcy - offset_brinkman; }
  [[nodiscard]] int num_darcy() const { return offset_pressure - offset_darcy; }
  [[nodiscard]] int num_pressure() const { return offset_lambda - offset_pressure; }
  [[nodiscard]] int num_lambda() const {
    return (offset_zeta < 0 ? size : offset_zeta) - offset_lambda;
  }
  /// DOF count of the four finite element spaces (excluding zeta).
  [[nodiscard]] int num_fe_dofs() const { return offset_zeta < 0 ? size : offset_zeta; }
};

/// Mesh, interface, element spaces and numbering of one problem instance.
/// Immutable after construction.
class Discretization {
 public:
  Discretization(Mesh mesh, const ProblemData& data, ConstraintMode mode);

  [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
  [[nodiscard]] const InterfaceData& interface() const { return *iface_; }
  [[nodiscard]] const BRSpace& br() const { return *br_; }
  [[nodiscard]] const RT0Space& rt() const { return *rt_; }
  [[nodiscard]] const MultiplierSpace& multiplier() const { return *mult_; }
  [[nodiscard]] const DofMap& dofs() const { return dofs_; }
  [[nodiscard]] ConstraintMode mode() const { return mode_; }

  [[nodiscard]] int pressure_dof(int t) const { return dofs_.offset_pressure + t; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::shared_ptr<const InterfaceData> iface_;
  std::shared_ptr<const BRSpace> br_;
  std::shared_ptr<const RT0Space> rt_;
  std::shared_ptr<const MultiplierSpace> mult_;
  DofMap dofs_;
  ConstraintMode mode_;
};

using Triplet = Eigen::Triplet<double>;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct SparseSystem {
  int n = 0;
  std::vector<Triplet> triplets;
  Vector rhs;

  /// Column-major compressed matrix with duplicates summed.
  [[nodiscard]] SparseMatrix matrix() const;
  [[nodiscard]] Eigen::SparseMatrix<double, Eigen::RowMajor> csr() const;
};

/// Quadrature degree used for all volume forms.
inline constexpr int kVolumeDegree = 6;
/// Quadrature degree for the source terms f_B, f_D and g_D.
inline constexpr int kSourceDegree = 10;
/// Gauss points per edge for interface and boundary integrals.
inline constexpr int kEdgePoints = 4;

/// Action [a(u), v] for every velocity basis function v.
[[nodiscard]] Vector assemble_a(const Discretization& disc, const PhysicalParams& params,
                                const Vector& coeffs);

/// Gateaux derivative Da(w) of a at the Brinkman velocity in `coeffs`.
[[nodiscard]] std::vector<Triplet> assemble_da(const Discretization& disc,
                                               const PhysicalParams& params,
                                               const Vector& coeffs);

/// Both off-diagonal coupling blocks of b (B and its transpose).
[[nodiscard]] std::vector<Triplet> assemble_b(const Discretization& disc);

/// [f, v] - (g_D, q) plus the optional Sigma traction.
[[nodiscard]] Vector assemble_load(const Discretization& disc, const ProblemData& data);

/// Newton right-hand-side term F (p - 2) (|w|^{p-2} w, v_B).
[[nodiscard]] Vector newton_correction(const Discretization& disc, const PhysicalParams& params,
                                       const Vector& coeffs);

[[nodiscard]] inline Vector assemble_rhs(const Discretization& disc, const ProblemData& data,
                                         const PhysicalParams& params, const Vector& coeffs) {
  return assemble_load(disc, data) + newton_correction(disc, params, coeffs);
}

/// Mean-pressure coupling (zeta row and column) for the discretization's mode.
[[nodiscard]] std::vector<Triplet> mean_pressure_coupling(const Discretization& disc);

/// Essential DOFs become identity rows holding their prescribed values;
/// their columns are moved to the right-hand side so the matrix stays
/// symmetric.  Throws Error(invalid_argument) if the system is smaller
/// than the DOF map.
[[nodiscard]] SparseSystem apply_constraints(SparseSystem system, const DofMap& dofs);

/// Linearised system of one Newton step at the iterate `coeffs`.
[[nodiscard]] SparseSystem assemble_newton_system(const Discretization& disc,
                                                  const PhysicalParams& params,
                                                  const ProblemData& data, const Vector& coeffs);
/// Same, with the iterate-independent load from assemble_load precomputed.
[[nodiscard]] SparseSystem assemble_newton_system(const Discretization& disc,
                                                  const PhysicalParams& params,
                                                  const Vector& load, const Vector& coeffs);

/// Residual of the discrete nonlinear problem at `coeffs` (rows of essential
/// DOFs hold the mismatch with their prescribed values).
[[nodiscard]] Vector nonlinear_residual(const Discretization& disc, const PhysicalParams& params,
                                        const ProblemData& data, const Vector& coeffs);

/// Initial Newton iterate: the constant `u0` in Omega_B, zero elsewhere,
/// essential values imposed.
[[nodiscard]] Vector initial_iterate(const Discretization& disc, const Vec2& u0);

}  // namespace bfdarcy
