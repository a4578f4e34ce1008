#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "bfdarcy/solver.hpp"

namespace bfdarcy {

/// Closed-form fields of a manufactured solution.
struct ExactSolution {
  VectorField u_brinkman;
  TensorField grad_u_brinkman;
  VectorField u_darcy;
  ScalarField div_u_darcy;
  ScalarField p_brinkman;
  ScalarField p_darcy;
  ScalarField lambda;
  VectorField grad_lambda;  // gradient of the field whose trace is lambda
};

struct ManufacturedProblem {
  ExactSolution exact;
  ProblemData data;
};

/// Smooth trigonometric/exponential solution on Omega_D = (-0.5, 0.5)^2
/// with Sigma on {x2 = 0.5}; sources, boundary data and the Sigma traction
/// correction are derived for `params`.  Throws Error(invalid_argument) if
/// the geometry does not have that Darcy square and interface.
[[nodiscard]] ManufacturedProblem manufactured_example1(const StackedGeometry& geometry,
                                                        const PhysicalParams& params);

[[nodiscard]] StackedGeometry example1_geometry();

/// Heterogeneous channel flow: parabolic inflow on the left of Omega_B,
/// zero traction on its right side, zero pressure at the Darcy bottom.
[[nodiscard]] ProblemData example2_data();
[[nodiscard]] StackedGeometry example2_geometry();

struct InterfaceNorms {
  double l2 = 0.0;
  double h1 = 0.0;  // full H1(Sigma) norm
  /// ||.||_0^{1/2} ||.||_1^{1/2}
  [[nodiscard]] double interpolated() const;
};

/// Norms of lambda_h - lambda over Sigma_h (lambda may be empty for the
/// norms of lambda_h itself).  Derivatives are taken edgewise.
[[nodiscard]] InterfaceNorms interface_norms(const Discretization& disc,
                                             std::span<const double> lambda_coeffs,
                                             const ScalarField& lambda = {},
                                             const VectorField& grad_lambda = {});

struct ErrorReport {
  double h_brinkman = 0.0;
  double h_darcy = 0.0;
  double h_sigma = 0.0;
  int dofs = 0;
  int iterations = 0;
  double e_u_brinkman = 0.0;  // H1
  double e_p_brinkman = 0.0;  // L2
  double e_u_darcy = 0.0;     // H(div)
  double e_p_darcy = 0.0;     // L2
  double e_lambda = 0.0;      // (0,1)-interpolated
};

[[nodiscard]] ErrorReport compute_errors(const Discretization& disc, const SolutionFields& solution,
                                         const ExactSolution& exact, int degree = kVolumeDegree);

struct RateRow {
  std::optional<double> u_brinkman;
  std::optional<double> p_brinkman;
  std::optional<double> u_darcy;
  std::optional<double> p_darcy;
  std::optional<double> lambda;
};

/// log(e/e')/log(h/h') between consecutive levels using each variable's
/// own region mesh size; the first row is empty.
[[nodiscard]] std::vector<RateRow> eoc(std::span<const ErrorReport> reports);

/// Single-pair rate, exposed for tests.
[[nodiscard]] double eoc_rate(double e, double e_next, double h, double h_next);

/// Writes `level,h_B,h_D,h_Sigma,DOF,iter,e_uB,r_uB,...` with `--` for
/// undefined rates, and for the errors too when `with_errors` is false.
void write_convergence_csv(std::ostream& os, std::span<const ErrorReport> reports,
                           bool with_errors = true);

struct StructuralChecks {
  double mean_pressure = 0.0;         // |int_Omega p_h|
  double interface_flux = 0.0;        // max_m |<u_B.n - u_D.n, xi_m>|
  double darcy_divergence = 0.0;      // max_T |div u_D,h - P_D(g_D)|
};

[[nodiscard]] StructuralChecks check_invariants(const Discretization& disc,
                                                const SolutionFields& solution,
                                                const ProblemData& data);

/// max over Sigma_h edges of |u_D,h . n| (constant per edge for RT0).
[[nodiscard]] double max_interface_normal_velocity(const Discretization& disc,
                                                   const SolutionFields& solution);

struct PropertyReport {
  int samples = 0;
  int monotonicity_violations = 0;
  int nonpositive_monotonicity = 0;  // a != b with a zero or negative product
  int continuity_violations = 0;
  double max_continuity_ratio = 0.0;
  double max_symmetry_defect = 0.0;

  [[nodiscard]] bool passed() const {
    return monotonicity_violations == 0 && nonpositive_monotonicity == 0 &&
           continuity_violations == 0 && max_symmetry_defect <= 1e-12;
  }
};

/// Random pairs in the unit disk for each exponent: monotonicity and
/// continuity of u -> |u|^{p-2} u and symmetry of its derivative.
[[nodiscard]] PropertyReport pointwise_property_suite(int samples, std::uint64_t seed,
                                                      std::span<const double> exponents);

}  // namespace bfdarcy
