#pragma once

#include <string>
#include <vector>

#include "bfdarcy/assembly.hpp"

namespace bfdarcy {

enum class LinearBackend {
  automatic,  // dense below kDenseThreshold unknowns, sparse otherwise
  dense,
  sparse,
};

inline constexpr int kDenseThreshold = 300;

/// Solves A x = b for a square, possibly indefinite matrix with a pivoting
/// LU factorisation.  Throws Error(singular_system) on a zero pivot.
[[nodiscard]] Vector sparse_lu_solve(const SparseMatrix& a, const Vector& b,
                                     LinearBackend backend = LinearBackend::automatic);
[[nodiscard]] inline Vector sparse_lu_solve(const SparseSystem& system,
                                            LinearBackend backend = LinearBackend::automatic) {
  return sparse_lu_solve(system.matrix(), system.rhs, backend);
}

/// Solves a system whose last unknown `zeta` carries a dense border row and
/// column (the mean-value constraint) without factoring the border: the
/// sparse block is regularised at unknown `pin` and the exact solution is
/// recovered from a 2x2 system.
[[nodiscard]] Vector solve_bordered(const SparseMatrix& m, const Vector& b, int zeta, int pin,
                                    LinearBackend backend = LinearBackend::automatic);

/// Dispatches to solve_bordered when the DOF map has a zeta unknown.
[[nodiscard]] Vector solve_newton_system(const SparseMatrix& a, const Vector& b, const DofMap& dofs,
                                         LinearBackend backend = LinearBackend::automatic);

/// ||Ax - b||_inf / (||A||_inf ||x||_inf + ||b||_inf)
[[nodiscard]] double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b);

/// Coefficient views of a full solution vector.
struct SolutionFields {
  Vector coeffs;
  DofMap dofs;

  [[nodiscard]] auto u_brinkman() const { return coeffs.segment(dofs.offset_brinkman, dofs.num_brinkman()); }
  [[nodiscard]] auto u_darcy() const { return coeffs.segment(dofs.offset_darcy, dofs.num_darcy()); }
  [[nodiscard]] auto pressure() const { return coeffs.segment(dofs.offset_pressure, dofs.num_pressure()); }
  [[nodiscard]] auto lambda() const { return coeffs.segment(dofs.offset_lambda, dofs.num_lambda()); }
};

struct SolveReport {
  /// Index m of the iterate whose successor differs from it by at most tol
  /// (so a linear problem reports 1).
  int iterations = 0;
  bool converged = false;
  /// increments[k] = ||c^{k+1} - c^k|| / ||c^{k+1}||, k = 0 is the step
  /// away from the initial guess.
  std::vector<double> increments;
  std::vector<double> linear_residuals;
  int dofs = 0;
  std::string message;
};

struct NewtonOptions {
  double tol = 1e-6;
  int max_iter = 50;
  Vec2 initial{0.1, 0.0};
  LinearBackend backend = LinearBackend::automatic;
};

struct NewtonResult {
  SolutionFields solution;
  SolveReport report;
};

/// Newton iteration on the linearised saddle-point systems, stopped on the
/// relative l2 increment of the full coefficient vector.  A singular linear
/// system throws Error(singular_system); running out of iterations returns
/// the last iterate with `converged == false`.
[[nodiscard]] NewtonResult newton_solve(const Discretization& disc, const PhysicalParams& params,
                                        const ProblemData& data, const NewtonOptions& options = {});

}  // namespace bfdarcy
