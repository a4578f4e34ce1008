#include "bfdarcy/solver.hpp"

#include <cmath>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

namespace bfdarcy {

namespace {

// Row-pivoted Doolittle LU on a dense copy.
Eigen::MatrixXd dense_lu_solve(const SparseMatrix& sparse, const Eigen::MatrixXd& b) {
  const Eigen::Index n = sparse.rows();
  Eigen::MatrixXd a(sparse);
  Eigen::MatrixXd x = b;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    a.col(k).tail(n - k).cwiseAbs().maxCoeff(&piv);
    piv += k;
    if (a(piv, k) == 0.0) {
      throw Error(ErrorCode::singular_system,
                  "singular system: zero pivot in column " + std::to_string(k));
    }
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      x.row(k).swap(x.row(piv));
    }
    const Eigen::Index rest = n - k - 1;
    if (rest == 0) continue;
    a.col(k).tail(rest) /= a(k, k);
    a.bottomRightCorner(rest, rest).noalias() -= a.col(k).tail(rest) * a.row(k).tail(rest);
    x.bottomRows(rest) -= a.col(k).tail(rest) * x.row(k);
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    x.row(k) = (x.row(k) - a.row(k).tail(n - k - 1) * x.bottomRows(n - k - 1)) / a(k, k);
  }
  return x;
}

Eigen::MatrixXd sparse_solve(const SparseMatrix& a, const Eigen::MatrixXd& b) {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::singular_system, "singular system: " + lu.lastErrorMessage());
  }
  Eigen::MatrixXd x = lu.solve(b);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::singular_system, "sparse LU solve failed");
  }
  return x;
}

Eigen::MatrixXd lu_solve(const SparseMatrix& a, const Eigen::MatrixXd& b, LinearBackend backend) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    throw Error(ErrorCode::invalid_argument, "sparse_lu_solve: dimension mismatch");
  }
  if (a.rows() == 0) return Eigen::MatrixXd(0, b.cols());
  const bool dense = backend == LinearBackend::dense ||
                     (backend == LinearBackend::automatic && a.rows() < kDenseThreshold);
  Eigen::MatrixXd x = dense ? dense_lu_solve(a, b) : sparse_solve(a, b);
  if (!x.allFinite()) throw Error(ErrorCode::singular_system, "singular system: non-finite solution");
  return x;
}

}  // namespace

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b) {
  double norm_a = 0.0;
  Vector row_sums = Vector::Zero(a.rows());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) row_sums[it.row()] += std::abs(it.value());
  }
  norm_a = row_sums.size() ? row_sums.maxCoeff() : 0.0;
  const double denom = norm_a * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
  const double num = (a * x - b).lpNorm<Eigen::Infinity>();
  return denom == 0.0 ? num : num / denom;
}

Vector sparse_lu_solve(const SparseMatrix& a, const Vector& b, LinearBackend backend) {
  return lu_solve(a, b, backend).col(0);
}

// With z = zeta the system reads A x + c z = b1, d.x + delta z = b2.  The
// dense border ruins fill-reducing orderings, so factor the sparse block
// A + s e_r e_r^T instead (it is regular even when A has the constant
// pressure mode) and recover mu = x_r and z from a 2x2 system.
Vector solve_bordered(const SparseMatrix& m, const Vector& b, int zeta, int pin,
                      LinearBackend backend) {
  const int n = static_cast<int>(m.rows());
  if (zeta != n - 1 || pin < 0 || pin >= zeta) {
    throw Error(ErrorCode::invalid_argument, "solve_bordered: zeta must be the last unknown");
  }
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(m.nonZeros()));
  Vector c = Vector::Zero(zeta);
  Vector d = Vector::Zero(zeta);
  double delta = 0.0;
  double scale = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      const auto r = it.row();
      const auto col = it.col();
      if (r == zeta && col == zeta) delta += it.value();
      else if (col == zeta) c[r] += it.value();
      else if (r == zeta) d[col] += it.value();
      else trips.emplace_back(static_cast<int>(r), static_cast<int>(col), it.value());
      if (col == pin && r != zeta) scale = std::max(scale, std::abs(it.value()));
    }
  }
  const double s = scale > 0.0 ? scale : 1.0;
  trips.emplace_back(pin, pin, s);
  SparseMatrix a(zeta, zeta);
  a.setFromTriplets(trips.begin(), trips.end());

  Eigen::MatrixXd rhs(zeta, 3);
  rhs.col(0) = b.head(zeta);
  rhs.col(1) = c;
  rhs.col(2) = Vector::Unit(zeta, pin);
  const Eigen::MatrixXd y = lu_solve(a, rhs, backend);
  const auto xb = y.col(0);
  const auto yc = y.col(1);
  const auto yr = y.col(2);
  // x = xb - z yc + s mu yr with mu = x_pin.
  Eigen::Matrix2d k;
  k << 1.0 - s * yr[pin], yc[pin], s * d.dot(yr), delta - d.dot(yc);
  const Eigen::Vector2d f(xb[pin], b[zeta] - d.dot(xb));
  // Cancellation test relative to the two products of the determinant.
  const double det = k.determinant();
  const double terms = std::abs(k(0, 0) * k(1, 1)) + std::abs(k(0, 1) * k(1, 0));
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * terms) {
    throw Error(ErrorCode::singular_system, "singular system: degenerate mean-value border");
  }
  const Eigen::Vector2d mz = k.partialPivLu().solve(f);
  Vector x(n);
  x.head(zeta) = xb - mz[1] * yc + s * mz[0] * yr;
  x[zeta] = mz[1];
  return x;
}

Vector solve_newton_system(const SparseMatrix& a, const Vector& b, const DofMap& dofs,
                           LinearBackend backend) {
  if (dofs.offset_zeta < 0) return sparse_lu_solve(a, b, backend);
  return solve_bordered(a, b, dofs.offset_zeta, dofs.offset_pressure, backend);
}

NewtonResult newton_solve(const Discretization& disc, const PhysicalParams& params,
                          const ProblemData& data, const NewtonOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  if (options.max_iter < 1) throw Error(ErrorCode::invalid_argument, "max_iter must be at least 1");
  validate_params(params, disc.mesh());

  NewtonResult result{{initial_iterate(disc, options.initial), disc.dofs()}, {}};
  auto& report = result.report;
  report.dofs = disc.dofs().num_fe_dofs();
  Vector& current = result.solution.coeffs;

  const Vector load = assemble_load(disc, data);
  // Solve k produces c^k; the stopping test compares c^{m+1} with c^m for m >= 1.
  for (int k = 1; k <= options.max_iter + 1; ++k) {
    const auto sys = assemble_newton_system(disc, params, load, current);
    const SparseMatrix a = sys.matrix();
    Vector next;
    try {
      next = solve_newton_system(a, sys.rhs, disc.dofs(), options.backend);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (Newton step " + std::to_string(k) + ")");
    }
    report.linear_residuals.push_back(relative_residual(a, next, sys.rhs));
    const double norm_next = next.norm();
    const double inc = norm_next == 0.0 ? (next - current).norm() : (next - current).norm() / norm_next;
    report.increments.push_back(inc);
    current = std::move(next);
    if (k >= 2 && inc <= options.tol) {
      report.iterations = k - 1;
      report.converged = true;
      report.message = "converged";
      return result;
    }
  }
  report.iterations = options.max_iter;
  report.message = "maximum number of Newton iterations reached";
  return result;
}

}  // namespace bfdarcy
