#include "bfdarcy/verification.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "bfdarcy/forchheimer.hpp"

namespace bfdarcy {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

StackedGeometry example1_geometry() { return {-0.5, 0.5, -0.5, 0.5, 1.5}; }

StackedGeometry example2_geometry() { return {0.0, 2.0, -1.0, 0.0, 1.0}; }

ManufacturedProblem manufactured_example1(const StackedGeometry& geometry,
                                          const PhysicalParams& params) {
  const auto close = [](double a, double b) { return std::abs(a - b) < 1e-12; };
  if (!close(geometry.x_min, -0.5) || !close(geometry.x_max, 0.5) ||
      !close(geometry.y_bottom, -0.5) || !close(geometry.y_interface, 0.5) ||
      !(geometry.y_top > geometry.y_interface)) {
    throw Error(ErrorCode::invalid_argument,
                "manufactured problem needs Omega_D = (-0.5,0.5)^2 and Sigma on x2 = 0.5");
  }

  ExactSolution ex;
  ex.u_brinkman = [](const Vec2& x) -> Vec2 {
    return {std::cos(kPi * x.x()) * std::sin(kPi * x.y()),
            -std::sin(kPi * x.x()) * std::cos(kPi * x.y())};
  };
  ex.grad_u_brinkman = [](const Vec2& x) -> Mat2 {
    const double sx = std::sin(kPi * x.x()), cx = std::cos(kPi * x.x());
    const double sy = std::sin(kPi * x.y()), cy = std::cos(kPi * x.y());
    Mat2 g;
    g << -kPi * sx * sy, kPi * cx * cy, -kPi * cx * cy, kPi * sx * sy;
    return g;
  };
  ex.u_darcy = [](const Vec2& x) -> Vec2 {
    return {std::cos(kPi * x.x()) * std::exp(x.y()), std::exp(x.x()) * std::cos(kPi * x.y())};
  };
  ex.div_u_darcy = [](const Vec2& x) {
    return -kPi * std::sin(kPi * x.x()) * std::exp(x.y()) -
           kPi * std::exp(x.x()) * std::sin(kPi * x.y());
  };
  ex.p_brinkman = [](const Vec2& x) { return std::sin(kPi * x.x()) * std::sin(kPi * x.y()); };
  ex.p_darcy = ex.p_brinkman;
  ex.lambda = ex.p_darcy;
  ex.grad_lambda = [](const Vec2& x) -> Vec2 {
    return {kPi * std::cos(kPi * x.x()) * std::sin(kPi * x.y()),
            kPi * std::sin(kPi * x.x()) * std::cos(kPi * x.y())};
  };

  ManufacturedProblem out;
  out.exact = ex;
  auto& d = out.data;
  const double mu = params.mu;
  const double forch = params.forchheimer;
  const double expo = params.exponent;
  const TensorField kb = params.k_brinkman;
  const TensorField kd = params.k_darcy;
  const auto grad_p = ex.grad_lambda;
  // -mu Lap(u_B) = 2 pi^2 mu u_B for this field.
  d.f_brinkman = [=](const Vec2& x) -> Vec2 {
    const Vec2 u = ex.u_brinkman(x);
    return kb(x).inverse() * u + forch * forchheimer_flux(u, expo) + 2.0 * kPi * kPi * mu * u +
           grad_p(x);
  };
  d.f_darcy = [=](const Vec2& x) -> Vec2 { return kd(x).inverse() * ex.u_darcy(x) + grad_p(x); };
  d.g_darcy = ex.div_u_darcy;
  d.u_brinkman_boundary = ex.u_brinkman;
  d.u_darcy_boundary = ex.u_darcy;
  // sigma_B n + p_D n, n = (0, -1) outward from Omega_B.
  d.sigma_traction = [=](const Vec2& x) -> Vec2 {
    const Vec2 n(0.0, -1.0);
    const Mat2 sigma = -ex.p_brinkman(x) * Mat2::Identity() + mu * ex.grad_u_brinkman(x);
    return sigma * n + ex.p_darcy(x) * n;
  };
  return out;
}

ProblemData example2_data() {
  ProblemData d = zero_data();
  // The profile vanishes at y = 0 and y = 1, so it also serves as the
  // no-slip value on the top wall.
  d.u_brinkman_boundary = [](const Vec2& x) -> Vec2 {
    return {-10.0 * x.y() * (x.y() - 1.0), 0.0};
  };
  d.bc.natural = {BoundaryTag::gb_right, BoundaryTag::gd_bottom};
  return d;
}

double InterfaceNorms::interpolated() const { return std::sqrt(l2 * h1); }

InterfaceNorms interface_norms(const Discretization& disc, std::span<const double> lam,
                               const ScalarField& lambda, const VectorField& grad_lambda) {
  const Mesh& mesh = disc.mesh();
  const auto& mult = disc.multiplier();
  double l2 = 0.0;
  double semi = 0.0;
  const auto& iface = disc.interface();
  for (std::size_t k = 0; k < iface.edges.size(); ++k) {
    const auto& se = iface.edges[k];
    const Vec2& a = mesh.vertex(se.start_vertex);
    const Vec2& b = mesh.vertex(se.end_vertex);
    const double len = (b - a).norm();
    const Vec2 tangent = (b - a) / len;
    for (const auto& q : gauss_legendre(6)) {
      const Vec2 x = a + q.t * (b - a);
      const auto hats = mult.eval(static_cast<int>(k), q.t);
      double val = 0.0, der = 0.0;
      for (int m = 0; m < 2; ++m) {
        val += lam[static_cast<std::size_t>(hats.node[m])] * hats.value[m];
        der += lam[static_cast<std::size_t>(hats.node[m])] * hats.slope[m];
      }
      if (lambda) val -= lambda(x);
      if (grad_lambda) der -= grad_lambda(x).dot(tangent);
      l2 += q.weight * len * val * val;
      semi += q.weight * len * der * der;
    }
  }
  return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

ErrorReport compute_errors(const Discretization& disc, const SolutionFields& sol,
                           const ExactSolution& exact, int degree) {
  const Mesh& mesh = disc.mesh();
  const auto& rule = quad_rule(degree);
  const Vector ub = sol.u_brinkman();
  const Vector ud = sol.u_darcy();
  const Vector p = sol.pressure();
  const Vector lam = sol.lambda();

  double e_ub = 0.0, e_pb = 0.0, e_ud = 0.0, e_pd = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriangleGeometry g(mesh, t);
    const double ph = p[t];
    if (mesh.region(t) == Region::brinkman) {
      const auto local = disc.br().local_dofs(t);
      for (const auto& q : rule.points) {
        const Vec2 x = g.map(q.xi);
        const double w = 2.0 * g.area * q.weight;
        const auto basis = eval_br(g, TriangleGeometry::bary(q.xi));
        Vec2 uh = Vec2::Zero();
        Mat2 gh = Mat2::Zero();
        for (int j = 0; j < 9; ++j) {
          uh += ub[local[j]] * basis.value[j];
          gh += ub[local[j]] * basis.grad[j];
        }
        e_ub += w * ((exact.u_brinkman(x) - uh).squaredNorm() +
                     (exact.grad_u_brinkman(x) - gh).squaredNorm());
        e_pb += w * std::pow(exact.p_brinkman(x) - ph, 2);
      }
    } else {
      const auto local = disc.rt().local_dofs(t);
      double div_h = 0.0;
      for (int j = 0; j < 3; ++j) div_h += ud[local[j]] * g.sign[j] / g.area;
      for (const auto& q : rule.points) {
        const Vec2 x = g.map(q.xi);
        const double w = 2.0 * g.area * q.weight;
        const auto basis = eval_rt0(g, x);
        Vec2 uh = Vec2::Zero();
        for (int j = 0; j < 3; ++j) uh += ud[local[j]] * basis.value[j];
        e_ud += w * ((exact.u_darcy(x) - uh).squaredNorm() +
                     std::pow(exact.div_u_darcy(x) - div_h, 2));
        e_pd += w * std::pow(exact.p_darcy(x) - ph, 2);
      }
    }
  }
  ErrorReport r;
  r.h_brinkman = mesh.h_brinkman();
  r.h_darcy = mesh.h_darcy();
  r.h_sigma = mesh.h_sigma();
  r.dofs = sol.dofs.num_fe_dofs();
  r.e_u_brinkman = std::sqrt(e_ub);
  r.e_p_brinkman = std::sqrt(e_pb);
  r.e_u_darcy = std::sqrt(e_ud);
  r.e_p_darcy = std::sqrt(e_pd);
  r.e_lambda = interface_norms(disc, {lam.data(), static_cast<std::size_t>(lam.size())},
                               exact.lambda, exact.grad_lambda)
                   .interpolated();
  return r;
}

double eoc_rate(double e, double e_next, double h, double h_next) {
  if (h == h_next) throw Error(ErrorCode::invalid_argument, "identical mesh sizes in rate computation");
  return std::log(e / e_next) / std::log(h / h_next);
}

std::vector<RateRow> eoc(std::span<const ErrorReport> reports) {
  if (reports.size() < 2) throw Error(ErrorCode::invalid_argument, "need at least two levels for rates");
  std::vector<RateRow> out(reports.size());
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto& a = reports[i - 1];
    const auto& b = reports[i];
    out[i].u_brinkman = eoc_rate(a.e_u_brinkman, b.e_u_brinkman, a.h_brinkman, b.h_brinkman);
    out[i].p_brinkman = eoc_rate(a.e_p_brinkman, b.e_p_brinkman, a.h_brinkman, b.h_brinkman);
    out[i].u_darcy = eoc_rate(a.e_u_darcy, b.e_u_darcy, a.h_darcy, b.h_darcy);
    out[i].p_darcy = eoc_rate(a.e_p_darcy, b.e_p_darcy, a.h_darcy, b.h_darcy);
    out[i].lambda = eoc_rate(a.e_lambda, b.e_lambda, a.h_sigma, b.h_sigma);
  }
  return out;
}

void write_convergence_csv(std::ostream& os, std::span<const ErrorReport> reports,
                           bool with_errors) {
  os << "level,h_B,h_D,h_Sigma,DOF,iter,e_uB,r_uB,e_pB,r_pB,e_uD,r_uD,e_pD,r_pD,e_lam,r_lam\n";
  std::vector<RateRow> rates(reports.size());
  if (with_errors && reports.size() >= 2) rates = eoc(reports);
  auto rate = [](const std::optional<double>& r) {
    if (!r) return std::string("--");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *r);
    return std::string(buf);
  };
  char buf[256];
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f,%d,%d,", i + 1, r.h_brinkman, r.h_darcy,
                  r.h_sigma, r.dofs, r.iterations);
    os << buf;
    const std::array<std::pair<double, std::optional<double>>, 5> cols{{
        {r.e_u_brinkman, rates[i].u_brinkman},
        {r.e_p_brinkman, rates[i].p_brinkman},
        {r.e_u_darcy, rates[i].u_darcy},
        {r.e_p_darcy, rates[i].p_darcy},
        {r.e_lambda, rates[i].lambda},
    }};
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.6e", cols[c].first);
      os << (with_errors ? buf : "--") << ',' << rate(cols[c].second) << (c + 1 < cols.size() ? "," : "\n");
    }
  }
}

double max_interface_normal_velocity(const Discretization& disc, const SolutionFields& sol) {
  const auto ud = sol.u_darcy();
  double out = 0.0;
  for (const auto& se : disc.interface().edges) {
    const int dof = disc.rt().edge_dof(se.edge);
    if (dof < 0) continue;
    out = std::max(out, std::abs(ud[dof]) / disc.mesh().edge_length(se.edge));
  }
  return out;
}

StructuralChecks check_invariants(const Discretization& disc, const SolutionFields& sol,
                                  const ProblemData& data) {
  const Mesh& mesh = disc.mesh();
  StructuralChecks out;
  const Vector p = sol.pressure();
  double mean = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) mean += mesh.area(t) * p[t];
  out.mean_pressure = std::abs(mean);

  const Vector ub = sol.u_brinkman();
  const Vector ud = sol.u_darcy();
  const std::span<const double> ubs(ub.data(), static_cast<std::size_t>(ub.size()));
  const std::span<const double> uds(ud.data(), static_cast<std::size_t>(ud.size()));
  std::vector<double> flux(static_cast<std::size_t>(disc.multiplier().size()), 0.0);
  const auto& iface = disc.interface();
  for (std::size_t k = 0; k < iface.edges.size(); ++k) {
    const auto& se = iface.edges[k];
    const Vec2& a = mesh.vertex(se.start_vertex);
    const Vec2& b = mesh.vertex(se.end_vertex);
    const double len = (b - a).norm();
    for (const auto& q : gauss_legendre(6)) {
      const Vec2 x = a + q.t * (b - a);
      const double jump = eval_br_field(disc.br(), ubs, se.brinkman_triangle, x).dot(se.normal) -
                          eval_rt0_field(disc.rt(), uds, se.darcy_triangle, x).dot(se.normal);
      const auto hats = disc.multiplier().eval(static_cast<int>(k), q.t);
      for (int m = 0; m < 2; ++m) {
        flux[static_cast<std::size_t>(hats.node[m])] += q.weight * len * hats.value[m] * jump;
      }
    }
  }
  for (double f : flux) out.interface_flux = std::max(out.interface_flux, std::abs(f));

  const auto& darcy = disc.rt().triangles();
  const Vector pg = project_p0(data.g_darcy, mesh, darcy, 10);
  for (std::size_t k = 0; k < darcy.size(); ++k) {
    const double div = rt0_divergence(disc.rt(), uds, darcy[k]);
    out.darcy_divergence =
        std::max(out.darcy_divergence, std::abs(div - pg[static_cast<Eigen::Index>(k)]));
  }
  return out;
}

PropertyReport pointwise_property_suite(int samples, std::uint64_t seed,
                                        std::span<const double> exponents) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto in_disk = [&]() {
    while (true) {
      const Vec2 v(unit(rng), unit(rng));
      if (v.squaredNorm() <= 1.0) return v;
    }
  };
  PropertyReport r;
  for (double p : exponents) {
    for (int s = 0; s < samples; ++s) {
      const Vec2 a = in_disk();
      const Vec2 b = in_disk();
      const Vec2 diff = forchheimer_flux(a, p) - forchheimer_flux(b, p);
      const double mono = diff.dot(a - b);
      if (mono < 0.0) ++r.monotonicity_violations;
      if (a != b && !(mono > 0.0)) ++r.nonpositive_monotonicity;
      const double bound = std::pow(a.norm() + b.norm(), p - 2.0) * (a - b).norm();
      if (diff.norm() > bound * (1.0 + 1e-12)) ++r.continuity_violations;
      if (bound > 0.0) r.max_continuity_ratio = std::max(r.max_continuity_ratio, diff.norm() / bound);
      const Mat2 j = forchheimer_jacobian(a, p);
      const Vec2 v = in_disk();
      const Vec2 w = in_disk();
      r.max_symmetry_defect = std::max(r.max_symmetry_defect, std::abs(v.dot(j * w) - w.dot(j * v)));
      ++r.samples;
    }
  }
  return r;
}

}  // namespace bfdarcy
