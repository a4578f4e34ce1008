#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <type_traits>

#include "bfdarcy/verification.hpp"

using namespace bfdarcy;

namespace {

constexpr double kPi = std::numbers::pi;

// Fourth-order central differences.
template <class F>
auto d_dx(F&& f, const Vec2& x, int k, double h = 1e-3) -> std::decay_t<decltype(f(x))> {
  const Vec2 e = h * Vec2::Unit(k);
  return (-f(x + 2 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2 * e)) / (12.0 * h);
}

template <class F>
auto d2_dx2(F&& f, const Vec2& x, int k, double h = 1e-3) -> std::decay_t<decltype(f(x))> {
  const Vec2 e = h * Vec2::Unit(k);
  return (-f(x + 2 * e) + 16.0 * f(x + e) - 30.0 * f(x) + 16.0 * f(x - e) - f(x - 2 * e)) / (12.0 * h * h);
}

PhysicalParams params(double f, double p) {
  Mat2 kd;
  kd << 0.1, 0.02, 0.02, 0.08;
  return {1.3, f, p, isotropic(1.0), constant_tensor(kd)};
}

}  // namespace

TEST(Manufactured, FieldsMatchHandFormulas) {
  const auto mp = manufactured_example1(StackedGeometry{}, params(10.0, 3.0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int i = 0; i < 50; ++i) {
    const Vec2 x(u(rng) * 0.5, u(rng));
    const double a = kPi * x.x(), b = kPi * x.y();
    EXPECT_NEAR((mp.exact.u_brinkman(x) - Vec2(std::cos(a) * std::sin(b), -std::sin(a) * std::cos(b))).norm(), 0, 1e-15);
    EXPECT_NEAR((mp.exact.u_darcy(x) - Vec2(std::cos(a) * std::exp(x.y()), std::exp(x.x()) * std::cos(b))).norm(), 0, 1e-15);
    EXPECT_NEAR(mp.exact.p_brinkman(x) - std::sin(a) * std::sin(b), 0.0, 1e-15);
    EXPECT_NEAR(mp.exact.p_darcy(x) - std::sin(a) * std::sin(b), 0.0, 1e-15);
  }
}

class StrongForm : public ::testing::TestWithParam<double> {};

TEST_P(StrongForm, SourcesSatisfyTheEquations) {
  const auto pr = params(10.0, GetParam());
  const auto mp = manufactured_example1(StackedGeometry{}, pr);
  const auto& ex = mp.exact;
  const auto& d = mp.data;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.45, 0.45);
  for (int i = 0; i < 100; ++i) {
    const Vec2 xb(u(rng), u(rng) + 1.0), xd(u(rng), u(rng));
    // Brinkman momentum and incompressibility
    const Vec2 ub = ex.u_brinkman(xb);
    const Vec2 lap = d2_dx2(ex.u_brinkman, xb, 0) + d2_dx2(ex.u_brinkman, xb, 1);
    const Vec2 gp(d_dx(ex.p_brinkman, xb, 0), d_dx(ex.p_brinkman, xb, 1));
    const Vec2 rb = -pr.mu * lap + pr.k_brinkman(xb).inverse() * ub +
                    pr.forchheimer * std::pow(ub.norm(), pr.exponent - 2.0) * ub + gp - d.f_brinkman(xb);
    EXPECT_LE(rb.norm(), 1e-8);
    EXPECT_LE(std::abs(d_dx(ex.u_brinkman, xb, 0).x() + d_dx(ex.u_brinkman, xb, 1).y()), 1e-9);
    Mat2 g;
    g.col(0) = d_dx(ex.u_brinkman, xb, 0);
    g.col(1) = d_dx(ex.u_brinkman, xb, 1);
    EXPECT_LE((g - ex.grad_u_brinkman(xb)).norm(), 1e-9);
    // Darcy law and mass balance
    const Vec2 gd(d_dx(ex.p_darcy, xd, 0), d_dx(ex.p_darcy, xd, 1));
    EXPECT_LE((pr.k_darcy(xd).inverse() * ex.u_darcy(xd) + gd - d.f_darcy(xd)).norm(), 1e-8);
    const double div = d_dx(ex.u_darcy, xd, 0).x() + d_dx(ex.u_darcy, xd, 1).y();
    EXPECT_LE(std::abs(div - d.g_darcy(xd)), 1e-8);
    EXPECT_LE(std::abs(div - ex.div_u_darcy(xd)), 1e-8);
  }
}

INSTANTIATE_TEST_SUITE_P(Exponents, StrongForm, ::testing::Values(3.0, 3.5, 4.0));

TEST(Manufactured, InterfaceConditions) {
  const auto pr = params(10.0, 3.0);
  const auto mp = manufactured_example1(StackedGeometry{}, pr);
  const auto& ex = mp.exact;
  const Vec2 n(0.0, -1.0);
  for (int i = 0; i <= 20; ++i) {
    const Vec2 x(-0.5 + i / 20.0, 0.5);
    EXPECT_NEAR(ex.u_brinkman(x).dot(n), ex.u_darcy(x).dot(n), 1e-15);
    EXPECT_NEAR(ex.lambda(x), std::sin(kPi * x.x()), 1e-15);
    EXPECT_NEAR(ex.lambda(x), ex.p_darcy(x), 1e-15);
    // t = sigma_B n + lambda n with sigma_B = -p_B I + mu grad u_B
    Mat2 g;
    g.col(0) = d_dx(ex.u_brinkman, x, 0);
    g.col(1) = d_dx(ex.u_brinkman, x, 1);
    const Vec2 t = (-ex.p_brinkman(x) * Mat2::Identity() + pr.mu * g) * n + ex.lambda(x) * n;
    EXPECT_NEAR((t - mp.data.sigma_traction(x)).norm(), 0.0, 1e-9);
    EXPECT_NEAR((mp.data.u_brinkman_boundary(x) - ex.u_brinkman(x)).norm(), 0.0, 0.0);
  }
}

TEST(Manufactured, RejectsOtherGeometries) {
  try {
    (void)manufactured_example1(example2_geometry(), params(1.0, 3.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
}

TEST(Eoc, SinglePairRates) {
  EXPECT_NEAR(eoc_rate(0.2, 0.1, 0.2, 0.1), 1.0, 1e-15);
  EXPECT_NEAR(eoc_rate(0.9, 0.1, 0.3, 0.1), 2.0, 1e-14);
  EXPECT_THROW((void)eoc_rate(0.2, 0.1, 0.1, 0.1), Error);
}

TEST(Eoc, RatesUseEachRegionsMeshSize) {
  std::vector<ErrorReport> r(2);
  r[0] = {0.4, 0.2, 0.1, 10, 3, 1.0, 1.0, 1.0, 1.0, 1.0};
  r[1] = {0.2, 0.1, 0.05, 40, 4, 0.5, 0.25, 0.5, 0.25, 0.125};
  const auto rates = eoc(r);
  ASSERT_EQ(rates.size(), 2u);
  EXPECT_FALSE(rates[0].u_brinkman.has_value());
  EXPECT_NEAR(*rates[1].u_brinkman, 1.0, 1e-15);
  EXPECT_NEAR(*rates[1].p_brinkman, 2.0, 1e-15);
  EXPECT_NEAR(*rates[1].u_darcy, 1.0, 1e-15);
  EXPECT_NEAR(*rates[1].p_darcy, 2.0, 1e-15);
  EXPECT_NEAR(*rates[1].lambda, 3.0, 1e-15);
  EXPECT_THROW((void)eoc(std::span(r).first(1)), Error);
}

TEST(Csv, HeaderPlaceholdersAndFormat) {
  std::vector<ErrorReport> r(2);
  r[0] = {0.25, 0.25, 0.25, 229, 4, 1.0, 1.0, 1.0, 1.0, 1.0};
  r[1] = {0.125, 0.125, 0.125, 839, 4, 0.5, 0.5, 0.5, 0.5, 0.25};
  std::ostringstream os;
  write_convergence_csv(os, r);
  std::istringstream in(os.str());
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  EXPECT_EQ(header, "level,h_B,h_D,h_Sigma,DOF,iter,e_uB,r_uB,e_pB,r_pB,e_uD,r_uD,e_pD,r_pD,e_lam,r_lam");
  EXPECT_EQ(row0,
            "1,0.250000,0.250000,0.250000,229,4,1.000000e+00,--,1.000000e+00,--,1.000000e+00,--,"
            "1.000000e+00,--,1.000000e+00,--");
  EXPECT_NE(row1.find(",1.0000,"), std::string::npos);
  EXPECT_EQ(row1.substr(row1.rfind(',') + 1), "2.0000");
  std::ostringstream bare;
  write_convergence_csv(bare, std::span(r).first(1), false);
  EXPECT_NE(bare.str().find("229,4,--,--,--,--,--,--,--,--,--,--"), std::string::npos);
}

TEST(InterfaceNorm, NormsOfTheExactMultiplier) {
  const auto pr = params(10.0, 3.0);
  const auto mp = manufactured_example1(StackedGeometry{}, pr);
  const Discretization disc(generate_stacked_rect(StackedGeometry{}, 8, 8, 8), mp.data, ConstraintMode::exact);
  const Vector zero = Vector::Zero(disc.dofs().num_lambda());
  const auto n = interface_norms(disc, {zero.data(), static_cast<std::size_t>(zero.size())}, mp.exact.lambda,
                                 mp.exact.grad_lambda);
  // int sin^2 = 1/2 and int pi^2 cos^2 = pi^2/2 over (-1/2, 1/2)
  EXPECT_NEAR(n.l2, std::sqrt(0.5), 1e-10);
  EXPECT_NEAR(n.h1, std::sqrt(0.5 + kPi * kPi / 2.0), 1e-10);
  EXPECT_NEAR(n.interpolated(), std::sqrt(n.l2 * n.h1), 1e-15);
  // A discrete multiplier equal to 1 has unit norms.
  const Vector ones = Vector::Ones(disc.dofs().num_lambda());
  const auto o = interface_norms(disc, {ones.data(), static_cast<std::size_t>(ones.size())});
  EXPECT_NEAR(o.l2, 1.0, 1e-14);
  EXPECT_NEAR(o.h1, 1.0, 1e-14);
}

TEST(Convergence, ThreeLevelsShowFirstOrder) {
  const auto pr = params(10.0, 3.0);
  const auto mp = manufactured_example1(StackedGeometry{}, pr);
  std::vector<ErrorReport> reports;
  for (int nx : {4, 8, 16}) {
    const Discretization disc(generate_stacked_rect(StackedGeometry{}, nx, nx, nx), mp.data, ConstraintMode::exact);
    const auto res = newton_solve(disc, pr, mp.data);
    ASSERT_TRUE(res.report.converged);
    auto rep = compute_errors(disc, res.solution, mp.exact);
    rep.iterations = res.report.iterations;
    reports.push_back(rep);
    const auto inv = check_invariants(disc, res.solution, mp.data);
    EXPECT_LE(inv.mean_pressure, 1e-8);
    EXPECT_LE(inv.interface_flux, 1e-8);
    EXPECT_LE(inv.darcy_divergence, 1e-9);
  }
  const auto rates = eoc(reports);
  EXPECT_GT(*rates[2].u_brinkman, 0.8);
  EXPECT_GT(*rates[2].u_darcy, 0.8);
  EXPECT_GT(*rates[2].p_brinkman, 0.8);
  EXPECT_GT(*rates[2].p_darcy, 0.8);
  EXPECT_GT(*rates[2].lambda, 0.8);
  EXPECT_NEAR(reports[1].h_sigma, 0.5 * reports[0].h_sigma, 1e-15);
}

TEST(Properties, PointwiseSuitePasses) {
  const std::vector<double> exps{3.0, 3.5, 4.0};
  const auto rep = pointwise_property_suite(2000, 42, exps);
  EXPECT_EQ(rep.samples, 6000);
  EXPECT_TRUE(rep.passed());
  EXPECT_LE(rep.max_continuity_ratio, 1.0);
}
