#include <gtest/gtest.h>

#include <cmath>

#include "bfdarcy/quadrature.hpp"

using namespace bfdarcy;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// a! b! / (a + b + 2)!: integral of x^a y^b over the reference triangle.
double dirichlet_integral(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

double apply(const QuadratureRule& rule, int a, int b) {
  double s = 0.0;
  for (const auto& q : rule.points) s += q.weight * std::pow(q.xi.x(), a) * std::pow(q.xi.y(), b);
  return s;
}

}  // namespace

TEST(Quadrature, CentroidRuleIntegratesArea) {
  EXPECT_NEAR(apply(quad_rule(1), 0, 0), 0.5, 1e-15);
}

TEST(Quadrature, SpecMonomials) {
  EXPECT_NEAR(apply(quad_rule(6), 2, 3), 1.0 / 420.0, 1e-15);
  EXPECT_NEAR(apply(quad_rule(2), 2, 0), 1.0 / 12.0, 1e-15);
}

class QuadratureExactness : public ::testing::TestWithParam<int> {};

TEST_P(QuadratureExactness, AllMonomialsUpToDegree) {
  const int degree = GetParam();
  const auto& rule = quad_rule(degree);
  EXPECT_EQ(rule.degree, degree);
  for (int a = 0; a <= degree; ++a) {
    for (int b = 0; a + b <= degree; ++b) {
      EXPECT_NEAR(apply(rule, a, b), dirichlet_integral(a, b), 1e-14)
          << "x^" << a << " y^" << b;
    }
  }
}

TEST_P(QuadratureExactness, PointsInsideAndSymmetric) {
  const auto& rule = quad_rule(GetParam());
  double sum = 0.0;
  for (const auto& q : rule.points) {
    EXPECT_GE(q.xi.x(), -1e-14);
    EXPECT_GE(q.xi.y(), -1e-14);
    EXPECT_LE(q.xi.x() + q.xi.y(), 1.0 + 1e-14);
    EXPECT_GT(q.weight, 0.0);
    sum += q.weight;
  }
  EXPECT_NEAR(sum, 0.5, 1e-14);
  // Swapping x and y maps the rule onto itself.
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      EXPECT_NEAR(apply(rule, a, b), apply(rule, b, a), 1e-14);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Degrees, QuadratureExactness, ::testing::Range(1, 11));

TEST(Quadrature, UnsupportedDegreeThrows) {
  EXPECT_THROW((void)quad_rule(0), Error);
  EXPECT_THROW((void)quad_rule(11), Error);
}

TEST(GaussLegendre, ExactForPolynomials) {
  for (int n = 1; n <= 8; ++n) {
    const auto& g = gauss_legendre(n);
    ASSERT_EQ(static_cast<int>(g.size()), n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (const auto& q : g) s += q.weight * std::pow(q.t, k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << "n=" << n << " k=" << k;
    }
  }
}

TEST(GaussLegendre, SegmentIntegral) {
  const Vec2 a(0.0, 1.0), b(3.0, 5.0);  // length 5
  const double v = integrate_segment(a, b, 3, [](const Vec2& x) { return x.x() * x.y(); });
  // x = 3t, y = 1 + 4t: 5 * int_0^1 3t (1 + 4t) dt = 5 * (1.5 + 4) = 27.5
  EXPECT_NEAR(v, 27.5, 1e-13);
}
