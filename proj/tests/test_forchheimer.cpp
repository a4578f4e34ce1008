#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bfdarcy/forchheimer.hpp"

using namespace bfdarcy;

namespace {

Vec2 random_in_disk(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Vec2 x(u(rng), u(rng));
    if (x.squaredNorm() <= 1.0) return x;
  }
}

}  // namespace

TEST(Forchheimer, FluxClosedForm) {
  // |(3,4)| = 5
  EXPECT_NEAR((forchheimer_flux({3.0, 4.0}, 3.0) - Vec2(15.0, 20.0)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((forchheimer_flux({3.0, 4.0}, 4.0) - Vec2(75.0, 100.0)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((forchheimer_flux({3.0, 4.0}, 3.5) - std::pow(5.0, 1.5) * Vec2(3.0, 4.0)).norm(), 0.0, 1e-11);
  EXPECT_EQ(forchheimer_flux(Vec2::Zero(), 3.0), Vec2::Zero());
}

TEST(Forchheimer, JacobianClosedForm) {
  const Vec2 w(1.0, 2.0);
  Mat2 expected;
  // p = 4: |w|^2 I + 2 w w^T
  expected << 5.0 + 2.0, 4.0, 4.0, 5.0 + 8.0;
  EXPECT_NEAR((forchheimer_jacobian(w, 4.0) - expected).norm(), 0.0, 1e-12);
  EXPECT_NEAR((forchheimer_jacobian(Vec2::Zero(), 3.0)).norm(), 0.0, 0.0);
  EXPECT_NEAR((forchheimer_jacobian(Vec2(1e-14, 0.0), 3.0)).norm(), std::sqrt(2.0) * 1e-14, 1e-20);
}

class ForchheimerExponent : public ::testing::TestWithParam<double> {};

TEST_P(ForchheimerExponent, JacobianMatchesCentralDifferences) {
  const double p = GetParam();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Vec2 w = random_in_disk(rng) + Vec2(0.05, 0.0);
    const Mat2 jac = forchheimer_jacobian(w, p);
    const double h = 1e-6;
    for (int k = 0; k < 2; ++k) {
      const Vec2 e = Vec2::Unit(k);
      const Vec2 fd = (forchheimer_flux(w + h * e, p) - forchheimer_flux(w - h * e, p)) / (2 * h);
      EXPECT_NEAR((fd - jac.col(k)).norm(), 0.0, 1e-7 * (1.0 + jac.norm()));
    }
    EXPECT_NEAR((jac - jac.transpose()).norm(), 0.0, 1e-14);
    // positive definite: eigenvalues |w|^{p-2} and (p-1)|w|^{p-2}
    const Eigen::SelfAdjointEigenSolver<Mat2> eig(jac);
    const double s = std::pow(w.norm(), p - 2.0);
    EXPECT_NEAR(eig.eigenvalues()[0], s, 1e-12 * (1.0 + s));
    EXPECT_NEAR(eig.eigenvalues()[1], (p - 1.0) * s, 1e-12 * (1.0 + s));
  }
}

TEST_P(ForchheimerExponent, StrictMonotonicityAndHolderContinuity) {
  const double p = GetParam();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 a = random_in_disk(rng), b = random_in_disk(rng);
    const Vec2 d = forchheimer_flux(a, p) - forchheimer_flux(b, p);
    EXPECT_GT(d.dot(a - b), 0.0);
    // | |a|^{p-2}a - |b|^{p-2}b | <= (p-1) max(|a|,|b|)^{p-2} |a-b|
    const double bound = (p - 1.0) * std::pow(std::max(a.norm(), b.norm()), p - 2.0) * (a - b).norm();
    EXPECT_LE(d.norm(), bound * (1.0 + 1e-12));
  }
}

TEST_P(ForchheimerExponent, EqualArgumentsAndZero) {
  const double p = GetParam();
  const Vec2 a(0.3, -0.4);
  EXPECT_EQ((forchheimer_flux(a, p) - forchheimer_flux(a, p)).norm(), 0.0);
  // b = 0: (|a|^{p-2} a, a) = |a|^p
  EXPECT_NEAR(forchheimer_flux(a, p).dot(a), std::pow(0.5, p), 1e-15);
}

INSTANTIATE_TEST_SUITE_P(Exponents, ForchheimerExponent, ::testing::Values(3.0, 3.5, 4.0));
