#pragma once

#include <array>
#include <vector>

#include "bfdarcy/common.hpp"

namespace bfdarcy {

/// Point on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct QuadraturePoint {
  Vec2 xi;
  double weight;
};

struct QuadratureRule {
  int degree = 0;
  std::vector<QuadraturePoint> points;
};

/// Fully symmetric triangle rule exact for polynomials of total degree
/// `degree` (1..10).  Throws Error(invalid_argument) otherwise.
[[nodiscard]] const QuadratureRule& quad_rule(int degree);

struct LinePoint {
  double t;  // in [0, 1]
  double weight;
};

/// n-point Gauss-Legendre rule on [0, 1], exact to degree 2n - 1.
[[nodiscard]] const std::vector<LinePoint>& gauss_legendre(int n);

/// Integrates f over the segment [a, b] with n-point Gauss-Legendre.
template <class F>
[[nodiscard]] auto integrate_segment(const Vec2& a, const Vec2& b, int n, F&& f) {
  const double len = (b - a).norm();
  decltype(f(a)) sum{};
  bool first = true;
  for (const auto& q : gauss_legendre(n)) {
    const Vec2 x = a + q.t * (b - a);
    if (first) {
      sum = q.weight * len * f(x);
      first = false;
    } else {
      sum += q.weight * len * f(x);
    }
  }
  return sum;
}

}  // namespace bfdarcy
