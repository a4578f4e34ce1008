#pragma once

#include <cmath>

#include "bfdarcy/common.hpp"

namespace bfdarcy {

/// Below this speed the (p - 2)|w|^{p-4} w w^T term is replaced by its
/// limit, which is zero for p > 2.
inline constexpr double kSingularSpeed = 1e-12;

/// |u|^{p-2} u
[[nodiscard]] inline Vec2 forchheimer_flux(const Vec2& u, double p) {
  const double s = u.norm();
  return s == 0.0 ? Vec2::Zero() : Vec2(std::pow(s, p - 2.0) * u);
}

/// Derivative of u -> |u|^{p-2} u at w: |w|^{p-2} I + (p-2)|w|^{p-4} w w^T.
[[nodiscard]] inline Mat2 forchheimer_jacobian(const Vec2& w, double p) {
  const double s = w.norm();
  Mat2 out = std::pow(s, p - 2.0) * Mat2::Identity();
  if (s >= kSingularSpeed) out += (p - 2.0) * std::pow(s, p - 4.0) * w * w.transpose();
  return out;
}

}  // namespace bfdarcy
