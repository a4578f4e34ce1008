#include "bfdarcy/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace bfdarcy {

namespace {

// Orbit generators in barycentric coordinates; weights normalised to area 1.
struct Orbit {
  double a;
  double b;
  double weight;
};

void add_orbit(QuadratureRule& rule, const Orbit& o) {
  const double c = 1.0 - o.a - o.b;
  std::vector<std::array<double, 3>> bary;
  if (o.a == o.b && std::abs(o.b - c) < 1e-14) {
    bary = {{o.a, o.b, c}};
  } else if (o.a == o.b) {
    bary = {{o.a, o.a, c}, {o.a, c, o.a}, {c, o.a, o.a}};
  } else {
    bary = {{o.a, o.b, c}, {o.a, c, o.b}, {o.b, o.a, c},
            {o.b, c, o.a}, {c, o.a, o.b}, {c, o.b, o.a}};
  }
  for (const auto& l : bary) rule.points.push_back({Vec2(l[1], l[2]), 0.5 * o.weight});
}

QuadratureRule from_orbits(int degree, std::initializer_list<Orbit> orbits) {
  QuadratureRule rule;
  rule.degree = degree;
  for (const auto& o : orbits) add_orbit(rule, o);
  return rule;
}

// Conical (collapsed Gauss) product rule, then averaged over the six
// vertex permutations so the result is fully symmetric.
QuadratureRule symmetrised_conical(int degree) {
  const int n = (degree + 2) / 2 + 1;
  const auto& g = gauss_legendre(n);
  QuadratureRule rule;
  rule.degree = degree;
  const std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (const auto& qu : g) {
    for (const auto& qv : g) {
      const double x = qu.t;
      const double y = (1.0 - qu.t) * qv.t;
      const double w = qu.weight * qv.weight * (1.0 - qu.t);
      const std::array<double, 3> l{1.0 - x - y, x, y};
      for (const auto& p : perms) rule.points.push_back({Vec2(l[p[1]], l[p[2]]), w / 6.0});
    }
  }
  return rule;
}

QuadratureRule make_rule(int degree) {
  switch (degree) {
    case 1:
      return from_orbits(1, {{1.0 / 3.0, 1.0 / 3.0, 1.0}});
    case 2:
      return from_orbits(2, {{1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0}});
    case 3:
    case 4:
      return from_orbits(degree, {{0.445948490915965, 0.445948490915965, 0.223381589678011},
                                  {0.091576213509771, 0.091576213509771, 0.109951743655322}});
    case 5:
      return from_orbits(5, {{1.0 / 3.0, 1.0 / 3.0, 0.225},
                             {0.470142064105115, 0.470142064105115, 0.132394152788506},
                             {0.101286507323456, 0.101286507323456, 0.125939180544827}});
    case 6:
      return from_orbits(6, {{0.249286745170910, 0.249286745170910, 0.116786275726379},
                             {0.063089014491502, 0.063089014491502, 0.050844906370207},
                             {0.310352451033784, 0.053145049844817, 0.082851075618374}});
    default:
      return symmetrised_conical(degree);
  }
}

std::vector<LinePoint> make_gauss(int n) {
  std::vector<LinePoint> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[static_cast<std::size_t>(n - 1 - i)] = {0.5 * (x + 1.0), 0.5 * w};
  }
  return out;
}

}  // namespace

const QuadratureRule& quad_rule(int degree) {
  if (degree < 1 || degree > 10) {
    throw Error(ErrorCode::invalid_argument,
                "unsupported quadrature degree " + std::to_string(degree) + " (expected 1..10)");
  }
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, make_rule(degree)).first;
  return it->second;
}

const std::vector<LinePoint>& gauss_legendre(int n) {
  if (n < 1 || n > 64) {
    throw Error(ErrorCode::invalid_argument, "unsupported Gauss-Legendre point count");
  }
  static std::mutex mutex;
  static std::map<int, std::vector<LinePoint>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss(n)).first;
  return it->second;
}

}  // namespace bfdarcy
