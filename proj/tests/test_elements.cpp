#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bfdarcy/elements.hpp"

using namespace bfdarcy;

namespace {

constexpr double kPi = std::numbers::pi;

const StackedGeometry kSquares{};

// Independent 1D Gauss-Legendre on [a, b] (8 points, tabulated).
template <class F>
double edge_integral(const Vec2& a, const Vec2& b, F&& f) {
  static const double x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                              -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                              0.7966664774136267,  0.9602898564975363};
  static const double w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                              0.2223810344533745, 0.1012285362903763};
  const double len = (b - a).norm();
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += 0.5 * len * w[i] * f(a + 0.5 * (x[i] + 1.0) * (b - a));
  return s;
}

// Local edge i runs between the two other vertices.
std::pair<Vec2, Vec2> local_edge(const TriangleGeometry& g, int i) {
  return {g.p[(i + 1) % 3], g.p[(i + 2) % 3]};
}

Vec2 br_local_value(const TriangleGeometry& g, int j, const Vec2& x) {
  return eval_br(g, g.bary_at(x)).value[j];
}

const VectorField kTrigB = [](const Vec2& x) -> Vec2 {
  return {std::cos(kPi * x.x()) * std::sin(kPi * x.y()), -std::sin(kPi * x.x()) * std::cos(kPi * x.y())};
};
const VectorField kExpD = [](const Vec2& x) -> Vec2 {
  return {std::cos(kPi * x.x()) * std::exp(x.y()), std::exp(x.x()) * std::cos(kPi * x.y())};
};

}  // namespace

TEST(BernardiRaugel, DofBasisDualityIsIdentity) {
  const Mesh m = generate_stacked_rect(kSquares, 4, 3, 3, MeshPattern::crisscross);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const TriangleGeometry g(m, t);
    for (int j = 0; j < 9; ++j) {
      for (int v = 0; v < 3; ++v) {
        const Vec2 val = br_local_value(g, j, g.p[v]);
        EXPECT_NEAR(val.x(), j == 2 * v ? 1.0 : 0.0, 1e-12);
        EXPECT_NEAR(val.y(), j == 2 * v + 1 ? 1.0 : 0.0, 1e-12);
      }
      for (int e = 0; e < 3; ++e) {
        const auto [a, b] = local_edge(g, e);
        const Vec2 n = g.global_normal(e);
        const double flux = edge_integral(a, b, [&](const Vec2& x) { return br_local_value(g, j, x).dot(n); });
        EXPECT_NEAR(flux, j == 6 + e ? 1.0 : 0.0, 1e-12) << "t=" << t << " j=" << j << " e=" << e;
      }
    }
  }
}

TEST(BernardiRaugel, DivergenceMatchesGradientTrace) {
  const Mesh m = generate_stacked_rect(kSquares, 2, 1, 1);
  const TriangleGeometry g(m, 5);
  const auto basis = eval_br(g, {0.2, 0.3, 0.5});
  for (int j = 0; j < 9; ++j) EXPECT_NEAR(basis.div[j], basis.grad[j].trace(), 1e-13);
}

TEST(RaviartThomas, DofBasisDualityAndDivergence) {
  const Mesh m = generate_stacked_rect(kSquares, 4, 2, 3, MeshPattern::crisscross);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const TriangleGeometry g(m, t);
    for (int e = 0; e < 3; ++e) {
      const auto [a, b] = local_edge(g, e);
      const Vec2 n = g.global_normal(e);
      for (int j = 0; j < 3; ++j) {
        const double flux = edge_integral(a, b, [&](const Vec2& x) { return eval_rt0(g, x).value[j].dot(n); });
        EXPECT_NEAR(flux, j == e ? 1.0 : 0.0, 1e-12);
      }
    }
    const auto basis = eval_rt0(g, (g.p[0] + g.p[1] + g.p[2]) / 3.0);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(basis.div[j], g.sign[j] / g.area, 1e-10);
  }
}

TEST(RaviartThomas, ReferenceTriangleDivergence) {
  const Mesh m({{0, 0}, {1, 0}, {0, 1}, {0, -1}, {1, -1}},
               {{{0, 1, 2}, Region::brinkman}, {{3, 4, 1}, Region::darcy}, {{3, 1, 0}, Region::darcy}},
               {{0, 1, BoundaryTag::sigma}, {1, 2, BoundaryTag::gb_right}, {0, 2, BoundaryTag::gb_left},
                {3, 4, BoundaryTag::gd_bottom}, {4, 1, BoundaryTag::gd_right}, {0, 3, BoundaryTag::gd_left}});
  const TriangleGeometry g(m, 0);
  EXPECT_DOUBLE_EQ(g.area, 0.5);
  const auto basis = eval_rt0(g, Vec2(0.25, 0.25));
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(basis.div[j], 2.0 * g.sign[j], 1e-14);
}

TEST(InterpolateBR, ReproducesLinearFields) {
  const Mesh m = generate_stacked_rect(kSquares, 4, 4, 2, MeshPattern::crisscross);
  const BRSpace space(m, Region::brinkman);
  const VectorField constant = [](const Vec2&) -> Vec2 { return {0.3, -1.2}; };
  const VectorField linear = [](const Vec2& x) -> Vec2 {
    return {1.0 + 2.0 * x.x() - x.y(), 0.5 * x.x() + 3.0 * x.y()};
  };
  const Vector cc = interpolate_br(constant, space);
  for (int e = 0; e < m.num_edges(); ++e) {
    if (space.edge_dof(e) >= 0) {
      // Vertex functions already carry the flux of a constant field.
      EXPECT_NEAR(cc[space.edge_dof(e)], constant({}).dot(m.edge_normal(e)) * m.edge_length(e), 1e-14);
    }
  }
  const Vector cl = interpolate_br(linear, space);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t : space.triangles()) {
    const TriangleGeometry g(m, t);
    double a = u(rng), b = u(rng);
    if (a + b > 1.0) { a = 1.0 - a; b = 1.0 - b; }
    const Vec2 x = g.map({a, b});
    const std::span<const double> cs(cc.data(), cc.size()), ls(cl.data(), cl.size());
    EXPECT_NEAR((eval_br_field(space, cs, t, x) - constant(x)).norm(), 0.0, 1e-13);
    EXPECT_NEAR((eval_br_field(space, ls, t, x) - linear(x)).norm(), 0.0, 1e-13);
    Mat2 grad;
    grad << 2.0, -1.0, 0.5, 3.0;
    EXPECT_NEAR((eval_br_gradient(space, ls, t, x) - grad).norm(), 0.0, 1e-12);
  }
}

TEST(InterpolateBR, EdgeFluxesMatchSmoothField) {
  const Mesh m = generate_stacked_rect(kSquares, 8, 8, 8);
  const BRSpace space(m, Region::brinkman);
  const Vector c = interpolate_br(kTrigB, space);
  const std::span<const double> cs(c.data(), c.size());
  for (int t : space.triangles()) {
    const TriangleGeometry g(m, t);
    double div_h = 0.0;
    for (int e = 0; e < 3; ++e) {
      const auto [a, b] = local_edge(g, e);
      const Vec2 n = g.global_normal(e);
      const double exact = edge_integral(a, b, [&](const Vec2& x) { return kTrigB(x).dot(n); });
      const double discrete = edge_integral(a, b, [&](const Vec2& x) {
        return eval_br_field(space, cs, t, x).dot(n);
      });
      EXPECT_NEAR(discrete, exact, 1e-10);
    }
    // P_B(div Pi_B v) = P_B(div v); div v = 0 for this field.
    for (const auto& q : quad_rule(6).points) {
      div_h += 2.0 * g.area * q.weight * eval_br_gradient(space, cs, t, g.map(q.xi)).trace();
    }
    EXPECT_NEAR(div_h / g.area, 0.0, 1e-10);
  }
}

TEST(InterpolateBR, DivergenceProjectionForDivergentField) {
  const Mesh m = generate_stacked_rect(kSquares, 6, 6, 2, MeshPattern::crisscross);
  const BRSpace space(m, Region::brinkman);
  const VectorField v = [](const Vec2& x) -> Vec2 { return {std::sin(2 * x.x()) * x.y(), std::exp(x.y())}; };
  const ScalarField div = [](const Vec2& x) { return 2 * std::cos(2 * x.x()) * x.y() + std::exp(x.y()); };
  const Vector c = interpolate_br(v, space, 8);
  const std::span<const double> cs(c.data(), c.size());
  const Vector pdiv = project_p0(div, m, space.triangles(), 10);
  for (std::size_t k = 0; k < space.triangles().size(); ++k) {
    const int t = space.triangles()[k];
    const TriangleGeometry g(m, t);
    double mean = 0.0;
    for (const auto& q : quad_rule(6).points) {
      mean += 2.0 * q.weight * eval_br_gradient(space, cs, t, g.map(q.xi)).trace();
    }
    EXPECT_NEAR(mean, pdiv[static_cast<Eigen::Index>(k)], 1e-10);
  }
}

TEST(InterpolateRT0, ConstantAndPositionFields) {
  const Mesh m = generate_stacked_rect(kSquares, 4, 2, 4, MeshPattern::crisscross);
  const RT0Space space(m, Region::darcy);
  const Vector c1 = interpolate_rt0([](const Vec2&) -> Vec2 { return {1.0, 0.0}; }, space);
  const Vector cx = interpolate_rt0([](const Vec2& x) -> Vec2 { return x; }, space);
  const std::span<const double> s1(c1.data(), c1.size()), sx(cx.data(), cx.size());
  for (int t : space.triangles()) {
    const TriangleGeometry g(m, t);
    const Vec2 x = g.map({0.2, 0.3});
    EXPECT_NEAR((eval_rt0_field(space, s1, t, x) - Vec2(1.0, 0.0)).norm(), 0.0, 1e-13);
    EXPECT_NEAR(rt0_divergence(space, s1, t), 0.0, 1e-12);
    EXPECT_NEAR((eval_rt0_field(space, sx, t, x) - x).norm(), 0.0, 1e-13);
    EXPECT_NEAR(rt0_divergence(space, sx, t), 2.0, 1e-12);
  }
}

TEST(InterpolateRT0, CommutingDiagram) {
  const Mesh m = generate_stacked_rect(kSquares, 8, 4, 8);
  const RT0Space space(m, Region::darcy);
  const ScalarField div_exp = [](const Vec2& x) {
    return -kPi * std::sin(kPi * x.x()) * std::exp(x.y()) - kPi * std::exp(x.x()) * std::sin(kPi * x.y());
  };
  const VectorField cubic = [](const Vec2& x) -> Vec2 {
    return {x.x() * x.x() * x.y() - x.y() * x.y() * x.y(), 2.0 * x.x() * x.x() * x.x() + x.x() * x.y()};
  };
  const ScalarField div_cubic = [](const Vec2& x) { return 2.0 * x.x() * x.y() + x.x(); };
  const Vector ce = interpolate_rt0(kExpD, space, 8);
  const Vector cp = interpolate_rt0(cubic, space, 4);
  const std::span<const double> se(ce.data(), ce.size()), sp(cp.data(), cp.size());
  const Vector pe = project_p0(div_exp, m, space.triangles(), 10);
  const Vector pp = project_p0(div_cubic, m, space.triangles(), 4);
  for (std::size_t k = 0; k < space.triangles().size(); ++k) {
    const int t = space.triangles()[k];
    EXPECT_NEAR(rt0_divergence(space, se, t), pe[static_cast<Eigen::Index>(k)], 1e-10);
    EXPECT_NEAR(rt0_divergence(space, sp, t), pp[static_cast<Eigen::Index>(k)], 1e-12);
  }
}

TEST(ProjectP0, ConstantsAndLinearMeans) {
  const Mesh m = generate_stacked_rect(kSquares, 4, 2, 2, MeshPattern::crisscross);
  const auto tris = region_triangles(m, Region::darcy);
  const Vector c = project_p0([](const Vec2&) { return 2.5; }, m, tris);
  for (Eigen::Index k = 0; k < c.size(); ++k) EXPECT_NEAR(c[k], 2.5, 1e-14);
  const Vector x1 = project_p0([](const Vec2& x) { return x.x(); }, m, tris);
  for (std::size_t k = 0; k < tris.size(); ++k) {
    const TriangleGeometry g(m, tris[k]);
    EXPECT_NEAR(x1[static_cast<Eigen::Index>(k)], (g.p[0] + g.p[1] + g.p[2]).x() / 3.0, 1e-14);
  }
}

TEST(ProjectP0, KnownCentroid) {
  const Mesh m({{0, 0}, {0.75, 0}, {0, 0.3}, {0, -1}, {0.75, -1}},
               {{{0, 1, 2}, Region::brinkman}, {{3, 4, 1}, Region::darcy}, {{3, 1, 0}, Region::darcy}},
               {{0, 1, BoundaryTag::sigma}, {1, 2, BoundaryTag::gb_right}, {0, 2, BoundaryTag::gb_left},
                {3, 4, BoundaryTag::gd_bottom}, {4, 1, BoundaryTag::gd_right}, {0, 3, BoundaryTag::gd_left}});
  const std::vector<int> tri{0};
  // centroid (0.25, 0.1)
  EXPECT_NEAR(project_p0([](const Vec2& x) { return x.x(); }, m, tri)[0], 0.25, 1e-15);
}

TEST(Multiplier, PartitionOfUnityAndSupport) {
  const Mesh m = generate_stacked_rect(kSquares, 8, 2, 2);
  const auto iface = build_interface(m);
  const MultiplierSpace mult(m, iface);
  EXPECT_EQ(mult.size(), 5);
  EXPECT_NEAR(mult.total_length(), 1.0, 1e-14);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto vals = mult.eval_all(u(rng) * mult.total_length());
    double sum = 0.0;
    int nonzero = 0;
    for (double v : vals) {
      sum += v;
      nonzero += std::abs(v) > 0.0;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_LE(nonzero, 2);
  }
  // Local evaluation on each Sigma_h edge agrees with the global hats.
  for (std::size_t k = 0; k < iface.edges.size(); ++k) {
    const auto hats = mult.eval(static_cast<int>(k), 0.5);
    EXPECT_NEAR(hats.value[0] + hats.value[1], 1.0, 1e-14);
    EXPECT_NEAR(hats.slope[0] + hats.slope[1], 0.0, 1e-12);
    const double s = 0.5 * (m.vertex(iface.edges[k].start_vertex).x() + m.vertex(iface.edges[k].end_vertex).x()) + 0.5;
    const auto all = mult.eval_all(s);
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(all[hats.node[j]], hats.value[j], 1e-14);
  }
}
