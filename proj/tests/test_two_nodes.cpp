#include <doctest.h>

#include <cmath>
#include <random>

#include "prony/error.hpp"
#include "prony/two_nodes.hpp"

using namespace prony;
using doctest::Approx;

TEST_CASE("classify2 table") {
  TwoNodeCase c = classify2({1, 0, -1});
  CHECK(c.kind == TwoNodeKind::HyperbolaNonSingular);
  CHECK(*c.center == 0.0);
  CHECK(*c.level == -1.0);

  c = classify2({1, 1, 1});
  CHECK(c.kind == TwoNodeKind::DegenerateCross);
  CHECK(*c.center == 1.0);

  c = classify2({0, 2, 6});
  CHECK(c.kind == TwoNodeKind::Line);
  CHECK(*c.line_sum == 3.0);

  CHECK(classify2({0, 0, 1}).kind == TwoNodeKind::Empty);
  CHECK(classify2({0, 0, 0}).kind == TwoNodeKind::WholePlane);
  CHECK(classify2({1e-12, 0, 0}, 1e-9).kind == TwoNodeKind::WholePlane);
  CHECK(classify2({1e-12, 0, 0}).kind == TwoNodeKind::DegenerateCross);
  CHECK(to_string(TwoNodeKind::Line) == "Line");
}

TEST_CASE("classify2 over an exact grid") {
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int e = -2; e <= 2; ++e) {
        const TwoNodeCase c = classify2({double(a), double(b), double(e)});
        TwoNodeKind want;
        if (a != 0) want = a * e - b * b == 0 ? TwoNodeKind::DegenerateCross : TwoNodeKind::HyperbolaNonSingular;
        else if (b != 0) want = TwoNodeKind::Line;
        else if (e != 0) want = TwoNodeKind::Empty;
        else want = TwoNodeKind::WholePlane;
        CHECK(c.kind == want);
        if (a != 0) {
          // (x1 - c)(x2 - c) = -level on the curve
          const double x1 = *c.center + 1.0;
          if (want == TwoNodeKind::HyperbolaNonSingular) {
            const double x2 = *c.center - *c.level;
            CHECK(two_node_equation({double(a), double(b), double(e)}, x1, x2) == Approx(0.0));
          }
        }
      }
}

TEST_CASE("parabola crossings") {
  CHECK(*parabola_crossings({1, 0, -1}) == 2);
  CHECK(*parabola_crossings({1, 1, 1}) == 1);
  CHECK(*parabola_crossings({1, 0, 1}) == 0);
  CHECK(*parabola_crossings({2, 3, 5}) == 0);
  CHECK_FALSE(parabola_crossings({0, 0, 0}).has_value());
  CHECK_FALSE(parabola_crossings({0, 0, 1}).has_value());

  // for mu0 != 0 the count follows the sign of the level
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Triple mu{u(rng), u(rng), u(rng)};
    const TwoNodeCase c = classify2(mu);
    if (c.kind != TwoNodeKind::HyperbolaNonSingular || std::abs(*c.level) < 1e-6) continue;
    CHECK(*parabola_crossings(mu) == (*c.level < 0 ? 2 : 0));
  }
}

TEST_CASE("figure curves") {
  FigureGroup g = figure_curve({1, 0, -1}, -3, 3, 50);
  REQUIRE(g.branches.size() == 2);
  for (const Branch& b : g.branches) {
    CHECK(b.points.size() == 50);
    REQUIRE(b.marked.size() == 1);
  }
  const Point2 m0 = g.branches[0].points[g.branches[0].marked[0]];
  const Point2 m1 = g.branches[1].points[g.branches[1].marked[0]];
  CHECK(m0.x1 == Approx(-1.0));
  CHECK(m0.x2 == Approx(-1.0));
  CHECK(m1.x1 == Approx(1.0));
  CHECK(m1.x2 == Approx(1.0));

  g = figure_curve({1, 1, 1}, -3, 3, 50);
  CHECK(g.branches.size() == 2);
  g = figure_curve({2, 3, 5}, -3, 3, 50);
  CHECK(g.branches.size() == 1);
  g = figure_curve({1, 0, 1}, -3, 3, 50);
  REQUIRE(g.branches.size() == 1);
  CHECK(g.branches[0].marked.empty());
  g = figure_curve({0, 0, 1}, -3, 3, 50);
  CHECK(g.branches.empty());

  g = figure_curve({0, 1, 4}, -3, 3, 7);
  REQUIRE(g.branches.size() == 1);
  CHECK(g.branches[0].points.size() == 7);
  for (const Point2& p : g.branches[0].points) CHECK(p.x1 + p.x2 == Approx(4.0));

  CHECK_THROWS_AS(figure_curve({1, 0, -1}, 1, 1, 5), Error);
  CHECK_THROWS_AS(figure_curve({1, 0, -1}, -1, 1, 1), Error);
}

TEST_CASE("figure points lie on the curve inside the window") {
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Triple mu{u(rng), u(rng), u(rng)};
    const FigureGroup g = figure_curve(mu, -3, 3, 40);
    const double scale = std::abs(mu[0]) * 9 + std::abs(mu[1]) * 6 + std::abs(mu[2]);
    double prev = -1e300;
    for (const Branch& b : g.branches) {
      double inf = 1e300;
      for (const Point2& p : b.points) {
        CHECK(std::abs(two_node_equation(mu, p.x1, p.x2)) <= 1e-10 * scale);
        CHECK(p.x1 <= p.x2);
        CHECK(p.x1 >= -3 - 1e-9);
        CHECK(p.x2 <= 3 + 1e-9);
        inf = std::min(inf, p.x1);
      }
      for (std::size_t k : b.marked) CHECK(b.points[k].x1 == b.points[k].x2);
      CHECK(inf >= prev);
      prev = inf;
    }
  }
}

TEST_CASE("two-node amplitudes") {
  auto [a1, a2] = two_node_amplitudes(2, 3, 1, 2);
  CHECK(a1 == Approx(1.0));
  CHECK(a2 == Approx(1.0));
  CHECK_THROWS_AS(two_node_amplitudes(2, 3, 1, 1), Error);

  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double x1 = u(rng), x2 = u(rng), b1 = u(rng), b2 = u(rng);
    if (std::abs(x1 - x2) < 0.05) continue;
    const auto [c1, c2] = two_node_amplitudes(b1 + b2, b1 * x1 + b2 * x2, x1, x2);
    CHECK(std::abs(c1 - b1) <= 1e-12 * (1 + std::abs(b1)) / std::abs(x1 - x2));
    CHECK(std::abs(c2 - b2) <= 1e-12 * (1 + std::abs(b2)) / std::abs(x1 - x2));
  }
}
