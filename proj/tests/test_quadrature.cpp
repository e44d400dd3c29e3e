#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "polyvem/errors.hpp"
#include "polyvem/quadrature.hpp"

using namespace polyvem;

namespace {
const Polygon kUnitSquare = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
const Polygon kPentagon = {{0, 0}, {2, 0}, {2, 1}, {1, 2}, {0, 1}};
}

TEST_CASE("polygon rule: weights sum to the area") {
    for (int deg = 0; deg <= 8; ++deg) {
        const QuadratureRule rule = polygon_rule(kPentagon, deg);
        CHECK(rule.sum_weights() ==
              doctest::Approx(polygon_signed_area(kPentagon)).epsilon(1e-12));
    }
}

TEST_CASE("polygon rule: unit square constants") {
    const QuadratureRule rule = polygon_rule(kUnitSquare, 0);
    CHECK(rule.integrate([](const Vec2&) { return 1.0; }) == doctest::Approx(1.0));
}

TEST_CASE("polygon rule: centered coordinates integrate to zero") {
    const Vec2 c = polygon_centroid(kPentagon);
    const double h = polygon_diameter(kPentagon);
    const QuadratureRule rule = polygon_rule(kPentagon, 1);
    CHECK(rule.integrate([&](const Vec2& x) { return (x.x() - c.x()) / h; }) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rule.integrate([&](const Vec2& x) { return (x.y() - c.y()) / h; }) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("polygon rule: x^2 y on the pentagon against the divergence oracle") {
    const QuadratureRule rule = polygon_rule(kPentagon, 3);
    const double val = rule.integrate([](const Vec2& x) { return x.x() * x.x() * x.y(); });
    CHECK(val == doctest::Approx(oracles::polygon_monomial_integral(kPentagon, 2, 1))
                     .epsilon(1e-10));
}

TEST_CASE("polygon rule: exactness on all monomials up to degree") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 4; ++trial) {
        const Polygon poly = oracles::random_convex_polygon(rng, 5 + trial);
        for (int deg = 1; deg <= 8; deg += 2) {
            const QuadratureRule rule = polygon_rule(poly, deg);
            for (int a = 0; a + 0 <= deg; ++a) {
                for (int b = 0; a + b <= deg; ++b) {
                    const double num =
                        rule.integrate([&](const Vec2& x) {
                            return std::pow(x.x(), a) * std::pow(x.y(), b);
                        });
                    const double ref = oracles::polygon_monomial_integral(poly, a, b);
                    CHECK(num == doctest::Approx(ref).epsilon(1e-11));
                }
            }
        }
    }
}

TEST_CASE("polygon rule: rejects bad input") {
    CHECK_THROWS_AS(polygon_rule(kUnitSquare, 9), InvalidDomainError);
    CHECK_THROWS_AS(polygon_rule({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, 2), InvalidDomainError);
}

TEST_CASE("edge rule basics") {
    const QuadratureRule r1 = edge_rule({0, 0}, {1, 0}, 1);
    CHECK(r1.integrate([](const Vec2&) { return 1.0; }) == doctest::Approx(1.0));
    const QuadratureRule r2 = edge_rule({0, 0}, {0, 2}, 1);
    CHECK(r2.integrate([](const Vec2& x) { return x.y(); }) == doctest::Approx(2.0));
    CHECK_THROWS_AS(edge_rule({1, 1}, {1, 1}, 2), InvalidDomainError);
}

TEST_CASE("edge rule: (x+y)^2 on a slanted segment against the antiderivative") {
    // param x = 1+3t, y = 1+4t, len 5: integral = 5 int_0^1 (2+7t)^2 dt
    //   = 5 [ (2+7t)^3 / 21 ]_0^1 = 5 (729 - 8) / 21.
    const double exact = 5.0 * (729.0 - 8.0) / 21.0;
    const QuadratureRule rule = edge_rule({1, 1}, {4, 5}, 2);
    const double val =
        rule.integrate([](const Vec2& x) { return (x.x() + x.y()) * (x.x() + x.y()); });
    CHECK(val == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("scaled monomial ordering and gradients") {
    int a, b;
    monomial_exponents(0, a, b);
    CHECK((a == 0 && b == 0));
    monomial_exponents(1, a, b);
    CHECK((a == 1 && b == 0));
    monomial_exponents(2, a, b);
    CHECK((a == 0 && b == 1));
    monomial_exponents(4, a, b);
    CHECK((a == 1 && b == 1));
    CHECK(monomial_count(2) == 6);

    const Vec2 c(0.5, 0.5);
    const double h = 2.0;
    const Vec2 x(1.5, 2.5);
    CHECK(scaled_monomial(3, x, c, h) == doctest::Approx(0.25));  // xi^2
    const Vec2 g = scaled_monomial_gradient(4, x, c, h);          // xi eta
    CHECK(g.x() == doctest::Approx(1.0 / h));
    CHECK(g.y() == doctest::Approx(0.5 / h));
}
