#pragma once

#include <vector>

#include "polyvem/geometry.hpp"

namespace polyvem {

struct QuadratureRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
    int exact_degree = 0;

    double sum_weights() const;

    template <typename F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * f(points[i]);
        return s;
    }
};

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Rule over a polygon, exact for bivariate polynomials up to `degree`
// (0 <= degree <= 8). Built by fanning triangles from the centroid and mapping
// a Duffy-type tensor rule onto each; point weights carry the signed triangle
// orientation so non-star-shaped simple polygons still integrate exactly.
QuadratureRule polygon_rule(const Polygon& poly, int degree);

// Gauss-Legendre rule on the segment p0->p1 exact to `degree`;
// weights sum to the segment length.
QuadratureRule edge_rule(const Vec2& p0, const Vec2& p1, int degree);

// Scaled monomial basis m_k(x) = xi^a eta^b with xi = (x-cx)/h, eta = (y-cy)/h,
// ordered by total degree: 1, xi, eta, xi^2, xi*eta, eta^2, ...
int monomial_count(int degree);
void monomial_exponents(int index, int& a, int& b);
double scaled_monomial(int index, const Vec2& x, const Vec2& centroid, double h);
Vec2 scaled_monomial_gradient(int index, const Vec2& x, const Vec2& centroid, double h);

}  // namespace polyvem
