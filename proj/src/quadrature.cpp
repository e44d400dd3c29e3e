#include "polyvem/quadrature.hpp"

#include <cmath>
#include <numeric>

#include "polyvem/errors.hpp"

namespace polyvem {

double QuadratureRule::sum_weights() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            if (n == 1) p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = (n == 1) ? x : p1;
            const double pn1 = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pn1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = x;
        weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

namespace {

// Duffy-type rule on the reference triangle (0,0),(1,0),(0,1):
// x = u, y = v (1-u); the Jacobian (1-u) folds into the weights.
// Exactness to `degree` needs ceil((degree+2)/2) x ceil((degree+1)/2) points.
void reference_triangle_rule(int degree, std::vector<Vec2>& pts, std::vector<double>& wts) {
    const int nu = (degree + 2 + 1) / 2;
    const int nv = (degree + 1 + 1) / 2;
    std::vector<double> xu, wu, xv, wv;
    gauss_legendre(nu, xu, wu);
    gauss_legendre(nv, xv, wv);
    pts.clear();
    wts.clear();
    for (int i = 0; i < nu; ++i) {
        const double u = 0.5 * (xu[static_cast<std::size_t>(i)] + 1.0);
        const double cu = 0.5 * wu[static_cast<std::size_t>(i)];
        for (int j = 0; j < nv; ++j) {
            const double v = 0.5 * (xv[static_cast<std::size_t>(j)] + 1.0);
            const double cv = 0.5 * wv[static_cast<std::size_t>(j)];
            pts.emplace_back(u, v * (1.0 - u));
            wts.push_back(cu * cv * (1.0 - u));
        }
    }
}

}  // namespace

QuadratureRule polygon_rule(const Polygon& poly, int degree) {
    if (degree < 0 || degree > 8) {
        throw InvalidDomainError("polygon_rule: degree must be in [0, 8]");
    }
    if (poly.size() < 3 || !polygon_is_simple(poly)) {
        throw InvalidDomainError("polygon_rule: polygon is not simple");
    }
    const int d = std::max(degree, 1);
    std::vector<Vec2> ref_pts;
    std::vector<double> ref_wts;
    reference_triangle_rule(d, ref_pts, ref_wts);

    const Vec2 c = polygon_centroid(poly);
    QuadratureRule rule;
    rule.exact_degree = degree;
    const std::size_t n = poly.size();
    rule.points.reserve(n * ref_pts.size());
    rule.weights.reserve(n * ref_pts.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        // Signed Jacobian of the map (xi,eta) -> c + xi (a-c) + eta (b-c).
        const Vec2 e1 = a - c, e2 = b - c;
        const double jac = e1.x() * e2.y() - e1.y() * e2.x();
        if (jac == 0.0) continue;
        for (std::size_t q = 0; q < ref_pts.size(); ++q) {
            rule.points.push_back(c + ref_pts[q].x() * e1 + ref_pts[q].y() * e2);
            rule.weights.push_back(ref_wts[q] * jac);
        }
    }
    return rule;
}

QuadratureRule edge_rule(const Vec2& p0, const Vec2& p1, int degree) {
    const double len = (p1 - p0).norm();
    if (len == 0.0) throw InvalidDomainError("edge_rule: coincident endpoints");
    const int n = std::max(1, (std::max(degree, 0) + 2) / 2);
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    QuadratureRule rule;
    rule.exact_degree = 2 * n - 1;
    rule.points.reserve(static_cast<std::size_t>(n));
    rule.weights.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = 0.5 * (x[static_cast<std::size_t>(i)] + 1.0);
        rule.points.push_back(p0 + t * (p1 - p0));
        rule.weights.push_back(0.5 * w[static_cast<std::size_t>(i)] * len);
    }
    return rule;
}

int monomial_count(int degree) {
    return (degree + 1) * (degree + 2) / 2;
}

void monomial_exponents(int index, int& a, int& b) {
    int deg = 0;
    while (monomial_count(deg) <= index) ++deg;
    const int offset = index - (deg > 0 ? monomial_count(deg - 1) : 0);
    a = deg - offset;
    b = offset;
}

double scaled_monomial(int index, const Vec2& x, const Vec2& centroid, double h) {
    int a, b;
    monomial_exponents(index, a, b);
    const double xi = (x.x() - centroid.x()) / h;
    const double eta = (x.y() - centroid.y()) / h;
    return std::pow(xi, a) * std::pow(eta, b);
}

Vec2 scaled_monomial_gradient(int index, const Vec2& x, const Vec2& centroid, double h) {
    int a, b;
    monomial_exponents(index, a, b);
    const double xi = (x.x() - centroid.x()) / h;
    const double eta = (x.y() - centroid.y()) / h;
    Vec2 g(0.0, 0.0);
    if (a > 0) g.x() = a * std::pow(xi, a - 1) * std::pow(eta, b) / h;
    if (b > 0) g.y() = b * std::pow(xi, a) * std::pow(eta, b - 1) / h;
    return g;
}

}  // namespace polyvem
