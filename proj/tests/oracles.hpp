#pragma once

// Test-only oracles, independent of the implementation paths they check:
//  - monomial integrals over polygons via the divergence theorem reduced to
//    edge antiderivatives evaluated with a local Gauss rule;
//  - closed-form P1 triangle conduction and CST elasticity stiffness;
//  - a banded finite-difference solve of the radial thermoelastic ODE.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "polyvem/geometry.hpp"
#include "polyvem/material.hpp"

namespace oracles {

using polyvem::Polygon;
using polyvem::Vec2;

// 12-point Gauss-Legendre nodes/weights on [-1,1] (Abramowitz & Stegun),
// exact through degree 23; enough for every oracle edge integrand used here.
inline const std::array<double, 6>& gl12_nodes() {
    static const std::array<double, 6> n = {0.1252334085114689, 0.3678314989981802,
                                            0.5873179542866175, 0.7699026741943047,
                                            0.9041172563704749, 0.9815606342467192};
    return n;
}
inline const std::array<double, 6>& gl12_weights() {
    static const std::array<double, 6> w = {0.2491470458134028, 0.2334925365383548,
                                            0.2031674267230659, 0.1600783285433462,
                                            0.1069393259953184, 0.0471753363865118};
    return w;
}

template <typename F>
double integrate_segment(const Vec2& a, const Vec2& b, F&& f) {
    const double len = (b - a).norm();
    double sum = 0.0;
    for (int i = 0; i < 6; ++i) {
        for (const double sgn : {-1.0, 1.0}) {
            const double t = 0.5 * (1.0 + sgn * gl12_nodes()[static_cast<std::size_t>(i)]);
            sum += 0.5 * gl12_weights()[static_cast<std::size_t>(i)] * f(a + t * (b - a));
        }
    }
    return sum * len;
}

// Exact integral of x^a y^b over a simple CCW polygon:
// int x^a y^b dA = sum over edges of int (x^{a+1} / (a+1)) y^b n_x ds.
inline double polygon_monomial_integral(const Polygon& poly, int a, int b) {
    double total = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const double len = (q - p).norm();
        const Vec2 normal((q - p).y() / len, -(q - p).x() / len);
        total += normal.x() * integrate_segment(p, q, [a, b](const Vec2& x) {
            return std::pow(x.x(), a + 1) / (a + 1) * std::pow(x.y(), b);
        });
    }
    return total;
}

// Same in an element's scaled coordinates xi = (x-cx)/h, eta = (y-cy)/h.
inline double polygon_scaled_monomial_integral(const Polygon& poly, const Vec2& centroid,
                                               double h, int a, int b) {
    double total = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const double len = (q - p).norm();
        const Vec2 normal((q - p).y() / len, -(q - p).x() / len);
        total += normal.x() * integrate_segment(p, q, [&](const Vec2& x) {
            const double xi = (x.x() - centroid.x()) / h;
            const double eta = (x.y() - centroid.y()) / h;
            return h * std::pow(xi, a + 1) / (a + 1) * std::pow(eta, b);
        });
    }
    return total;
}

// Linear-triangle conduction stiffness: K_ij = lambda A grad(phi_i).grad(phi_j).
inline Eigen::Matrix3d p1_conduction_stiffness(const Polygon& tri, double lambda) {
    const double x1 = tri[0].x(), y1 = tri[0].y();
    const double x2 = tri[1].x(), y2 = tri[1].y();
    const double x3 = tri[2].x(), y3 = tri[2].y();
    const double twoA = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1);
    const double A = 0.5 * twoA;
    const Eigen::Vector3d bv(y2 - y3, y3 - y1, y1 - y2);
    const Eigen::Vector3d cv(x3 - x2, x1 - x3, x2 - x1);
    Eigen::Matrix3d K;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            K(i, j) = lambda * (bv(i) * bv(j) + cv(i) * cv(j)) / (4.0 * A);
        }
    }
    return K;
}

// Constant-strain-triangle elasticity stiffness, DOFs (u1x,u1y,...,u3y).
inline Eigen::MatrixXd cst_stiffness(const Polygon& tri, const Eigen::Matrix3d& Dhat) {
    const double x1 = tri[0].x(), y1 = tri[0].y();
    const double x2 = tri[1].x(), y2 = tri[1].y();
    const double x3 = tri[2].x(), y3 = tri[2].y();
    const double twoA = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1);
    const double A = 0.5 * twoA;
    const Eigen::Vector3d bv(y2 - y3, y3 - y1, y1 - y2);
    const Eigen::Vector3d cv(x3 - x2, x1 - x3, x2 - x1);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 6);
    for (int i = 0; i < 3; ++i) {
        B(0, 2 * i) = bv(i) / twoA;
        B(1, 2 * i + 1) = cv(i) / twoA;
        B(2, 2 * i) = cv(i) / twoA;
        B(2, 2 * i + 1) = bv(i) / twoA;
    }
    return A * B.transpose() * Dhat * B;
}

// Radial displacement of the thermoelastic cylinder from a banded
// second-order finite-difference solve with Robin (stress-free) ends,
// Richardson-extrapolated across two grids.
double cylinder_ur_fd(double r_query, double r_a, double r_b, double E, double nu, double alpha,
                      double T_a, double T_b);

// Deterministic random convex polygon: affine image of a cyclic polygon.
inline Polygon random_convex_polygon(std::mt19937_64& rng, int nv) {
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    std::vector<double> angles;
    bool ok = false;
    while (!ok) {
        angles.clear();
        for (int i = 0; i < nv; ++i) angles.push_back(uniform(0.0, 2.0 * M_PI));
        std::sort(angles.begin(), angles.end());
        ok = true;
        for (int i = 0; i < nv; ++i) {
            const double gap =
                (i + 1 < nv ? angles[static_cast<std::size_t>(i + 1)]
                            : angles.front() + 2.0 * M_PI) -
                angles[static_cast<std::size_t>(i)];
            if (gap < 0.6 / nv || gap > 2.0 * M_PI * 0.6) ok = false;
        }
    }
    const double sx = uniform(0.6, 1.5), sy = uniform(0.6, 1.5);
    const double rot = uniform(0.0, 2.0 * M_PI);
    const Vec2 shift(uniform(-2.0, 2.0), uniform(-2.0, 2.0));
    Polygon poly;
    for (const double t : angles) {
        const double px = sx * std::cos(t), py = sy * std::sin(t);
        poly.emplace_back(shift.x() + px * std::cos(rot) - py * std::sin(rot),
                          shift.y() + px * std::sin(rot) + py * std::cos(rot));
    }
    return poly;
}

}  // namespace oracles
