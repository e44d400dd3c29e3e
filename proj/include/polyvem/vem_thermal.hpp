#pragma once

#include <Eigen/Dense>

#include "polyvem/mesh.hpp"

namespace polyvem {

// First-order scalar VEM kernel for heat conduction on one polygon.
//
// Monomial basis in scaled coordinates: p = (1, xi, eta). The constant row of
// G is closed by the vertex-average projector constraint, the remaining rows
// come from the boundary integral of the piecewise-linear traces against the
// (constant) monomial gradients. Pi_star = G^-1 B maps nodal values to
// monomial coefficients of the projected polynomial.
struct ScalarElementKernel {
    int nv = 0;
    double area = 0.0;
    double h = 0.0;
    Vec2 centroid{0.0, 0.0};
    double conductivity = 1.0;

    Eigen::Matrix3d G;
    Eigen::Matrix3Xd B;          // 3 x nv
    Eigen::Matrix3Xd Pi_star;    // 3 x nv
    Eigen::MatrixXd Pi_nodal;    // nv x nv, D * Pi_star
    Eigen::MatrixXd Kc, Ks, K;   // filled by thermal_stiffness

    // Value of the projected polynomial at a point, given nodal values.
    double project_value(const Eigen::VectorXd& nodal, const Vec2& x) const;
    Vec2 project_gradient(const Eigen::VectorXd& nodal) const;
};

ScalarElementKernel scalar_projection(const PolygonalMesh& mesh, int element_id,
                                      double conductivity);

// K = Kc + Ks with Kc = Pi_star^T G_energy Pi_star and
// Ks = tau_h tr(Kc) (I - Pi_nodal)^T (I - Pi_nodal).
void thermal_stiffness(ScalarElementKernel& kernel, double tau_h);

}  // namespace polyvem
