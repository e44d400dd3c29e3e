#pragma once

#include <Eigen/Dense>

#include "polyvem/material.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/vem_thermal.hpp"

namespace polyvem {

// First-order vector VEM kernel for plane elasticity on one polygon.
//
// Vector monomial basis in scaled coordinates:
//   m1 = (1,0), m2 = (0,1), m3 = (-eta, xi),   [rigid modes]
//   m4 = (eta, xi), m5 = (xi, 0), m6 = (0, eta).
// Rows of Bbar for the rigid modes are closed by vertex-average constraints;
// the energy rows come from boundary integrals of the constant tractions
// against linear traces. Nodal DOFs interleave as (u1x, u1y, u2x, u2y, ...).
struct VectorElementKernel {
    int nv = 0;
    double area = 0.0;
    double h = 0.0;
    Vec2 centroid{0.0, 0.0};
    Eigen::Matrix3d Dhat;

    Eigen::Matrix<double, 3, 6> strain_basis;  // Voigt strain of each m_alpha
    Eigen::MatrixXd Bbar;                      // 6 x 2nv
    Eigen::MatrixXd Dbar;                      // 2nv x 6
    Eigen::Matrix<double, 6, 6> M;             // Bbar * Dbar
    Eigen::MatrixXd Pi_star;                   // 6 x 2nv, solves M Pi_star = Bbar
    Eigen::MatrixXd Pi_nodal;                  // 2nv x 2nv, Dbar * Pi_star
    Eigen::MatrixXd Kc, Ks, K;

    // Projected strain (constant over the element) for nodal displacements.
    Eigen::Vector3d project_strain(const Eigen::VectorXd& nodal) const;
    // Projected displacement at a point.
    Vec2 project_value(const Eigen::VectorXd& nodal, const Vec2& x) const;
};

VectorElementKernel vector_projection(const PolygonalMesh& mesh, int element_id,
                                      const Eigen::Matrix3d& Dhat);

void elastic_stiffness(VectorElementKernel& kernel, double tau_h);

// Thermal load: F = Pi_star^T \int strain_basis^T Dhat eps_t dOmega with
// eps_t = alpha (T(x) - T_ref) [1,1,0]^T and T(x) the projected temperature
// from the element's scalar kernel.
Eigen::VectorXd thermal_force(const VectorElementKernel& kernel,
                              const ScalarElementKernel& thermal_kernel,
                              const Eigen::VectorXd& nodal_temperature, double alpha,
                              double T_ref, const PolygonalMesh& mesh, int element_id);

}  // namespace polyvem
