#pragma once

#include <Eigen/Dense>

#include "polyvem/mesh.hpp"
#include "polyvem/vem_thermal.hpp"

namespace polyvem {

// Smallest l >= 1 with (l+1)(l+2) > nv - 1 (strict).
int select_order(int nv);

// Higher-order L2 projection of the gradient onto [P_l]^2, the core of the
// stabilization-free construction. Coefficients are ordered as
// (d/dx block, d/dy block), each of size dim_l over the scaled monomials.
//
// When the monomial mass matrix is ill-conditioned the scalar basis is
// orthonormalized against the element's polygon rule before inversion;
// `basis` maps orthonormalized coefficients back to monomial space
// (identity when no reconditioning was needed).
struct GradientProjectionKernel {
    int l = 1;
    int nv = 0;
    int dim_l = 0;
    double area = 0.0;
    double h = 0.0;
    Vec2 centroid{0.0, 0.0};

    Eigen::MatrixXd basis;   // dim_l x dim_l, monomial <- working basis
    Eigen::MatrixXd Gtilde;  // 2dim x 2dim mass-type matrix
    Eigen::MatrixXd Btilde;  // 2dim x nv
    Eigen::MatrixXd Pi_m;    // 2dim x nv

    // Projected gradient of a scalar field at a point.
    Vec2 gradient_at(const Eigen::VectorXd& nodal, const Vec2& x) const;
    // Projected strain at a point for interleaved displacement DOFs.
    Eigen::Vector3d strain_at(const Eigen::VectorXd& nodal, const Vec2& x) const;
};

GradientProjectionKernel gradient_projection_scalar(const PolygonalMesh& mesh, int element_id,
                                                    int l,
                                                    const ScalarElementKernel& base_projection);

// K = lambda Pi_m^T Gtilde Pi_m; full rank nv - 1 without stabilization.
Eigen::MatrixXd sfvem_thermal_stiffness(const GradientProjectionKernel& kernel, double lambda,
                                        const PolygonalMesh& mesh, int element_id);

// Vector stiffness via the Kronecker expansion Pi_m (x) I_2 and the Voigt
// gather matrix A; rank 2nv - 3 without stabilization.
Eigen::MatrixXd sfvem_elastic_stiffness(const GradientProjectionKernel& kernel,
                                        const Eigen::Matrix3d& Dhat, const PolygonalMesh& mesh,
                                        int element_id);

Eigen::VectorXd sfvem_thermal_force(const GradientProjectionKernel& kernel,
                                    const ScalarElementKernel& thermal_kernel,
                                    const Eigen::VectorXd& nodal_temperature, double alpha,
                                    double T_ref, const Eigen::Matrix3d& Dhat,
                                    const PolygonalMesh& mesh, int element_id);

}  // namespace polyvem
