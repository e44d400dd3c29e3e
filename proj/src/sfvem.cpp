#include "polyvem/sfvem.hpp"

#include <cmath>

#include "polyvem/errors.hpp"
#include "polyvem/quadrature.hpp"

namespace polyvem {

int select_order(int nv) {
    if (nv < 3) throw DegenerateElementError("select_order: nv must be >= 3");
    int l = 1;
    while ((l + 1) * (l + 2) <= nv - 1) ++l;
    return l;
}

namespace {

// Row vector of the working scalar basis (monomials times the recondition
// transform) evaluated at x.
Eigen::VectorXd basis_values(const GradientProjectionKernel& k, const Vec2& x) {
    Eigen::VectorXd m(k.dim_l);
    for (int j = 0; j < k.dim_l; ++j) m(j) = scaled_monomial(j, x, k.centroid, k.h);
    return k.basis.transpose() * m;
}

Eigen::MatrixXd basis_gradients(const GradientProjectionKernel& k, const Vec2& x) {
    Eigen::MatrixXd g(2, k.dim_l);
    for (int j = 0; j < k.dim_l; ++j) {
        g.col(j) = scaled_monomial_gradient(j, x, k.centroid, k.h);
    }
    return g * k.basis;
}

void check_rank(const Eigen::MatrixXd& K, int expected_rank, int element_id) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(K);
    const Eigen::VectorXd s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i) {
        if (s(i) > 1e-10 * s(0)) ++rank;
    }
    if (rank != expected_rank) {
        throw SolverError("stabilization-free stiffness on element " +
                          std::to_string(element_id) + " has rank " + std::to_string(rank) +
                          " instead of " + std::to_string(expected_rank) +
                          "; the order inequality is violated");
    }
}

}  // namespace

Vec2 GradientProjectionKernel::gradient_at(const Eigen::VectorXd& nodal, const Vec2& x) const {
    const Eigen::VectorXd c = Pi_m * nodal;
    const Eigen::VectorXd q = basis_values(*this, x);
    return Vec2(q.dot(c.head(dim_l)), q.dot(c.tail(dim_l)));
}

Eigen::Vector3d GradientProjectionKernel::strain_at(const Eigen::VectorXd& nodal,
                                                    const Vec2& x) const {
    // Per-component gradients via the Kronecker structure of Pi_m (x) I_2.
    Eigen::VectorXd ux(nv), uy(nv);
    for (int i = 0; i < nv; ++i) {
        ux(i) = nodal(2 * i);
        uy(i) = nodal(2 * i + 1);
    }
    const Vec2 gx = gradient_at(ux, x);
    const Vec2 gy = gradient_at(uy, x);
    return Eigen::Vector3d(gx.x(), gy.y(), gx.y() + gy.x());
}

GradientProjectionKernel gradient_projection_scalar(const PolygonalMesh& mesh, int element_id,
                                                    int l,
                                                    const ScalarElementKernel& base_projection) {
    if (l < 1) throw ConfigError("gradient_projection_scalar: l must be >= 1");
    const Polygon poly = mesh.element_polygon(element_id);
    const ElementGeometry geom = mesh.element_geometry(element_id);
    const int nv = static_cast<int>(poly.size());

    GradientProjectionKernel k;
    k.l = l;
    k.nv = nv;
    k.dim_l = monomial_count(l);
    k.area = geom.area;
    k.h = geom.diameter;
    k.centroid = geom.centroid;
    k.basis = Eigen::MatrixXd::Identity(k.dim_l, k.dim_l);

    const QuadratureRule volume = polygon_rule(poly, 2 * l + 2);

    // Scalar monomial mass matrix; recondition by orthonormalizing the basis
    // against the polygon rule when needed.
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k.dim_l, k.dim_l);
    for (std::size_t q = 0; q < volume.points.size(); ++q) {
        Eigen::VectorXd m(k.dim_l);
        for (int j = 0; j < k.dim_l; ++j) {
            m(j) = scaled_monomial(j, volume.points[q], k.centroid, k.h);
        }
        H += volume.weights[q] * m * m.transpose();
    }
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
        const double lo = eig.eigenvalues().minCoeff();
        const double hi = eig.eigenvalues().maxCoeff();
        if (!(lo > 0.0) || hi / lo > 1e12) {
            if (!(lo > 0.0)) {
                throw ConditioningError("gradient_projection_scalar: monomial mass matrix on "
                                        "element " +
                                        std::to_string(element_id) + " is not positive definite");
            }
            k.basis = eig.eigenvectors() *
                      eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
            H = k.basis.transpose() * H * k.basis;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig2(H);
            if (!(eig2.eigenvalues().minCoeff() > 0.0) ||
                eig2.eigenvalues().maxCoeff() / eig2.eigenvalues().minCoeff() > 1e12) {
                throw ConditioningError(
                    "gradient_projection_scalar: mass matrix on element " +
                    std::to_string(element_id) + " remains ill-conditioned");
            }
        }
    }
    k.Gtilde = Eigen::MatrixXd::Zero(2 * k.dim_l, 2 * k.dim_l);
    k.Gtilde.topLeftCorner(k.dim_l, k.dim_l) = H;
    k.Gtilde.bottomRightCorner(k.dim_l, k.dim_l) = H;

    k.Btilde = Eigen::MatrixXd::Zero(2 * k.dim_l, nv);
    // Boundary term with piecewise-linear traces.
    for (int i = 0; i < nv; ++i) {
        const Vec2& a = poly[static_cast<std::size_t>(i)];
        const Vec2& b = poly[static_cast<std::size_t>((i + 1) % nv)];
        const double len = (b - a).norm();
        const Vec2 normal = Vec2((b - a).y(), -(b - a).x()) / len;
        const QuadratureRule edge = edge_rule(a, b, l + 2);
        for (std::size_t q = 0; q < edge.points.size(); ++q) {
            const Vec2& x = edge.points[q];
            const double w = edge.weights[q];
            const double t = (x - a).norm() / len;
            const Eigen::VectorXd qv = basis_values(k, x);
            for (int j = 0; j < k.dim_l; ++j) {
                const double fx = w * qv(j) * normal.x();
                const double fy = w * qv(j) * normal.y();
                k.Btilde(j, i) += fx * (1.0 - t);
                k.Btilde(j, (i + 1) % nv) += fx * t;
                k.Btilde(k.dim_l + j, i) += fy * (1.0 - t);
                k.Btilde(k.dim_l + j, (i + 1) % nv) += fy * t;
            }
        }
    }
    // Volume term: the virtual function is replaced by its energy projection.
    for (std::size_t q = 0; q < volume.points.size(); ++q) {
        const Vec2& x = volume.points[q];
        const double w = volume.weights[q];
        const Eigen::MatrixXd grad = basis_gradients(k, x);
        const Eigen::RowVector3d mono(1.0, (x.x() - k.centroid.x()) / k.h,
                                      (x.y() - k.centroid.y()) / k.h);
        const Eigen::RowVectorXd proj = mono * base_projection.Pi_star;
        for (int j = 0; j < k.dim_l; ++j) {
            k.Btilde.row(j) -= w * grad(0, j) * proj;
            k.Btilde.row(k.dim_l + j) -= w * grad(1, j) * proj;
        }
    }

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(k.Gtilde);
    k.Pi_m = ldlt.solve(k.Btilde);
    return k;
}

Eigen::MatrixXd sfvem_thermal_stiffness(const GradientProjectionKernel& kernel, double lambda,
                                        const PolygonalMesh& mesh, int element_id) {
    (void)mesh;
    if (!(lambda > 0.0)) throw ConfigError("sfvem_thermal_stiffness: conductivity must be > 0");
    const Eigen::MatrixXd K =
        lambda * kernel.Pi_m.transpose() * kernel.Gtilde * kernel.Pi_m;
    check_rank(K, kernel.nv - 1, element_id);
    return K;
}

Eigen::MatrixXd sfvem_elastic_stiffness(const GradientProjectionKernel& kernel,
                                        const Eigen::Matrix3d& Dhat, const PolygonalMesh& mesh,
                                        int element_id) {
    const Polygon poly = mesh.element_polygon(element_id);
    const QuadratureRule volume = polygon_rule(poly, 2 * kernel.l + 2);
    const int dim2 = 2 * kernel.dim_l;
    const int dim4 = 2 * dim2;

    // Middle integral of E^T Dhat E with E = A (N_p)^T, the Voigt strain of the
    // interleaved polynomial gradient.
    Eigen::MatrixXd mid = Eigen::MatrixXd::Zero(dim4, dim4);
    for (std::size_t q = 0; q < volume.points.size(); ++q) {
        const Eigen::VectorXd qv = basis_values(kernel, volume.points[q]);
        Eigen::MatrixXd E = Eigen::MatrixXd::Zero(3, dim4);
        for (int j = 0; j < kernel.dim_l; ++j) {
            // Interleaved coefficient layout: (x-block, y-block) each doubled.
            E(0, 2 * j) = qv(j);                            // du_x/dx
            E(1, 2 * (kernel.dim_l + j) + 1) = qv(j);       // du_y/dy
            E(2, 2 * j + 1) = qv(j);                        // du_y/dx
            E(2, 2 * (kernel.dim_l + j)) = qv(j);           // du_x/dy
        }
        mid += volume.weights[q] * E.transpose() * Dhat * E;
    }

    // Pi_m (x) I_2 onto interleaved DOFs.
    Eigen::MatrixXd Pim2 = Eigen::MatrixXd::Zero(dim4, 2 * kernel.nv);
    for (int r = 0; r < dim2; ++r) {
        for (int c = 0; c < kernel.nv; ++c) {
            Pim2(2 * r, 2 * c) = kernel.Pi_m(r, c);
            Pim2(2 * r + 1, 2 * c + 1) = kernel.Pi_m(r, c);
        }
    }
    const Eigen::MatrixXd K = Pim2.transpose() * mid * Pim2;
    check_rank(K, 2 * kernel.nv - 3, element_id);
    return K;
}

Eigen::VectorXd sfvem_thermal_force(const GradientProjectionKernel& kernel,
                                    const ScalarElementKernel& thermal_kernel,
                                    const Eigen::VectorXd& nodal_temperature, double alpha,
                                    double T_ref, const Eigen::Matrix3d& Dhat,
                                    const PolygonalMesh& mesh, int element_id) {
    if (nodal_temperature.size() != kernel.nv) {
        throw ConfigError("sfvem_thermal_force: nodal temperature size mismatch");
    }
    const Polygon poly = mesh.element_polygon(element_id);
    const QuadratureRule volume = polygon_rule(poly, 2 * kernel.l + 2);
    const int dim2 = 2 * kernel.dim_l;
    const int dim4 = 2 * dim2;

    Eigen::VectorXd load = Eigen::VectorXd::Zero(dim4);
    for (std::size_t q = 0; q < volume.points.size(); ++q) {
        const double dT =
            thermal_kernel.project_value(nodal_temperature, volume.points[q]) - T_ref;
        const Eigen::Vector3d eps_t(alpha * dT, alpha * dT, 0.0);
        const Eigen::VectorXd qv = basis_values(kernel, volume.points[q]);
        Eigen::MatrixXd E = Eigen::MatrixXd::Zero(3, dim4);
        for (int j = 0; j < kernel.dim_l; ++j) {
            E(0, 2 * j) = qv(j);
            E(1, 2 * (kernel.dim_l + j) + 1) = qv(j);
            E(2, 2 * j + 1) = qv(j);
            E(2, 2 * (kernel.dim_l + j)) = qv(j);
        }
        load += volume.weights[q] * (E.transpose() * (Dhat * eps_t));
    }
    Eigen::VectorXd F = Eigen::VectorXd::Zero(2 * kernel.nv);
    for (int r = 0; r < dim2; ++r) {
        for (int c = 0; c < kernel.nv; ++c) {
            F(2 * c) += kernel.Pi_m(r, c) * load(2 * r);
            F(2 * c + 1) += kernel.Pi_m(r, c) * load(2 * r + 1);
        }
    }
    return F;
}

}  // namespace polyvem
