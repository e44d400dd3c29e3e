#include "polyvem/vem_elastic.hpp"

#include "polyvem/errors.hpp"
#include "polyvem/quadrature.hpp"

namespace polyvem {

namespace {

// Components of the basis member m_alpha at scaled coordinates (xi, eta).
Vec2 basis_value(int alpha, double xi, double eta) {
    switch (alpha) {
        case 0: return Vec2(1.0, 0.0);
        case 1: return Vec2(0.0, 1.0);
        case 2: return Vec2(-eta, xi);
        case 3: return Vec2(eta, xi);
        case 4: return Vec2(xi, 0.0);
        default: return Vec2(0.0, eta);
    }
}

}  // namespace

Eigen::Vector3d VectorElementKernel::project_strain(const Eigen::VectorXd& nodal) const {
    return strain_basis * (Pi_star * nodal);
}

Vec2 VectorElementKernel::project_value(const Eigen::VectorXd& nodal, const Vec2& x) const {
    const Eigen::Matrix<double, 6, 1> c = Pi_star * nodal;
    const double xi = (x.x() - centroid.x()) / h;
    const double eta = (x.y() - centroid.y()) / h;
    Vec2 u(0.0, 0.0);
    for (int alpha = 0; alpha < 6; ++alpha) u += c(alpha) * basis_value(alpha, xi, eta);
    return u;
}

VectorElementKernel vector_projection(const PolygonalMesh& mesh, int element_id,
                                      const Eigen::Matrix3d& Dhat) {
    const Polygon poly = mesh.element_polygon(element_id);
    const ElementGeometry geom = mesh.element_geometry(element_id);
    const int nv = static_cast<int>(poly.size());
    const int nd = 2 * nv;

    VectorElementKernel k;
    k.nv = nv;
    k.area = geom.area;
    k.h = geom.diameter;
    k.centroid = geom.centroid;
    k.Dhat = Dhat;

    // Voigt strains of the basis: rigid members are strain-free; m4 carries
    // pure shear 2/h, m5 and m6 the two unit stretches 1/h.
    k.strain_basis.setZero();
    k.strain_basis(2, 3) = 2.0 / k.h;
    k.strain_basis(0, 4) = 1.0 / k.h;
    k.strain_basis(1, 5) = 1.0 / k.h;

    k.Bbar.resize(6, nd);
    k.Bbar.setZero();
    // Vertex-average closure: projected translations and rotation match the
    // nodal averages.
    for (int i = 0; i < nv; ++i) {
        const double xi = (poly[static_cast<std::size_t>(i)].x() - k.centroid.x()) / k.h;
        const double eta = (poly[static_cast<std::size_t>(i)].y() - k.centroid.y()) / k.h;
        k.Bbar(0, 2 * i) = 1.0 / nv;
        k.Bbar(1, 2 * i + 1) = 1.0 / nv;
        k.Bbar(2, 2 * i) = -eta / nv;
        k.Bbar(2, 2 * i + 1) = xi / nv;
    }
    // Energy rows: constant traction of each basis strain against linear traces.
    for (int alpha = 3; alpha < 6; ++alpha) {
        const Eigen::Vector3d sigma = Dhat * k.strain_basis.col(alpha);
        for (int i = 0; i < nv; ++i) {
            const Vec2& a = poly[static_cast<std::size_t>(i)];
            const Vec2& b = poly[static_cast<std::size_t>((i + 1) % nv)];
            const double len = (b - a).norm();
            const Vec2 normal = Vec2((b - a).y(), -(b - a).x()) / len;
            const Vec2 traction(sigma(0) * normal.x() + sigma(2) * normal.y(),
                                sigma(2) * normal.x() + sigma(1) * normal.y());
            // Linear trace integrals: each endpoint hat carries len/2.
            for (int c = 0; c < 2; ++c) {
                k.Bbar(alpha, 2 * i + c) += 0.5 * len * traction(c);
                k.Bbar(alpha, 2 * ((i + 1) % nv) + c) += 0.5 * len * traction(c);
            }
        }
    }

    k.Dbar.resize(nd, 6);
    for (int i = 0; i < nv; ++i) {
        const double xi = (poly[static_cast<std::size_t>(i)].x() - k.centroid.x()) / k.h;
        const double eta = (poly[static_cast<std::size_t>(i)].y() - k.centroid.y()) / k.h;
        for (int alpha = 0; alpha < 6; ++alpha) {
            const Vec2 m = basis_value(alpha, xi, eta);
            k.Dbar(2 * i, alpha) = m.x();
            k.Dbar(2 * i + 1, alpha) = m.y();
        }
    }

    k.M = k.Bbar * k.Dbar;
    Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(k.M);
    if (!lu.isInvertible()) {
        throw DegenerateElementError("vector_projection: singular M on element " +
                                     std::to_string(element_id));
    }
    k.Pi_star = lu.solve(k.Bbar);
    k.Pi_nodal = k.Dbar * k.Pi_star;
    return k;
}

void elastic_stiffness(VectorElementKernel& kernel, double tau_h) {
    if (!(tau_h > 0.0)) throw ConfigError("elastic_stiffness: tau_h must be positive");
    Eigen::Matrix<double, 6, 6> M_energy = kernel.M;
    M_energy.topRows(3).setZero();
    M_energy.leftCols(3).setZero();
    kernel.Kc = kernel.Pi_star.transpose() * M_energy * kernel.Pi_star;
    const Eigen::MatrixXd R =
        Eigen::MatrixXd::Identity(2 * kernel.nv, 2 * kernel.nv) - kernel.Pi_nodal;
    kernel.Ks = tau_h * kernel.Kc.trace() * R.transpose() * R;
    kernel.K = kernel.Kc + kernel.Ks;
}

Eigen::VectorXd thermal_force(const VectorElementKernel& kernel,
                              const ScalarElementKernel& thermal_kernel,
                              const Eigen::VectorXd& nodal_temperature, double alpha,
                              double T_ref, const PolygonalMesh& mesh, int element_id) {
    if (nodal_temperature.size() != kernel.nv) {
        throw ConfigError("thermal_force: nodal temperature size mismatch");
    }
    const Polygon poly = mesh.element_polygon(element_id);
    const QuadratureRule rule = polygon_rule(poly, 2);
    Eigen::Matrix<double, 6, 1> load = Eigen::Matrix<double, 6, 1>::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double dT =
            thermal_kernel.project_value(nodal_temperature, rule.points[q]) - T_ref;
        const Eigen::Vector3d eps_t(alpha * dT, alpha * dT, 0.0);
        load += rule.weights[q] * (kernel.strain_basis.transpose() * (kernel.Dhat * eps_t));
    }
    return kernel.Pi_star.transpose() * load;
}

}  // namespace polyvem
