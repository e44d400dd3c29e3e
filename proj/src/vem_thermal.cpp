#include "polyvem/vem_thermal.hpp"

#include "polyvem/errors.hpp"
#include "polyvem/quadrature.hpp"

namespace polyvem {

double ScalarElementKernel::project_value(const Eigen::VectorXd& nodal, const Vec2& x) const {
    const Eigen::Vector3d c = Pi_star * nodal;
    return c(0) + c(1) * (x.x() - centroid.x()) / h + c(2) * (x.y() - centroid.y()) / h;
}

Vec2 ScalarElementKernel::project_gradient(const Eigen::VectorXd& nodal) const {
    const Eigen::Vector3d c = Pi_star * nodal;
    return Vec2(c(1) / h, c(2) / h);
}

ScalarElementKernel scalar_projection(const PolygonalMesh& mesh, int element_id,
                                      double conductivity) {
    if (!(conductivity > 0.0)) throw ConfigError("scalar_projection: conductivity must be > 0");
    const Polygon poly = mesh.element_polygon(element_id);
    const ElementGeometry geom = mesh.element_geometry(element_id);
    const int nv = static_cast<int>(poly.size());

    ScalarElementKernel k;
    k.nv = nv;
    k.area = geom.area;
    k.h = geom.diameter;
    k.centroid = geom.centroid;
    k.conductivity = conductivity;

    // Energy rows: grad p_2 = (1/h, 0), grad p_3 = (0, 1/h) are constants.
    k.G.setZero();
    k.G(1, 1) = conductivity * geom.area / (k.h * k.h);
    k.G(2, 2) = conductivity * geom.area / (k.h * k.h);
    // Constant row closed by the vertex average.
    for (int beta = 0; beta < 3; ++beta) {
        double avg = 0.0;
        for (const Vec2& v : poly) avg += scaled_monomial(beta, v, k.centroid, k.h);
        k.G(0, beta) = avg / nv;
    }

    k.B.resize(3, nv);
    k.B.setZero();
    for (int i = 0; i < nv; ++i) k.B(0, i) = 1.0 / nv;
    for (int i = 0; i < nv; ++i) {
        const Vec2& a = poly[static_cast<std::size_t>(i)];
        const Vec2& b = poly[static_cast<std::size_t>((i + 1) % nv)];
        const QuadratureRule edge = edge_rule(a, b, 2);
        const double len = (b - a).norm();
        const Vec2 normal = Vec2((b - a).y(), -(b - a).x()) / len;  // outward for CCW
        for (std::size_t q = 0; q < edge.points.size(); ++q) {
            const Vec2& x = edge.points[q];
            const double w = edge.weights[q];
            const double t = (x - a).norm() / len;  // linear trace parameter
            for (int alpha = 1; alpha < 3; ++alpha) {
                const Vec2 gp = scaled_monomial_gradient(alpha, x, k.centroid, k.h);
                const double flux = conductivity * gp.dot(normal);
                k.B(alpha, i) += w * (1.0 - t) * flux;
                k.B(alpha, (i + 1) % nv) += w * t * flux;
            }
        }
    }

    Eigen::FullPivLU<Eigen::Matrix3d> lu(k.G);
    if (!lu.isInvertible()) {
        throw DegenerateElementError("scalar_projection: singular G on element " +
                                     std::to_string(element_id));
    }
    k.Pi_star = lu.solve(k.B);

    Eigen::MatrixXd D(nv, 3);
    for (int i = 0; i < nv; ++i) {
        for (int beta = 0; beta < 3; ++beta) {
            D(i, beta) = scaled_monomial(beta, poly[static_cast<std::size_t>(i)], k.centroid, k.h);
        }
    }
    k.Pi_nodal = D * k.Pi_star;
    return k;
}

void thermal_stiffness(ScalarElementKernel& kernel, double tau_h) {
    if (!(tau_h > 0.0)) throw ConfigError("thermal_stiffness: tau_h must be positive");
    Eigen::Matrix3d G_energy = kernel.G;
    G_energy.row(0).setZero();
    kernel.Kc = kernel.Pi_star.transpose() * G_energy * kernel.Pi_star;
    const Eigen::MatrixXd R =
        Eigen::MatrixXd::Identity(kernel.nv, kernel.nv) - kernel.Pi_nodal;
    kernel.Ks = tau_h * kernel.Kc.trace() * R.transpose() * R;
    kernel.K = kernel.Kc + kernel.Ks;
}

}  // namespace polyvem
