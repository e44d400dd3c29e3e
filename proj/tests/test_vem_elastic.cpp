#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "oracles.hpp"
#include "polyvem/vem_elastic.hpp"

using namespace polyvem;

namespace {

PolygonalMesh single_element_mesh(const Polygon& poly) {
    PolygonalMesh mesh;
    mesh.nodes = poly;
    Element e;
    for (int i = 0; i < static_cast<int>(poly.size()); ++i) e.vertices.push_back(i);
    e.region = "r";
    mesh.elements.push_back(e);
    return mesh;
}

Eigen::VectorXd sample_field(const Polygon& poly,
                             const std::function<Vec2(const Vec2&)>& field) {
    Eigen::VectorXd v(2 * static_cast<int>(poly.size()));
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 u = field(poly[i]);
        v(2 * static_cast<int>(i)) = u.x();
        v(2 * static_cast<int>(i) + 1) = u.y();
    }
    return v;
}

}  // namespace

TEST_CASE("elasticity matrix") {
    SUBCASE("nu = 0 decouples both modes") {
        const Material m{1.0, 0.0, 0.0, 1.0};
        for (const PlaneMode mode : {PlaneMode::plane_stress, PlaneMode::plane_strain}) {
            const Eigen::Matrix3d D = elasticity_matrix(m, mode);
            CHECK(D(0, 0) == doctest::Approx(1.0));
            CHECK(D(1, 1) == doctest::Approx(1.0));
            CHECK(D(2, 2) == doctest::Approx(0.5));
            CHECK(D(0, 1) == doctest::Approx(0.0));
        }
    }
    SUBCASE("plane stress matches E/(1-nu^2)") {
        const Material m{460000.0, 0.3, 0.0, 1.0};
        const Eigen::Matrix3d D = elasticity_matrix(m, PlaneMode::plane_stress);
        CHECK(D(0, 0) == doctest::Approx(460000.0 / (1.0 - 0.09)).epsilon(1e-12));
        CHECK(D(0, 0) == doctest::Approx(505494.505494506).epsilon(1e-9));
    }
    SUBCASE("modes differ for nonzero nu") {
        const Material m{1000.0, 0.3, 0.0, 1.0};
        const Eigen::Matrix3d a = elasticity_matrix(m, PlaneMode::plane_stress);
        const Eigen::Matrix3d b = elasticity_matrix(m, PlaneMode::plane_strain);
        CHECK((a - b).norm() > 1.0);
    }
    SUBCASE("incompressible limit is rejected") {
        const Material m{1000.0, 0.5, 0.0, 1.0};
        CHECK_THROWS_AS(elasticity_matrix(m, PlaneMode::plane_strain), ConfigError);
    }
}

TEST_CASE("vector projection reproduces linear displacement fields") {
    std::mt19937_64 rng(41);
    const Eigen::Matrix3d D = elasticity_matrix(Material{200.0, 0.3, 0.0, 1.0},
                                                PlaneMode::plane_stress);
    for (int trial = 0; trial < 5; ++trial) {
        const Polygon poly = oracles::random_convex_polygon(rng, 4 + trial);
        const PolygonalMesh mesh = single_element_mesh(poly);
        const VectorElementKernel k = vector_projection(mesh, 0, D);
        const Eigen::VectorXd v = sample_field(poly, [](const Vec2& p) {
            return Vec2(0.1 + 0.2 * p.x() - 0.3 * p.y(), -0.4 + 0.5 * p.x() + 0.6 * p.y());
        });
        CHECK((v - k.Pi_nodal * v).norm() <= 1e-12 * v.norm());
        const Eigen::Vector3d strain = k.project_strain(v);
        CHECK(strain(0) == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(strain(1) == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(strain(2) == doctest::Approx(-0.3 + 0.5).epsilon(1e-10));
    }
}

TEST_CASE("rigid rotation has zero projected strain") {
    const Polygon poly = {{0, 0}, {2, 0}, {2, 1}, {1, 2}, {0, 1}};
    const PolygonalMesh mesh = single_element_mesh(poly);
    const Eigen::Matrix3d D =
        elasticity_matrix(Material{100.0, 0.25, 0.0, 1.0}, PlaneMode::plane_stress);
    const VectorElementKernel k = vector_projection(mesh, 0, D);
    const Eigen::VectorXd rot =
        sample_field(poly, [](const Vec2& p) { return Vec2(-p.y(), p.x()); });
    CHECK(k.project_strain(rot).norm() <= 1e-12);
}

TEST_CASE("M energy block matches the strain Gram of the basis") {
    std::mt19937_64 rng(55);
    const Polygon poly = oracles::random_convex_polygon(rng, 6);
    const PolygonalMesh mesh = single_element_mesh(poly);
    const Eigen::Matrix3d D =
        elasticity_matrix(Material{350.0, 0.2, 0.0, 1.0}, PlaneMode::plane_strain);
    const VectorElementKernel k = vector_projection(mesh, 0, D);
    // Energy rows a(m_a, m_b) = |E| eps_a^T D eps_b for constant strains,
    // with |E| from the divergence-theorem oracle.
    const double area = oracles::polygon_monomial_integral(poly, 0, 0);
    for (int a = 3; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            const double expected =
                area * k.strain_basis.col(a).dot(D * k.strain_basis.col(b));
            CHECK(k.M(a, b) == doctest::Approx(expected).epsilon(1e-11));
        }
    }
    // Constraint rows evaluate the vertex-average functionals on the basis.
    for (int b = 0; b < 6; ++b) {
        double tx = 0.0, ty = 0.0, rotm = 0.0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const double xi = (poly[i].x() - k.centroid.x()) / k.h;
            const double eta = (poly[i].y() - k.centroid.y()) / k.h;
            const Vec2 mb = [&]() -> Vec2 {
                switch (b) {
                    case 0: return {1.0, 0.0};
                    case 1: return {0.0, 1.0};
                    case 2: return {-eta, xi};
                    case 3: return {eta, xi};
                    case 4: return {xi, 0.0};
                    default: return {0.0, eta};
                }
            }();
            tx += mb.x();
            ty += mb.y();
            rotm += -eta * mb.x() + xi * mb.y();
        }
        const double nv = static_cast<double>(poly.size());
        CHECK(k.M(0, b) == doctest::Approx(tx / nv).epsilon(1e-12));
        CHECK(k.M(1, b) == doctest::Approx(ty / nv).epsilon(1e-12));
        CHECK(k.M(2, b) == doctest::Approx(rotm / nv).epsilon(1e-12));
    }
}

TEST_CASE("triangle elastic stiffness equals CST") {
    std::mt19937_64 rng(61);
    const Eigen::Matrix3d D =
        elasticity_matrix(Material{70000.0, 0.33, 0.0, 1.0}, PlaneMode::plane_stress);
    for (int trial = 0; trial < 10; ++trial) {
        const Polygon tri = oracles::random_convex_polygon(rng, 3);
        const PolygonalMesh mesh = single_element_mesh(tri);
        VectorElementKernel k = vector_projection(mesh, 0, D);
        elastic_stiffness(k, 0.5);
        const Eigen::MatrixXd ref = oracles::cst_stiffness(tri, D);
        CHECK((k.K - ref).norm() <= 1e-12 * ref.norm());
        CHECK(k.Ks.norm() <= 1e-12 * k.Kc.norm());
    }
}

TEST_CASE("stiffness annihilates rigid modes and has rank 2nv - 3") {
    std::mt19937_64 rng(71);
    const Eigen::Matrix3d D =
        elasticity_matrix(Material{1000.0, 0.3, 0.0, 1.0}, PlaneMode::plane_stress);
    const Polygon poly = oracles::random_convex_polygon(rng, 9);
    const PolygonalMesh mesh = single_element_mesh(poly);
    VectorElementKernel k = vector_projection(mesh, 0, D);
    elastic_stiffness(k, 0.5);
    const Eigen::VectorXd tx = sample_field(poly, [](const Vec2&) { return Vec2(1, 0); });
    const Eigen::VectorXd ty = sample_field(poly, [](const Vec2&) { return Vec2(0, 1); });
    const Eigen::VectorXd rot =
        sample_field(poly, [](const Vec2& p) { return Vec2(-p.y(), p.x()); });
    const double kn = k.K.norm();
    CHECK((k.K * tx).norm() <= 1e-10 * kn * tx.norm());
    CHECK((k.K * ty).norm() <= 1e-10 * kn * ty.norm());
    CHECK((k.K * rot).norm() <= 1e-10 * kn * rot.norm());
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(k.K);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > 1e-10 * svd.singularValues()(0)) ++rank;
    }
    CHECK(rank == 2 * 9 - 3);
}

TEST_CASE("unit square energy consistency on a linear field") {
    const Polygon poly = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const PolygonalMesh mesh = single_element_mesh(poly);
    const Eigen::Matrix3d D =
        elasticity_matrix(Material{500.0, 0.2, 0.0, 1.0}, PlaneMode::plane_stress);
    VectorElementKernel k = vector_projection(mesh, 0, D);
    elastic_stiffness(k, 0.5);
    const Eigen::Vector3d eps(0.2, -0.1, 0.15);
    const Eigen::VectorXd v = sample_field(poly, [&](const Vec2& p) {
        return Vec2(eps(0) * p.x() + 0.5 * eps(2) * p.y(),
                    0.5 * eps(2) * p.x() + eps(1) * p.y());
    });
    CHECK(v.dot(k.K * v) == doctest::Approx(eps.dot(D * eps)).epsilon(1e-12));
}

TEST_CASE("Young's modulus scaling is exact for power-of-two factors") {
    const Polygon poly = {{0, 0}, {2, 0}, {2, 1}, {1, 2}, {0, 1}};
    const PolygonalMesh mesh = single_element_mesh(poly);
    const Material m1{250.0, 0.3, 0.0, 1.0};
    const Material m4{1000.0, 0.3, 0.0, 1.0};
    VectorElementKernel k1 =
        vector_projection(mesh, 0, elasticity_matrix(m1, PlaneMode::plane_stress));
    VectorElementKernel k4 =
        vector_projection(mesh, 0, elasticity_matrix(m4, PlaneMode::plane_stress));
    elastic_stiffness(k1, 0.5);
    elastic_stiffness(k4, 0.5);
    CHECK((k4.K - 4.0 * k1.K).norm() == 0.0);
}

TEST_CASE("thermal force: zero dT gives zero load, arbitrary dT is balanced") {
    std::mt19937_64 rng(81);
    const Eigen::Matrix3d D =
        elasticity_matrix(Material{460000.0, 0.3, 7.4e-6, 20.0}, PlaneMode::plane_stress);
    for (int trial = 0; trial < 6; ++trial) {
        const Polygon poly = oracles::random_convex_polygon(rng, 4 + trial);
        const int nv = static_cast<int>(poly.size());
        const PolygonalMesh mesh = single_element_mesh(poly);
        const VectorElementKernel k = vector_projection(mesh, 0, D);
        const ScalarElementKernel ks = scalar_projection(mesh, 0, 20.0);

        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(nv);
        CHECK(thermal_force(k, ks, zero, 7.4e-6, 0.0, mesh, 0).norm() <= 1e-14);

        Eigen::VectorXd T(nv);
        for (int i = 0; i < nv; ++i) {
            T(i) = 100.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        }
        const Eigen::VectorXd F = thermal_force(k, ks, T, 7.4e-6, 0.0, mesh, 0);
        double fx = 0.0, fy = 0.0, mz = 0.0;
        for (int i = 0; i < nv; ++i) {
            fx += F(2 * i);
            fy += F(2 * i + 1);
            mz += (poly[static_cast<std::size_t>(i)].x() - k.centroid.x()) * F(2 * i + 1) -
                  (poly[static_cast<std::size_t>(i)].y() - k.centroid.y()) * F(2 * i);
        }
        const double scale = F.norm() * k.h;
        CHECK(std::abs(fx) <= 1e-10 * scale);
        CHECK(std::abs(fy) <= 1e-10 * scale);
        CHECK(std::abs(mz) <= 1e-10 * scale);
    }
}
