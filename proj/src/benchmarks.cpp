#include "polyvem/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "polyvem/errors.hpp"

namespace polyvem {

CylinderExact cylinder_exact(double r, const CylinderParams& p) {
    if (r < p.r_a - 1e-12 * p.r_b || r > p.r_b + 1e-12 * p.r_b) {
        throw InvalidDomainError("cylinder_exact: radius outside the annulus");
    }
    const double a = p.r_a, b = p.r_b;
    const double E = p.material.E, nu = p.material.nu, alpha = p.material.alpha;
    const double Ta = p.T_a, Tb = p.T_b;
    const double logba = std::log(b / a);

    const double D = alpha * (1.0 + nu) * (Tb - Ta) / (2.0 * logba);
    const double d1 = 1.0 + nu;
    const double d2 = (nu - 1.0) / (a * a);
    const double d3 = 1.0 + nu;
    const double d4 = (nu - 1.0) / (b * b);
    const double d5 = -D * (std::log(a) + 1.0 + nu * std::log(a)) + alpha * (1.0 + nu) * Ta;
    const double d6 = -D * (std::log(b) + 1.0 + nu * std::log(b)) + alpha * (1.0 + nu) * Tb;
    const double det = d1 * d4 - d2 * d3;
    const double B1 = (d4 * d5 - d2 * d6) / det;
    const double B2 = (d1 * d6 - d3 * d5) / det;

    CylinderExact out;
    out.T = Ta + (Tb - Ta) / logba * std::log(r / a);
    out.u_r = B1 * r + B2 / r + D * r * std::log(r);
    const double f = E / (1.0 - nu * nu);
    out.sigma_r = f * (B1 * (1.0 + nu) + B2 * (nu - 1.0) / (r * r) +
                       D * (std::log(r) * (1.0 + nu) + 1.0) - alpha * (1.0 + nu) * out.T);
    out.sigma_theta = f * (B1 * (1.0 + nu) + B2 * (1.0 - nu) / (r * r) +
                           D * (std::log(r) * (1.0 + nu) + nu) - alpha * (1.0 + nu) * out.T);
    return out;
}

namespace {

void rename_tag(PolygonalMesh& mesh, const std::string& from, const std::string& to) {
    auto node = mesh.boundary_edges.extract(from);
    if (!node.empty()) {
        node.key() = to;
        mesh.boundary_edges.insert(std::move(node));
    }
}

}  // namespace

PolygonalMesh make_quarter_annulus_mesh(const CylinderParams& p, int nr, int ntheta) {
    PolygonalMesh mesh = generate_mapped_quad_mesh(
        nr, ntheta,
        [&](double u, double v) {
            const double r = p.r_a + u * (p.r_b - p.r_a);
            const double theta = v * M_PI / 2.0;
            return Vec2(r * std::cos(theta), r * std::sin(theta));
        },
        "cylinder");
    rename_tag(mesh, "left", "inner");
    rename_tag(mesh, "right", "outer");
    rename_tag(mesh, "bottom", "cut_y0");
    rename_tag(mesh, "top", "cut_x0");
    return mesh;
}

PolygonalMesh make_quarter_annulus_polygonal_mesh(const CylinderParams& p, int n_seeds,
                                                  std::uint64_t seed) {
    // Polygonized quarter annulus: outer arc, the two straight cuts, inner arc.
    const int segs = 96;
    Polygon outer;
    for (int i = 0; i <= segs; ++i) {
        const double t = M_PI / 2.0 * i / segs;
        outer.emplace_back(p.r_b * std::cos(t), p.r_b * std::sin(t));
    }
    for (int i = segs; i >= 0; --i) {
        const double t = M_PI / 2.0 * i / segs;
        outer.emplace_back(p.r_a * std::cos(t), p.r_a * std::sin(t));
    }
    PolygonalMesh mesh = generate_polygonal_mesh({outer, {}}, n_seeds, 40, seed, "cylinder");
    const double eps = 1e-6 * p.r_b;
    retag_boundary_edges(mesh, "cut_y0", [eps](const Vec2& a, const Vec2& b) {
        return std::abs(a.y()) < eps && std::abs(b.y()) < eps;
    });
    retag_boundary_edges(mesh, "cut_x0", [eps](const Vec2& a, const Vec2& b) {
        return std::abs(a.x()) < eps && std::abs(b.x()) < eps;
    });
    const double r_mid = 0.5 * (p.r_a + p.r_b);
    retag_boundary_edges(mesh, "inner", [&](const Vec2& a, const Vec2& b) {
        return a.norm() < r_mid && b.norm() < r_mid;
    });
    rename_tag(mesh, "boundary", "outer");
    return mesh;
}

CylinderReport run_cylinder_benchmark(const PolygonalMesh& mesh, Method method,
                                      const CylinderParams& p) {
    MaterialMap materials{{"cylinder", p.material}};
    SolverParams params;
    params.method = method;
    params.mode = PlaneMode::plane_stress;
    params.T_ref = 0.0;

    std::vector<BoundaryCondition> thermal_bcs = {
        {BoundaryCondition::Kind::dirichlet, FieldKind::thermal, "inner", {p.T_a, 0.0}, {}},
        {BoundaryCondition::Kind::dirichlet, FieldKind::thermal, "outer", {p.T_b, 0.0}, {}},
    };
    std::vector<BoundaryCondition> mech_bcs = {
        {BoundaryCondition::Kind::dirichlet, FieldKind::mechanical, "cut_y0", {0.0, 0.0},
         {false, true}},
        {BoundaryCondition::Kind::dirichlet, FieldKind::mechanical, "cut_x0", {0.0, 0.0},
         {true, false}},
    };
    auto [T, u] = solve_thermomechanical(mesh, materials, thermal_bcs, mech_bcs, params);
    const StressField stress =
        recover_stress(mesh, materials, params.mode, u, &T, params.T_ref);

    // Interior nodes: off the traction-free arcs where sigma_r vanishes.
    std::set<int> arc_nodes;
    for (const char* tag : {"inner", "outer"}) {
        for (int v : mesh.boundary_nodes(tag)) arc_nodes.insert(v);
    }
    std::vector<double> sr_num, sr_exact, st_num, st_exact, t_num, t_exact;
    for (int v = 0; v < mesh.num_nodes(); ++v) {
        const Vec2& x = mesh.nodes[static_cast<std::size_t>(v)];
        const double r = x.norm();
        const CylinderExact exact = cylinder_exact(std::clamp(r, p.r_a, p.r_b), p);
        t_num.push_back(T.nodal(v));
        t_exact.push_back(exact.T);
        if (arc_nodes.count(v)) continue;
        const double c = x.x() / r, s = x.y() / r;
        const Eigen::Vector3d& sig = stress.per_node_averaged[static_cast<std::size_t>(v)];
        sr_num.push_back(c * c * sig(0) + s * s * sig(1) + 2.0 * c * s * sig(2));
        sr_exact.push_back(exact.sigma_r);
        st_num.push_back(s * s * sig(0) + c * c * sig(1) - 2.0 * c * s * sig(2));
        st_exact.push_back(exact.sigma_theta);
    }
    CylinderReport report;
    report.nodes = mesh.num_nodes();
    report.elements = mesh.num_elements();
    const ErrorStats er = error_eav(sr_num, sr_exact);
    const ErrorStats et = error_eav(st_num, st_exact);
    report.e_av_r = er.value;
    report.e_av_theta = et.value;
    report.excluded_r = er.excluded;
    report.excluded_theta = et.excluded;
    report.rms_temperature = error_rms(t_num, t_exact);
    std::vector<double> s_num = sr_num, s_exact = sr_exact;
    s_num.insert(s_num.end(), st_num.begin(), st_num.end());
    s_exact.insert(s_exact.end(), st_exact.begin(), st_exact.end());
    report.rms_stress = error_rms(s_num, s_exact);
    return report;
}

namespace {

double fit_slope(const std::vector<int>& ndof, const std::vector<double>& err) {
    const std::size_t n = ndof.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log10(static_cast<double>(ndof[i]));
        const double y = std::log10(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dn = static_cast<double>(n);
    return -(dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace

ConvergenceReport run_convergence(Method method, const std::vector<std::pair<int, int>>& levels,
                                  const CylinderParams& p) {
    if (levels.size() < 4) throw ConfigError("run_convergence: need at least 4 levels");
    ConvergenceReport report;
    for (const auto& [nr, ntheta] : levels) {
        const PolygonalMesh mesh = make_quarter_annulus_mesh(p, nr, ntheta);
        const CylinderReport r = run_cylinder_benchmark(mesh, method, p);
        report.ndof_temperature.push_back(r.nodes);
        report.ndof_displacement.push_back(2 * r.nodes);
        report.rms_temperature.push_back(r.rms_temperature);
        report.rms_stress.push_back(r.rms_stress);
    }
    for (std::size_t i = 1; i < report.rms_temperature.size(); ++i) {
        if (report.rms_temperature[i] > report.rms_temperature[i - 1] ||
            report.rms_stress[i] > report.rms_stress[i - 1]) {
            report.monotone = false;
        }
    }
    report.slope_temperature = fit_slope(report.ndof_temperature, report.rms_temperature);
    report.slope_stress = fit_slope(report.ndof_displacement, report.rms_stress);
    return report;
}

BimaterialReport run_bimaterial_demo(Method method, int si_seeds, std::uint64_t seed) {
    // Geometry in mm: Si strip 0.15 x 0.25 with a 0.01-wide Cu channel from
    // the top surface down to depth 0.1.
    const double W = 0.150, H = 0.250;
    const double cx0 = 0.070, cx1 = 0.080, cy0 = 0.150;
    const double eps = 1e-7;

    PolygonalMesh cu = generate_quad_mesh(cx0, cx1, cy0, H, 2, 20, "cu");
    retag_boundary_edges(cu, "iface", [&](const Vec2& a, const Vec2& b) {
        const Vec2 m = 0.5 * (a + b);
        return m.y() < H - eps;  // left, right and bottom of the channel
    });

    const Polygon si_outline = {
        {0.0, 0.0}, {W, 0.0},     {W, H},       {cx1, H},
        {cx1, cy0}, {cx0, cy0},   {cx0, H},     {0.0, H},
    };
    PolygonalMesh si = generate_polygonal_mesh({si_outline, {}}, si_seeds, 40, seed, "si");
    retag_boundary_edges(si, "iface", [&](const Vec2& a, const Vec2& b) {
        const Vec2 m = 0.5 * (a + b);
        const bool on_channel_wall =
            (std::abs(m.x() - cx0) < eps || std::abs(m.x() - cx1) < eps) && m.y() > cy0 - eps;
        const bool on_channel_floor =
            std::abs(m.y() - cy0) < eps && m.x() > cx0 - eps && m.x() < cx1 + eps;
        return on_channel_wall || on_channel_floor;
    });
    retag_boundary_edges(si, "top_si", [&](const Vec2& a, const Vec2& b) {
        const Vec2 m = 0.5 * (a + b);
        return std::abs(m.y() - H) < eps;
    });
    retag_boundary_edges(si, "bottom", [&](const Vec2& a, const Vec2& b) {
        return std::abs(0.5 * (a.y() + b.y())) < eps;
    });

    const double tol = 1e-9 * std::max(W, H);
    BimaterialReport report;
    report.mesh = merge_nonmatching_interface(si, cu, "iface", "iface", tol);

    MaterialMap materials{
        {"cu", Material{155000.0, 0.3, 17e-6, 397.0}},
        {"si", Material{140000.0, 0.25, 2.8e-6, 149.0}},
    };
    SolverParams params;
    params.method = method;
    params.mode = PlaneMode::plane_stress;
    params.T_ref = 25.0;

    std::vector<BoundaryCondition> thermal_bcs = {
        {BoundaryCondition::Kind::dirichlet, FieldKind::thermal, "top_si", {125.0, 0.0}, {}},
        {BoundaryCondition::Kind::dirichlet, FieldKind::thermal, "top", {125.0, 0.0}, {}},
        {BoundaryCondition::Kind::dirichlet, FieldKind::thermal, "bottom", {25.0, 0.0}, {}},
    };
    std::vector<BoundaryCondition> mech_bcs = {
        {BoundaryCondition::Kind::dirichlet, FieldKind::mechanical, "bottom", {0.0, 0.0},
         {true, true}},
    };
    auto [T, u] =
        solve_thermomechanical(report.mesh, materials, thermal_bcs, mech_bcs, params);
    report.stress = recover_stress(report.mesh, materials, params.mode, u, &T, params.T_ref);

    // Steady-state conservation: reactions at the hot top against the cold
    // bottom.
    const AssembledSystem sys = assemble(report.mesh, materials, method, FieldKind::thermal,
                                         params, thermal_bcs);
    const Eigen::VectorXd r = reactions(sys, T.nodal);
    double q_top = 0.0, q_bottom = 0.0;
    std::set<int> top_nodes, bottom_nodes;
    for (const char* tag : {"top_si", "top"}) {
        for (int v : report.mesh.boundary_nodes(tag)) top_nodes.insert(v);
    }
    for (int v : report.mesh.boundary_nodes("bottom")) bottom_nodes.insert(v);
    for (int v : top_nodes) q_top += r(v);
    for (int v : bottom_nodes) q_bottom += r(v);
    report.heat_in = q_top;
    report.heat_out = q_bottom;
    report.conservation_error = std::abs(q_top + q_bottom) / std::abs(q_top);
    report.t_min = T.nodal.minCoeff();
    report.t_max = T.nodal.maxCoeff();

    const std::vector<Vec2> interface_path = {
        {cx0, H}, {cx0, cy0}, {cx1, cy0}, {cx1, H}};
    report.interface_profile =
        extract_line(report.mesh, materials, params.mode, &T, &u, &report.stress,
                     LineField::von_mises, interface_path, 121);
    report.temperature = std::move(T);
    report.displacement = std::move(u);
    return report;
}

namespace {

// Point on a CCW polygon boundary hit by a ray from `center` at angle theta.
Vec2 ray_polygon_point(const Polygon& poly, const Vec2& center, double theta) {
    const Vec2 dir(std::cos(theta), std::sin(theta));
    double best = -1.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        const Vec2 e = b - a;
        const double den = dir.x() * (-e.y()) - dir.y() * (-e.x());
        if (std::abs(den) < 1e-300) continue;
        const double t = ((a.x() - center.x()) * (-e.y()) - (a.y() - center.y()) * (-e.x())) / den;
        const double s = (dir.x() * (a.y() - center.y()) - dir.y() * (a.x() - center.x())) / den;
        if (t > 0.0 && s >= -1e-12 && s <= 1.0 + 1e-12) best = std::max(best, t);
    }
    if (best < 0.0) throw InvalidDomainError("ray_polygon_point: ray misses the polygon");
    return center + best * dir;
}

// Remove a welded seam: coincident nodes are merged and the two seam tags
// dropped.
PolygonalMesh weld_seam(const PolygonalMesh& mesh, const std::string& tag_a,
                        const std::string& tag_b, double tol) {
    PolygonalMesh out = mesh;
    out.boundary_edges.erase(tag_a);
    out.boundary_edges.erase(tag_b);
    const std::vector<int> remap = dedup_points(out.nodes, tol);
    for (Element& e : out.elements) {
        for (int& v : e.vertices) v = remap[static_cast<std::size_t>(v)];
    }
    for (auto& [tag, edges] : out.boundary_edges) {
        for (auto& e : edges) {
            e[0] = remap[static_cast<std::size_t>(e[0])];
            e[1] = remap[static_cast<std::size_t>(e[1])];
        }
    }
    out.validate();
    return out;
}

}  // namespace

RotationReport run_rotation_study(Method method, const std::vector<double>& angles_deg) {
    const Vec2 center(0.5, 0.5);
    const double radius = 0.1;
    const int ring_segments = 48;  // divisible by 12: 30/60/90 degree turns map
                                   // the interface polygon onto itself
    Polygon ring;
    for (int i = 0; i < ring_segments; ++i) {
        const double t = 2.0 * M_PI * i / ring_segments;
        ring.emplace_back(center.x() + radius * std::cos(t), center.y() + radius * std::sin(t));
    }
    PolygonalMesh cu = generate_polygonal_mesh({ring, {}}, 140, 40, 11, "cu");
    rename_tag(cu, "boundary", "iface_cu");

    const Polygon square = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    PolygonalMesh shell = generate_mapped_quad_mesh(
        8, 64,
        [&](double u, double v) {
            const double theta = 2.0 * M_PI * v;
            const Vec2 inner = ray_polygon_point(ring, center, theta);
            const Vec2 outer = ray_polygon_point(square, center, theta);
            return Vec2(inner + u * (outer - inner));
        },
        "sio2");
    shell = weld_seam(shell, "bottom", "top", 1e-9);
    rename_tag(shell, "left", "iface_outer");
    const double eps = 1e-7;
    retag_boundary_edges(shell, "bottom", [&](const Vec2& a, const Vec2& b) {
        return a.y() < eps && b.y() < eps;
    });
    retag_boundary_edges(shell, "top", [&](const Vec2& a, const Vec2& b) {
        return a.y() > 1.0 - eps && b.y() > 1.0 - eps;
    });
    retag_boundary_edges(shell, "side", [&](const Vec2& a, const Vec2& b) {
        const Vec2 m = 0.5 * (a + b);
        return (m.x() < eps || m.x() > 1.0 - eps) && !(m.y() < eps || m.y() > 1.0 - eps);
    });
    rename_tag(shell, "right", "side");

    const double tol = 1e-9;
    const PolygonalMesh base =
        merge_nonmatching_interface(shell, cu, "iface_outer", "iface_cu", tol);

    MaterialMap materials{
        {"cu", Material{150000.0, 0.3, 17e-6, 397.0}},
        {"sio2", Material{75000.0, 0.17, 0.5e-6, 1.4}},
    };
    SolverParams params;
    params.method = method;
    params.mode = PlaneMode::plane_stress;

    std::vector<BoundaryCondition> mech_bcs = {
        {BoundaryCondition::Kind::dirichlet, FieldKind::mechanical, "bottom", {0.0, 0.0},
         {true, true}},
        {BoundaryCondition::Kind::neumann, FieldKind::mechanical, "top", {0.0, 2.0}, {}},
    };

    RotationReport report;
    const int n_arc = 91;
    for (int i = 0; i < n_arc; ++i) {
        report.arc_positions.push_back(M_PI * i / (n_arc - 1));
    }
    for (double deg : angles_deg) {
        const PolygonalMesh mesh =
            rotate_region_mesh(base, "cu", deg * M_PI / 180.0, center);
        const FieldSolution u = solve_elastic(mesh, materials, mech_bcs, params);
        const StressField stress =
            recover_stress(mesh, materials, params.mode, u, nullptr, 0.0);
        std::vector<double> profile;
        const double r_probe = radius * 1.05;  // just outside the ring, SiO2 side
        for (double theta : report.arc_positions) {
            const Vec2 pt(center.x() + r_probe * std::cos(theta),
                          center.y() + r_probe * std::sin(theta));
            const SampledLine sample =
                extract_line(mesh, materials, params.mode, nullptr, &u, &stress,
                             LineField::von_mises, {pt, pt + Vec2(1e-6, 0.0)}, 2);
            profile.push_back(sample.value.front());
        }
        report.angles_deg.push_back(deg);
        report.element_counts.push_back(mesh.num_elements());
        report.profiles.push_back(std::move(profile));
    }
    double peak = 0.0;
    for (double v : report.profiles.front()) peak = std::max(peak, std::abs(v));
    for (std::size_t a = 0; a < report.profiles.size(); ++a) {
        for (std::size_t b = a + 1; b < report.profiles.size(); ++b) {
            for (std::size_t i = 0; i < report.arc_positions.size(); ++i) {
                report.max_pairwise_deviation =
                    std::max(report.max_pairwise_deviation,
                             std::abs(report.profiles[a][i] - report.profiles[b][i]) / peak);
            }
        }
    }
    return report;
}

PolygonalMesh make_patch_quad_mesh() {
    return generate_quad_mesh(0.0, 1.0, 0.0, 1.0, 5, 5, "patch");
}

PolygonalMesh make_patch_voronoi_mesh(int n_seeds, std::uint64_t seed) {
    const Polygon square = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    return generate_polygonal_mesh({square, {}}, n_seeds, 25, seed, "patch");
}

PolygonalMesh make_patch_lshape_mesh() {
    // Vertical arm [0,1]x[1,3] (quad), corner [0,1]^2 (Voronoi), horizontal
    // arm [1,3]x[0,1] (quad), joined by two non-matching merges.
    PolygonalMesh arm_a = generate_quad_mesh(0.0, 1.0, 1.0, 3.0, 4, 8, "patch");
    PolygonalMesh arm_c = generate_quad_mesh(1.0, 3.0, 0.0, 1.0, 10, 5, "patch");
    const Polygon square = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    PolygonalMesh corner = generate_polygonal_mesh({square, {}}, 80, 25, 3, "patch");
    const double eps = 1e-7;
    retag_boundary_edges(corner, "to_a", [&](const Vec2& a, const Vec2& b) {
        return a.y() > 1.0 - eps && b.y() > 1.0 - eps;
    });
    retag_boundary_edges(corner, "to_c", [&](const Vec2& a, const Vec2& b) {
        return a.x() > 1.0 - eps && b.x() > 1.0 - eps;
    });
    PolygonalMesh merged =
        merge_nonmatching_interface(corner, arm_a, "to_a", "bottom", 1e-9 * 3.0);
    merged = merge_nonmatching_interface(merged, arm_c, "to_c", "left", 1e-9 * 3.0);
    return merged;
}

PatchResult run_patch_test(const PolygonalMesh& mesh, Method method) {
    MaterialMap materials;
    std::set<std::string> regions;
    for (const Element& e : mesh.elements) regions.insert(e.region);
    for (const std::string& r : regions) materials[r] = Material{200000.0, 0.3, 1e-5, 50.0};

    SolverParams params;
    params.method = method;
    params.mode = PlaneMode::plane_stress;

    // Every boundary node is constrained to the exact linear field.
    std::set<int> boundary;
    for (const auto& [tag, edges] : mesh.boundary_edges) {
        for (const auto& e : edges) {
            boundary.insert(e[0]);
            boundary.insert(e[1]);
        }
    }
    PatchResult result;

    // Thermal patch: T = 2 + 3x - 4y.
    auto t_exact = [](const Vec2& p) { return 2.0 + 3.0 * p.x() - 4.0 * p.y(); };
    {
        const AssembledSystem sys =
            assemble(mesh, materials, method, FieldKind::thermal, params, {});
        std::map<int, double> fixed;
        for (int v : boundary) fixed[v] = t_exact(mesh.nodes[static_cast<std::size_t>(v)]);
        const Eigen::VectorXd T = solve_with_dirichlet(sys, fixed, params.tol);
        double scale = 0.0;
        for (int v = 0; v < mesh.num_nodes(); ++v) {
            scale = std::max(scale, std::abs(t_exact(mesh.nodes[static_cast<std::size_t>(v)])));
        }
        for (int v = 0; v < mesh.num_nodes(); ++v) {
            const double err =
                std::abs(T(v) - t_exact(mesh.nodes[static_cast<std::size_t>(v)])) / scale;
            result.max_nodal_error_temperature =
                std::max(result.max_nodal_error_temperature, err);
        }
    }

    // Mechanical patch: u = (1e-3 + 2e-3 x + 1e-3 y, -5e-4 + 4e-4 x - 2e-3 y).
    auto u_exact = [](const Vec2& p) {
        return Vec2(1e-3 + 2e-3 * p.x() + 1e-3 * p.y(), -5e-4 + 4e-4 * p.x() - 2e-3 * p.y());
    };
    const Eigen::Vector3d strain_exact(2e-3, -2e-3, 1e-3 + 4e-4);
    const Eigen::Vector3d sigma_exact =
        elasticity_matrix(materials.begin()->second, params.mode) * strain_exact;
    {
        const AssembledSystem sys =
            assemble(mesh, materials, method, FieldKind::mechanical, params, {});
        std::map<int, double> fixed;
        for (int v : boundary) {
            const Vec2 u = u_exact(mesh.nodes[static_cast<std::size_t>(v)]);
            fixed[2 * v] = u.x();
            fixed[2 * v + 1] = u.y();
        }
        const Eigen::VectorXd U = solve_with_dirichlet(sys, fixed, params.tol);
        double scale = 0.0;
        for (int v = 0; v < mesh.num_nodes(); ++v) {
            scale = std::max(scale, u_exact(mesh.nodes[static_cast<std::size_t>(v)]).norm());
        }
        for (int v = 0; v < mesh.num_nodes(); ++v) {
            const Vec2 ue = u_exact(mesh.nodes[static_cast<std::size_t>(v)]);
            const double err = std::hypot(U(2 * v) - ue.x(), U(2 * v + 1) - ue.y()) / scale;
            result.max_nodal_error_displacement =
                std::max(result.max_nodal_error_displacement, err);
        }
        const FieldSolution sol = make_field_solution(mesh, materials, params,
                                                      FieldSolution::Kind::displacement, U);
        const StressField stress =
            recover_stress(mesh, materials, params.mode, sol, nullptr, 0.0);
        for (const Eigen::Vector3d& sigma : stress.per_element) {
            result.max_stress_error = std::max(
                result.max_stress_error, (sigma - sigma_exact).norm() / sigma_exact.norm());
        }
    }
    return result;
}

}  // namespace polyvem
