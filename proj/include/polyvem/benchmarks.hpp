#pragma once

#include <cstdint>
#include <vector>

#include "polyvem/assembly.hpp"
#include "polyvem/postprocess.hpp"

namespace polyvem {

// Thick-walled cylinder under a radial temperature gradient, plane stress.
struct CylinderParams {
    double r_a = 20.0;  // mm
    double r_b = 60.0;  // mm
    Material material{460000.0, 0.3, 7.4e-6, 20.0};
    double T_a = 0.0;   // K
    double T_b = 500.0; // K
};

struct CylinderExact {
    double T = 0.0;
    double u_r = 0.0;
    double sigma_r = 0.0;
    double sigma_theta = 0.0;
};

// Closed-form solution of the radial Euler equation with stress-free inner
// and outer surfaces.
CylinderExact cylinder_exact(double r, const CylinderParams& params);

// Quarter-annulus structured polar grid. Boundary tags: "inner", "outer",
// "cut_y0" (the theta = 0 edge on y = 0), "cut_x0" (the theta = pi/2 edge on
// x = 0).
PolygonalMesh make_quarter_annulus_mesh(const CylinderParams& params, int nr, int ntheta);

// Voronoi variant of the quarter annulus with the same boundary tags.
PolygonalMesh make_quarter_annulus_polygonal_mesh(const CylinderParams& params, int n_seeds,
                                                  std::uint64_t seed);

struct CylinderReport {
    int nodes = 0;
    int elements = 0;
    double e_av_r = 0.0;      // percent
    double e_av_theta = 0.0;  // percent
    int excluded_r = 0;
    int excluded_theta = 0;
    double rms_temperature = 0.0;
    double rms_stress = 0.0;
};

// Thermal Dirichlet on the arcs, symmetry conditions on the cuts, sequential
// coupled solve, nodal stress errors against the exact solution sampled at
// interior nodes.
CylinderReport run_cylinder_benchmark(const PolygonalMesh& mesh, Method method,
                                      const CylinderParams& params = {});

struct ConvergenceReport {
    std::vector<int> ndof_temperature;
    std::vector<int> ndof_displacement;
    std::vector<double> rms_temperature;
    std::vector<double> rms_stress;
    double slope_temperature = 0.0;
    double slope_stress = 0.0;
    bool monotone = true;
};

// Nested polar refinements (nr, ntheta) doubling per level.
ConvergenceReport run_convergence(Method method, const std::vector<std::pair<int, int>>& levels,
                                  const CylinderParams& params = {});

struct BimaterialReport {
    PolygonalMesh mesh;
    FieldSolution temperature;
    FieldSolution displacement;
    StressField stress;
    double heat_in = 0.0;
    double heat_out = 0.0;
    double conservation_error = 0.0;  // |in + out| / |in|
    double t_min = 0.0;
    double t_max = 0.0;
    SampledLine interface_profile;  // von Mises along the Cu/Si interface
};

// Cu channel embedded in a Si strip, 125 K top / 25 K bottom, insulated
// sides, bottom clamped; quad mesh in the channel, Voronoi in the strip,
// joined by a non-matching merge.
BimaterialReport run_bimaterial_demo(Method method, int si_seeds = 700,
                                     std::uint64_t seed = 42);

struct RotationReport {
    std::vector<double> angles_deg;
    std::vector<int> element_counts;
    std::vector<std::vector<double>> profiles;  // von Mises along the arc
    std::vector<double> arc_positions;
    double max_pairwise_deviation = 0.0;  // relative to the profile peak
};

// Square plate with a circular inclusion under top tension; the inclusion
// mesh rotates rigidly while the outer mesh stays fixed.
RotationReport run_rotation_study(Method method, const std::vector<double>& angles_deg);

// Patch-test meshes over convex domains and a non-matching L-shape.
PolygonalMesh make_patch_quad_mesh();
PolygonalMesh make_patch_voronoi_mesh(int n_seeds = 200, std::uint64_t seed = 7);
PolygonalMesh make_patch_lshape_mesh();

struct PatchResult {
    double max_nodal_error_temperature = 0.0;  // relative to field scale
    double max_nodal_error_displacement = 0.0;
    double max_stress_error = 0.0;  // relative to exact stress norm
};

// Linear temperature and displacement fields imposed through Dirichlet data
// on every boundary node; interior values and recovered stresses must
// reproduce the fields.
PatchResult run_patch_test(const PolygonalMesh& mesh, Method method);

}  // namespace polyvem
