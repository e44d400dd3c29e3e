#pragma once

#include <map>
#include <string>
#include <vector>

#include "polyvem/assembly.hpp"

namespace polyvem {

struct StressField {
    std::vector<Eigen::Vector3d> per_element;  // (sxx, syy, sxy) in MPa
    std::map<std::pair<int, std::string>, Eigen::Vector3d> per_node_by_material;
    std::vector<Eigen::Vector3d> per_node_averaged;  // sized to node count
    std::uint64_t mesh_hash = 0;
};

// sigma = Dhat (eps - eps_t) with the projected strain at the element centroid
// and eps_t from the element material's alpha and the local projected
// temperature. Nodal values average incident elements per material first,
// then across materials.
StressField recover_stress(const PolygonalMesh& mesh, const MaterialMap& materials,
                           PlaneMode mode, const FieldSolution& displacement,
                           const FieldSolution* temperature, double T_ref);

// Plane stress: sqrt(sxx^2 - sxx syy + syy^2 + 3 sxy^2); plane strain adds
// szz = nu (sxx + syy).
double von_mises(const Eigen::Vector3d& sigma, PlaneMode mode, double nu);

struct ErrorStats {
    double value = 0.0;
    int excluded = 0;  // samples dropped by the zero-denominator guard
};

// Mean of |num - exact| / |exact| * 100 over samples with exact != 0.
ErrorStats error_eav(const std::vector<double>& numerical, const std::vector<double>& exact);

// (1 / max|exact|) sqrt(mean |num - exact|^2).
double error_rms(const std::vector<double>& numerical, const std::vector<double>& exact);

enum class LineField {
    temperature,
    displacement_x,
    displacement_y,
    displacement_magnitude,
    stress_xx,
    stress_yy,
    stress_xy,
    von_mises,
};

LineField line_field_from_string(const std::string& s);

struct SampledLine {
    std::vector<double> s;      // arc length
    std::vector<double> value;
};

// Sample a field along a polyline. Points within a node-snap distance use the
// material-averaged nodal stress; points on interior edges average the two
// incident elements.
SampledLine extract_line(const PolygonalMesh& mesh, const MaterialMap& materials, PlaneMode mode,
                         const FieldSolution* temperature, const FieldSolution* displacement,
                         const StressField* stress, LineField field,
                         const std::vector<Vec2>& polyline, int n_samples);

// CSV with header "s,value" at 17 significant digits.
void write_line_csv(const SampledLine& line, const std::string& path);

}  // namespace polyvem
