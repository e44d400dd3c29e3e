#include "polyvem/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "polyvem/errors.hpp"

namespace polyvem {

StressField recover_stress(const PolygonalMesh& mesh, const MaterialMap& materials,
                           PlaneMode mode, const FieldSolution& displacement,
                           const FieldSolution* temperature, double T_ref) {
    if (displacement.kind != FieldSolution::Kind::displacement) {
        throw ConfigError("recover_stress: displacement solution expected");
    }
    if (displacement.mesh_hash != mesh.hash()) {
        throw ConfigError("recover_stress: displacement solution mesh hash mismatch");
    }
    if (temperature != nullptr && temperature->mesh_hash != mesh.hash()) {
        throw ConfigError("recover_stress: temperature solution mesh hash mismatch");
    }
    StressField field;
    field.mesh_hash = mesh.hash();
    field.per_element.resize(static_cast<std::size_t>(mesh.num_elements()));
    for (int eid = 0; eid < mesh.num_elements(); ++eid) {
        const Element& e = mesh.elements[static_cast<std::size_t>(eid)];
        const auto it = materials.find(e.region);
        if (it == materials.end()) {
            throw ConfigError("recover_stress: no material for region '" + e.region + "'");
        }
        const Material& mat = it->second;
        const Eigen::VectorXd& data = displacement.element_data[static_cast<std::size_t>(eid)];
        Eigen::Vector3d strain = data.tail(3);
        if (temperature != nullptr) {
            // c0 is the projected temperature at the element centroid.
            const double dT =
                temperature->element_data[static_cast<std::size_t>(eid)](0) - T_ref;
            strain(0) -= mat.alpha * dT;
            strain(1) -= mat.alpha * dT;
        }
        field.per_element[static_cast<std::size_t>(eid)] =
            elasticity_matrix(mat, mode) * strain;
    }

    // Per (node, material) means, then the cross-material mean per node.
    std::map<std::pair<int, std::string>, std::pair<Eigen::Vector3d, int>> acc;
    for (int eid = 0; eid < mesh.num_elements(); ++eid) {
        const Element& e = mesh.elements[static_cast<std::size_t>(eid)];
        for (int v : e.vertices) {
            auto& slot = acc[{v, e.region}];
            slot.first += field.per_element[static_cast<std::size_t>(eid)];
            slot.second += 1;
        }
    }
    std::vector<std::pair<Eigen::Vector3d, int>> nodal(
        static_cast<std::size_t>(mesh.num_nodes()), {Eigen::Vector3d::Zero(), 0});
    for (const auto& [key, slot] : acc) {
        const Eigen::Vector3d mean = slot.first / slot.second;
        field.per_node_by_material[key] = mean;
        nodal[static_cast<std::size_t>(key.first)].first += mean;
        nodal[static_cast<std::size_t>(key.first)].second += 1;
    }
    field.per_node_averaged.resize(static_cast<std::size_t>(mesh.num_nodes()),
                                   Eigen::Vector3d::Zero());
    for (int v = 0; v < mesh.num_nodes(); ++v) {
        if (nodal[static_cast<std::size_t>(v)].second > 0) {
            field.per_node_averaged[static_cast<std::size_t>(v)] =
                nodal[static_cast<std::size_t>(v)].first /
                nodal[static_cast<std::size_t>(v)].second;
        }
    }
    return field;
}

double von_mises(const Eigen::Vector3d& sigma, PlaneMode mode, double nu) {
    const double sxx = sigma(0), syy = sigma(1), sxy = sigma(2);
    if (mode == PlaneMode::plane_stress) {
        return std::sqrt(sxx * sxx - sxx * syy + syy * syy + 3.0 * sxy * sxy);
    }
    const double szz = nu * (sxx + syy);
    return std::sqrt(0.5 * ((sxx - syy) * (sxx - syy) + (syy - szz) * (syy - szz) +
                            (szz - sxx) * (szz - sxx)) +
                     3.0 * sxy * sxy);
}

ErrorStats error_eav(const std::vector<double>& numerical, const std::vector<double>& exact) {
    if (numerical.size() != exact.size() || exact.empty()) {
        throw ConfigError("error_eav: sample arrays must be equal-length and non-empty");
    }
    ErrorStats stats;
    double sum = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        if (exact[i] == 0.0) {
            ++stats.excluded;
            continue;
        }
        sum += std::abs(numerical[i] - exact[i]) / std::abs(exact[i]);
        ++used;
    }
    if (used == 0) throw ConfigError("error_eav: all exact samples are zero");
    stats.value = sum / used * 100.0;
    return stats;
}

double error_rms(const std::vector<double>& numerical, const std::vector<double>& exact) {
    if (numerical.size() != exact.size() || exact.empty()) {
        throw ConfigError("error_rms: sample arrays must be equal-length and non-empty");
    }
    double maxe = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        maxe = std::max(maxe, std::abs(exact[i]));
        sum += (numerical[i] - exact[i]) * (numerical[i] - exact[i]);
    }
    if (maxe == 0.0) throw ConfigError("error_rms: exact samples are all zero");
    return std::sqrt(sum / static_cast<double>(exact.size())) / maxe;
}

LineField line_field_from_string(const std::string& s) {
    if (s == "temperature") return LineField::temperature;
    if (s == "ux") return LineField::displacement_x;
    if (s == "uy") return LineField::displacement_y;
    if (s == "umag") return LineField::displacement_magnitude;
    if (s == "sxx") return LineField::stress_xx;
    if (s == "syy") return LineField::stress_yy;
    if (s == "sxy") return LineField::stress_xy;
    if (s == "von_mises") return LineField::von_mises;
    throw ConfigError("unknown line field '" + s + "'");
}

namespace {

double stress_component(const Eigen::Vector3d& sigma, LineField field, PlaneMode mode,
                        double nu) {
    switch (field) {
        case LineField::stress_xx: return sigma(0);
        case LineField::stress_yy: return sigma(1);
        case LineField::stress_xy: return sigma(2);
        default: return von_mises(sigma, mode, nu);
    }
}

// Temperature / displacement values from the element's projected polynomial.
double projected_value(const PolygonalMesh& mesh, int eid, const FieldSolution* temperature,
                       const FieldSolution* displacement, LineField field, const Vec2& x) {
    const ElementGeometry geom = mesh.element_geometry(eid);
    const double xi = (x.x() - geom.centroid.x()) / geom.diameter;
    const double eta = (x.y() - geom.centroid.y()) / geom.diameter;
    if (field == LineField::temperature) {
        if (temperature == nullptr) throw ConfigError("extract_line: no temperature solution");
        const Eigen::VectorXd& d = temperature->element_data[static_cast<std::size_t>(eid)];
        return d(0) + d(1) * xi + d(2) * eta;
    }
    if (displacement == nullptr) throw ConfigError("extract_line: no displacement solution");
    const Eigen::VectorXd& d = displacement->element_data[static_cast<std::size_t>(eid)];
    // Basis: m1..m6 = (1,0),(0,1),(-eta,xi),(eta,xi),(xi,0),(0,eta).
    const double ux = d(0) - d(2) * eta + d(3) * eta + d(4) * xi;
    const double uy = d(1) + d(2) * xi + d(3) * xi + d(5) * eta;
    switch (field) {
        case LineField::displacement_x: return ux;
        case LineField::displacement_y: return uy;
        default: return std::hypot(ux, uy);
    }
}

}  // namespace

SampledLine extract_line(const PolygonalMesh& mesh, const MaterialMap& materials, PlaneMode mode,
                         const FieldSolution* temperature, const FieldSolution* displacement,
                         const StressField* stress, LineField field,
                         const std::vector<Vec2>& polyline, int n_samples) {
    if (polyline.size() < 2) throw ConfigError("extract_line: polyline needs >= 2 points");
    if (n_samples < 2) throw ConfigError("extract_line: need at least 2 samples");
    const bool is_stress = field == LineField::stress_xx || field == LineField::stress_yy ||
                           field == LineField::stress_xy || field == LineField::von_mises;
    if (is_stress && stress == nullptr) {
        throw ConfigError("extract_line: stress field required for stress components");
    }

    std::vector<double> seg_len;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
        seg_len.push_back((polyline[i + 1] - polyline[i]).norm());
        total += seg_len.back();
    }
    const double snap = 1e-9 * mesh.diameter();
    const double edge_snap = 1e-9 * mesh.diameter();

    SampledLine line;
    for (int k = 0; k < n_samples; ++k) {
        const double s = total * k / (n_samples - 1);
        // Locate the point on the polyline.
        double acc = 0.0;
        Vec2 p = polyline.back();
        for (std::size_t i = 0; i < seg_len.size(); ++i) {
            if (s <= acc + seg_len[i] || i + 1 == seg_len.size()) {
                const double t = seg_len[i] > 0.0 ? (s - acc) / seg_len[i] : 0.0;
                p = polyline[i] + std::min(1.0, std::max(0.0, t)) * (polyline[i + 1] - polyline[i]);
                break;
            }
            acc += seg_len[i];
        }
        // Containing elements (more than one on edges/nodes).
        std::vector<int> hits;
        for (int eid = 0; eid < mesh.num_elements(); ++eid) {
            if (point_in_polygon(p, mesh.element_polygon(eid), edge_snap)) hits.push_back(eid);
        }
        if (hits.empty()) {
            throw ConfigError("extract_line: point (" + std::to_string(p.x()) + ", " +
                              std::to_string(p.y()) + ") lies outside the mesh");
        }
        double value = 0.0;
        if (is_stress) {
            // Snap to a node -> material-averaged nodal stress.
            int node = -1;
            for (int eid : hits) {
                for (int v : mesh.elements[static_cast<std::size_t>(eid)].vertices) {
                    if ((mesh.nodes[static_cast<std::size_t>(v)] - p).norm() <= snap) node = v;
                }
            }
            const double nu =
                materials.count(mesh.elements[static_cast<std::size_t>(hits[0])].region)
                    ? materials.at(mesh.elements[static_cast<std::size_t>(hits[0])].region).nu
                    : 0.0;
            if (node >= 0) {
                value = stress_component(stress->per_node_averaged[static_cast<std::size_t>(node)],
                                         field, mode, nu);
            } else {
                double sum = 0.0;
                for (int eid : hits) {
                    sum += stress_component(stress->per_element[static_cast<std::size_t>(eid)],
                                            field, mode, nu);
                }
                value = sum / static_cast<double>(hits.size());
            }
        } else {
            double sum = 0.0;
            for (int eid : hits) {
                sum += projected_value(mesh, eid, temperature, displacement, field, p);
            }
            value = sum / static_cast<double>(hits.size());
        }
        line.s.push_back(s);
        line.value.push_back(value);
    }
    return line;
}

void write_line_csv(const SampledLine& line, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "s,value\n";
    char buf[80];
    for (std::size_t i = 0; i < line.s.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", line.s[i], line.value[i]);
        out << buf;
    }
}

}  // namespace polyvem
