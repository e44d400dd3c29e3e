#include "polyvem/vtk.hpp"

#include <cstdio>
#include <fstream>

#include "polyvem/errors.hpp"

namespace polyvem {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_vtk(const std::string& path, const PolygonalMesh& mesh,
               const FieldSolution* temperature, const FieldSolution* displacement,
               const StressField* stress, PlaneMode mode, double nu) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "# vtk DataFile Version 2.0\n";
    out << "polyvem unstructured grid\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_nodes() << " double\n";
    for (const Vec2& p : mesh.nodes) {
        out << fmt(p.x()) << " " << fmt(p.y()) << " 0\n";
    }
    std::size_t list_size = 0;
    for (const Element& e : mesh.elements) list_size += e.vertices.size() + 1;
    out << "CELLS " << mesh.num_elements() << " " << list_size << "\n";
    for (const Element& e : mesh.elements) {
        out << e.vertices.size();
        for (int v : e.vertices) out << " " << v;
        out << "\n";
    }
    out << "CELL_TYPES " << mesh.num_elements() << "\n";
    for (int i = 0; i < mesh.num_elements(); ++i) out << "7\n";

    if (temperature != nullptr || displacement != nullptr) {
        out << "POINT_DATA " << mesh.num_nodes() << "\n";
        if (temperature != nullptr) {
            out << "SCALARS temperature double 1\n";
            out << "LOOKUP_TABLE default\n";
            for (int v = 0; v < mesh.num_nodes(); ++v) out << fmt(temperature->nodal(v)) << "\n";
        }
        if (displacement != nullptr) {
            out << "VECTORS displacement double\n";
            for (int v = 0; v < mesh.num_nodes(); ++v) {
                out << fmt(displacement->nodal(2 * v)) << " "
                    << fmt(displacement->nodal(2 * v + 1)) << " 0\n";
            }
        }
    }
    if (stress != nullptr) {
        out << "CELL_DATA " << mesh.num_elements() << "\n";
        const char* names[3] = {"sigma_xx", "sigma_yy", "sigma_xy"};
        for (int c = 0; c < 3; ++c) {
            out << "SCALARS " << names[c] << " double 1\n";
            out << "LOOKUP_TABLE default\n";
            for (int e = 0; e < mesh.num_elements(); ++e) {
                out << fmt(stress->per_element[static_cast<std::size_t>(e)](c)) << "\n";
            }
        }
        out << "SCALARS von_mises double 1\n";
        out << "LOOKUP_TABLE default\n";
        for (int e = 0; e < mesh.num_elements(); ++e) {
            out << fmt(von_mises(stress->per_element[static_cast<std::size_t>(e)], mode, nu))
                << "\n";
        }
    }
}

}  // namespace polyvem
