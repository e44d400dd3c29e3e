#pragma once

#include <string>

#include "polyvem/assembly.hpp"
#include "polyvem/postprocess.hpp"

namespace polyvem {

// Legacy VTK 2.0 ASCII, DATASET UNSTRUCTURED_GRID with polygon cells
// (cell type 7). POINT_DATA carries temperature/displacement, CELL_DATA the
// stress components and von Mises. Byte output is deterministic for
// identical inputs.
void write_vtk(const std::string& path, const PolygonalMesh& mesh,
               const FieldSolution* temperature = nullptr,
               const FieldSolution* displacement = nullptr,
               const StressField* stress = nullptr,
               PlaneMode mode = PlaneMode::plane_stress, double nu = 0.0);

}  // namespace polyvem
