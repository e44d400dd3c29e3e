#pragma once

#include <Eigen/Dense>
#include <string>

namespace polyvem {

enum class PlaneMode { plane_stress, plane_strain };

struct Material {
    double E = 1.0;             // Young's modulus (MPa)
    double nu = 0.0;            // Poisson's ratio
    double alpha = 0.0;         // thermal expansion (1/K)
    double conductivity = 1.0;  // W/(m K)

    void check() const;
};

// 3x3 Voigt elasticity matrix for the given in-plane mode.
Eigen::Matrix3d elasticity_matrix(const Material& mat, PlaneMode mode);

std::string to_string(PlaneMode mode);
PlaneMode plane_mode_from_string(const std::string& s);

}  // namespace polyvem
