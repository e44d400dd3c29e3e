#include "polyvem/material.hpp"

#include "polyvem/errors.hpp"

namespace polyvem {

void Material::check() const {
    if (!(E > 0.0)) throw ConfigError("material: Young's modulus must be positive");
    if (!(nu > -1.0 && nu < 0.5)) {
        throw ConfigError("material: Poisson's ratio must lie in (-1, 0.5)");
    }
    if (alpha < 0.0) throw ConfigError("material: thermal expansion must be >= 0");
    if (!(conductivity > 0.0)) throw ConfigError("material: conductivity must be positive");
}

Eigen::Matrix3d elasticity_matrix(const Material& mat, PlaneMode mode) {
    mat.check();
    const double E = mat.E, nu = mat.nu;
    Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
    if (mode == PlaneMode::plane_stress) {
        const double f = E / (1.0 - nu * nu);
        D(0, 0) = D(1, 1) = f;
        D(0, 1) = D(1, 0) = f * nu;
        D(2, 2) = f * (1.0 - nu) / 2.0;
    } else {
        const double f = E / ((1.0 + nu) * (1.0 - 2.0 * nu));
        D(0, 0) = D(1, 1) = f * (1.0 - nu);
        D(0, 1) = D(1, 0) = f * nu;
        D(2, 2) = f * (1.0 - 2.0 * nu) / 2.0;
    }
    return D;
}

std::string to_string(PlaneMode mode) {
    return mode == PlaneMode::plane_stress ? "plane_stress" : "plane_strain";
}

PlaneMode plane_mode_from_string(const std::string& s) {
    if (s == "plane_stress") return PlaneMode::plane_stress;
    if (s == "plane_strain") return PlaneMode::plane_strain;
    throw ConfigError("unknown plane mode '" + s + "'");
}

}  // namespace polyvem
