#pragma once

#include <Eigen/Sparse>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyvem/material.hpp"
#include "polyvem/mesh.hpp"

namespace polyvem {

enum class Method { vem, sfvem };
enum class FieldKind { thermal, mechanical };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct BoundaryCondition {
    enum class Kind { dirichlet, neumann };
    Kind kind = Kind::dirichlet;
    FieldKind field = FieldKind::thermal;
    std::string target;            // boundary tag
    Eigen::Vector2d value{0, 0};   // thermal uses value[0]
    std::array<bool, 2> mask{true, true};  // mechanical Dirichlet components
};

struct SolverParams {
    Method method = Method::vem;
    double tau_h = 0.5;
    std::optional<int> uniform_order;  // force a global SFVEM order floor
    PlaneMode mode = PlaneMode::plane_stress;
    double T_ref = 0.0;
    double tol = 1e-10;
};

struct FieldSolution {
    enum class Kind { temperature, displacement };
    Kind kind = Kind::temperature;
    Eigen::VectorXd nodal;  // 1 dof/node (temperature) or 2 interleaved (displacement)
    // Per element:
    //  temperature: [c0, c1, c2, gx, gy] projection coefficients in scaled
    //               monomials plus the recovered gradient at the centroid;
    //  displacement: [p0..p5, exx, eyy, gxy] vector projection coefficients
    //                plus the projected strain at the centroid.
    std::vector<Eigen::VectorXd> element_data;
    std::uint64_t mesh_hash = 0;
    Method method = Method::vem;
};

struct AssembledSystem {
    Eigen::SparseMatrix<double> K;
    Eigen::VectorXd F;
    int dofs_per_node = 1;
    FieldKind field = FieldKind::thermal;
};

// Per-region material lookup; every element region must be present.
using MaterialMap = std::map<std::string, Material>;

AssembledSystem assemble(const PolygonalMesh& mesh, const MaterialMap& materials, Method method,
                         FieldKind field, const SolverParams& params,
                         const std::vector<BoundaryCondition>& bcs,
                         const FieldSolution* temperature = nullptr);

// Dirichlet values per global DOF, built from tag-based conditions. Throws on
// conflicting duplicate constraints.
std::map<int, double> dirichlet_values(const PolygonalMesh& mesh,
                                       const std::vector<BoundaryCondition>& bcs,
                                       FieldKind field);

// Symmetric elimination: constrained DOFs are removed and their columns moved
// to the load; the returned vector is re-expanded to full size.
Eigen::VectorXd solve_with_dirichlet(const AssembledSystem& system,
                                     const std::map<int, double>& dirichlet, double tol);

// K u - F on the full (unreduced) system; nonzero entries at constrained DOFs
// are the reactions.
Eigen::VectorXd reactions(const AssembledSystem& system, const Eigen::VectorXd& solution);

// Wrap a nodal vector into a FieldSolution, computing the per-element
// projection data for the given method.
FieldSolution make_field_solution(const PolygonalMesh& mesh, const MaterialMap& materials,
                                  const SolverParams& params, FieldSolution::Kind kind,
                                  Eigen::VectorXd nodal);

FieldSolution solve_thermal(const PolygonalMesh& mesh, const MaterialMap& materials,
                            const std::vector<BoundaryCondition>& bcs,
                            const SolverParams& params);

FieldSolution solve_elastic(const PolygonalMesh& mesh, const MaterialMap& materials,
                            const std::vector<BoundaryCondition>& bcs,
                            const SolverParams& params,
                            const FieldSolution* temperature = nullptr);

// Sequential one-way pipeline: temperature first, then the mechanical solve
// loaded by it.
std::pair<FieldSolution, FieldSolution> solve_thermomechanical(
    const PolygonalMesh& mesh, const MaterialMap& materials,
    const std::vector<BoundaryCondition>& thermal_bcs,
    const std::vector<BoundaryCondition>& mechanical_bcs, const SolverParams& params);

// Element stiffness for one element under the given method; exposed for tests.
Eigen::MatrixXd element_stiffness(const PolygonalMesh& mesh, int element_id,
                                  const MaterialMap& materials, Method method, FieldKind field,
                                  const SolverParams& params);

}  // namespace polyvem
