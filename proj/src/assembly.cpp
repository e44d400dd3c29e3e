#include "polyvem/assembly.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <set>

#include "polyvem/errors.hpp"
#include "polyvem/quadrature.hpp"
#include "polyvem/sfvem.hpp"
#include "polyvem/vem_elastic.hpp"
#include "polyvem/vem_thermal.hpp"

namespace polyvem {

std::string to_string(Method m) {
    return m == Method::vem ? "vem" : "sfvem";
}

Method method_from_string(const std::string& s) {
    if (s == "vem") return Method::vem;
    if (s == "sfvem") return Method::sfvem;
    throw ConfigError("unknown method '" + s + "'");
}

namespace {

const Material& material_for(const MaterialMap& materials, const std::string& region) {
    const auto it = materials.find(region);
    if (it == materials.end()) {
        throw ConfigError("no material configured for region '" + region + "'");
    }
    return it->second;
}

int sfvem_order(const SolverParams& params, int nv) {
    const int l = select_order(nv);
    return params.uniform_order ? std::max(l, *params.uniform_order) : l;
}

void check_bc_tags(const PolygonalMesh& mesh, const std::vector<BoundaryCondition>& bcs,
                   FieldKind field) {
    std::set<std::string> dirichlet, neumann;
    for (const BoundaryCondition& bc : bcs) {
        if (bc.field != field) continue;
        if (!mesh.boundary_edges.count(bc.target)) {
            throw ConfigError("boundary condition targets unknown tag '" + bc.target + "'");
        }
        (bc.kind == BoundaryCondition::Kind::dirichlet ? dirichlet : neumann).insert(bc.target);
    }
    for (const std::string& tag : dirichlet) {
        if (neumann.count(tag)) {
            throw ConfigError("tag '" + tag + "' carries both Dirichlet and Neumann conditions");
        }
    }
}

void gather_element_dofs(const Element& e, int dofs_per_node, std::vector<int>& dofs) {
    dofs.clear();
    for (int v : e.vertices) {
        for (int c = 0; c < dofs_per_node; ++c) dofs.push_back(dofs_per_node * v + c);
    }
}

}  // namespace

Eigen::MatrixXd element_stiffness(const PolygonalMesh& mesh, int element_id,
                                  const MaterialMap& materials, Method method, FieldKind field,
                                  const SolverParams& params) {
    const Element& e = mesh.elements[static_cast<std::size_t>(element_id)];
    const Material& mat = material_for(materials, e.region);
    const int nv = static_cast<int>(e.vertices.size());
    if (field == FieldKind::thermal) {
        ScalarElementKernel kernel = scalar_projection(mesh, element_id, mat.conductivity);
        if (method == Method::vem) {
            thermal_stiffness(kernel, params.tau_h);
            return kernel.K;
        }
        const GradientProjectionKernel grad =
            gradient_projection_scalar(mesh, element_id, sfvem_order(params, nv), kernel);
        return sfvem_thermal_stiffness(grad, mat.conductivity, mesh, element_id);
    }
    const Eigen::Matrix3d Dhat = elasticity_matrix(mat, params.mode);
    if (method == Method::vem) {
        VectorElementKernel kernel = vector_projection(mesh, element_id, Dhat);
        elastic_stiffness(kernel, params.tau_h);
        return kernel.K;
    }
    const ScalarElementKernel base = scalar_projection(mesh, element_id, mat.conductivity);
    const GradientProjectionKernel grad =
        gradient_projection_scalar(mesh, element_id, sfvem_order(params, nv), base);
    return sfvem_elastic_stiffness(grad, Dhat, mesh, element_id);
}

AssembledSystem assemble(const PolygonalMesh& mesh, const MaterialMap& materials, Method method,
                         FieldKind field, const SolverParams& params,
                         const std::vector<BoundaryCondition>& bcs,
                         const FieldSolution* temperature) {
    check_bc_tags(mesh, bcs, field);
    if (temperature != nullptr && temperature->mesh_hash != mesh.hash()) {
        throw ConfigError("temperature solution was computed on a different mesh");
    }
    const int dofs_per_node = field == FieldKind::thermal ? 1 : 2;
    const int n_dofs = dofs_per_node * mesh.num_nodes();

    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd F = Eigen::VectorXd::Zero(n_dofs);
    std::vector<int> dofs;
    for (int eid = 0; eid < mesh.num_elements(); ++eid) {
        const Element& e = mesh.elements[static_cast<std::size_t>(eid)];
        const Eigen::MatrixXd Ke = element_stiffness(mesh, eid, materials, method, field, params);
        gather_element_dofs(e, dofs_per_node, dofs);
        for (std::size_t i = 0; i < dofs.size(); ++i) {
            for (std::size_t j = 0; j < dofs.size(); ++j) {
                triplets.emplace_back(dofs[i], dofs[j],
                                      Ke(static_cast<int>(i), static_cast<int>(j)));
            }
        }
        if (field == FieldKind::mechanical && temperature != nullptr) {
            const Material& mat = material_for(materials, e.region);
            const int nv = static_cast<int>(e.vertices.size());
            Eigen::VectorXd T_e(nv);
            for (int i = 0; i < nv; ++i) {
                T_e(i) = temperature->nodal(e.vertices[static_cast<std::size_t>(i)]);
            }
            const ScalarElementKernel base = scalar_projection(mesh, eid, mat.conductivity);
            Eigen::VectorXd Fth;
            if (method == Method::vem) {
                const Eigen::Matrix3d Dhat = elasticity_matrix(mat, params.mode);
                const VectorElementKernel kernel = vector_projection(mesh, eid, Dhat);
                Fth = thermal_force(kernel, base, T_e, mat.alpha, params.T_ref, mesh, eid);
            } else {
                const Eigen::Matrix3d Dhat = elasticity_matrix(mat, params.mode);
                const GradientProjectionKernel grad =
                    gradient_projection_scalar(mesh, eid, sfvem_order(params, nv), base);
                Fth = sfvem_thermal_force(grad, base, T_e, mat.alpha, params.T_ref, Dhat, mesh,
                                          eid);
            }
            for (std::size_t i = 0; i < dofs.size(); ++i) {
                F(dofs[i]) += Fth(static_cast<int>(i));
            }
        }
    }

    // Neumann edge loads with two-point Gauss on linear traces. Positive
    // thermal flux means outflow (-lambda grad T . n = qbar), so it enters the
    // load with a negative sign; tractions enter positively.
    for (const BoundaryCondition& bc : bcs) {
        if (bc.field != field || bc.kind != BoundaryCondition::Kind::neumann) continue;
        for (const auto& edge : mesh.boundary_edges.at(bc.target)) {
            const Vec2& a = mesh.nodes[static_cast<std::size_t>(edge[0])];
            const Vec2& b = mesh.nodes[static_cast<std::size_t>(edge[1])];
            const double len = (b - a).norm();
            const QuadratureRule rule = edge_rule(a, b, 2);
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const double t = (rule.points[q] - a).norm() / len;
                const double w = rule.weights[q];
                if (field == FieldKind::thermal) {
                    F(edge[0]) -= w * (1.0 - t) * bc.value(0);
                    F(edge[1]) -= w * t * bc.value(0);
                } else {
                    for (int c = 0; c < 2; ++c) {
                        F(2 * edge[0] + c) += w * (1.0 - t) * bc.value(c);
                        F(2 * edge[1] + c) += w * t * bc.value(c);
                    }
                }
            }
        }
    }

    AssembledSystem sys;
    sys.K.resize(n_dofs, n_dofs);
    sys.K.setFromTriplets(triplets.begin(), triplets.end());
    sys.F = std::move(F);
    sys.dofs_per_node = dofs_per_node;
    sys.field = field;
    return sys;
}

std::map<int, double> dirichlet_values(const PolygonalMesh& mesh,
                                       const std::vector<BoundaryCondition>& bcs,
                                       FieldKind field) {
    std::map<int, double> out;
    auto set_value = [&out](int dof, double v) {
        const auto [it, inserted] = out.emplace(dof, v);
        if (!inserted && std::abs(it->second - v) > 1e-12 * std::max(1.0, std::abs(v))) {
            throw ConfigError("conflicting Dirichlet values on DOF " + std::to_string(dof));
        }
    };
    for (const BoundaryCondition& bc : bcs) {
        if (bc.field != field || bc.kind != BoundaryCondition::Kind::dirichlet) continue;
        for (int node : mesh.boundary_nodes(bc.target)) {
            if (field == FieldKind::thermal) {
                set_value(node, bc.value(0));
            } else {
                for (int c = 0; c < 2; ++c) {
                    if (bc.mask[static_cast<std::size_t>(c)]) set_value(2 * node + c, bc.value(c));
                }
            }
        }
    }
    return out;
}

Eigen::VectorXd solve_with_dirichlet(const AssembledSystem& system,
                                     const std::map<int, double>& dirichlet, double tol) {
    const int n = static_cast<int>(system.K.rows());
    std::vector<int> to_free(n, -1);
    std::vector<int> free_dofs;
    free_dofs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (!dirichlet.count(i)) {
            to_free[static_cast<std::size_t>(i)] = static_cast<int>(free_dofs.size());
            free_dofs.push_back(i);
        }
    }
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (const auto& [dof, value] : dirichlet) full(dof) = value;
    const int nf = static_cast<int>(free_dofs.size());
    if (nf == 0) return full;

    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs(nf);
    for (int i = 0; i < nf; ++i) rhs(i) = system.F(free_dofs[static_cast<std::size_t>(i)]);
    for (int col = 0; col < n; ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(system.K, col); it; ++it) {
            const int r = static_cast<int>(it.row());
            const int c = col;
            const int fr = to_free[static_cast<std::size_t>(r)];
            const int fc = to_free[static_cast<std::size_t>(c)];
            if (fr >= 0 && fc >= 0) {
                triplets.emplace_back(fr, fc, it.value());
            } else if (fr >= 0 && fc < 0) {
                rhs(fr) -= it.value() * full(c);
            }
        }
    }
    Eigen::SparseMatrix<double> A(nf, nf);
    A.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::VectorXd x;
    if (nf < 200000) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
        if (solver.info() != Eigen::Success) {
            throw SolverError("sparse factorization failed (matrix not SPD?)");
        }
        x = solver.solve(rhs);
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(tol * 1e-2);
        cg.setMaxIterations(20000);
        cg.compute(A);
        x = cg.solve(rhs);
        if (cg.info() != Eigen::Success) {
            throw SolverError("conjugate gradient did not converge; residual " +
                              std::to_string(cg.error()));
        }
    }
    const double denom = rhs.norm();
    const double residual = (A * x - rhs).norm() / (denom > 0.0 ? denom : 1.0);
    if (!(residual <= tol) && denom > 0.0) {
        throw SolverError("linear solve residual " + std::to_string(residual) +
                          " exceeds tolerance");
    }
    for (int i = 0; i < nf; ++i) full(free_dofs[static_cast<std::size_t>(i)]) = x(i);
    return full;
}

Eigen::VectorXd reactions(const AssembledSystem& system, const Eigen::VectorXd& solution) {
    return system.K * solution - system.F;
}

namespace {

void fill_element_data(const PolygonalMesh& mesh, const MaterialMap& materials,
                       const SolverParams& params, FieldSolution& sol) {
    sol.element_data.resize(static_cast<std::size_t>(mesh.num_elements()));
    for (int eid = 0; eid < mesh.num_elements(); ++eid) {
        const Element& e = mesh.elements[static_cast<std::size_t>(eid)];
        const Material& mat = material_for(materials, e.region);
        const int nv = static_cast<int>(e.vertices.size());
        const ElementGeometry geom = mesh.element_geometry(eid);
        if (sol.kind == FieldSolution::Kind::temperature) {
            Eigen::VectorXd T_e(nv);
            for (int i = 0; i < nv; ++i) {
                T_e(i) = sol.nodal(e.vertices[static_cast<std::size_t>(i)]);
            }
            const ScalarElementKernel kernel = scalar_projection(mesh, eid, mat.conductivity);
            Eigen::VectorXd data(5);
            data.head(3) = kernel.Pi_star * T_e;
            Vec2 g;
            if (sol.method == Method::vem) {
                g = kernel.project_gradient(T_e);
            } else {
                const GradientProjectionKernel grad =
                    gradient_projection_scalar(mesh, eid, sfvem_order(params, nv), kernel);
                g = grad.gradient_at(T_e, geom.centroid);
            }
            data(3) = g.x();
            data(4) = g.y();
            sol.element_data[static_cast<std::size_t>(eid)] = std::move(data);
        } else {
            Eigen::VectorXd u_e(2 * nv);
            for (int i = 0; i < nv; ++i) {
                u_e(2 * i) = sol.nodal(2 * e.vertices[static_cast<std::size_t>(i)]);
                u_e(2 * i + 1) = sol.nodal(2 * e.vertices[static_cast<std::size_t>(i)] + 1);
            }
            const Eigen::Matrix3d Dhat = elasticity_matrix(mat, params.mode);
            const VectorElementKernel kernel = vector_projection(mesh, eid, Dhat);
            Eigen::VectorXd data(9);
            data.head(6) = kernel.Pi_star * u_e;
            Eigen::Vector3d strain;
            if (sol.method == Method::vem) {
                strain = kernel.project_strain(u_e);
            } else {
                const ScalarElementKernel base = scalar_projection(mesh, eid, mat.conductivity);
                const GradientProjectionKernel grad =
                    gradient_projection_scalar(mesh, eid, sfvem_order(params, nv), base);
                strain = grad.strain_at(u_e, geom.centroid);
            }
            data.tail(3) = strain;
            sol.element_data[static_cast<std::size_t>(eid)] = std::move(data);
        }
    }
}

}  // namespace

FieldSolution make_field_solution(const PolygonalMesh& mesh, const MaterialMap& materials,
                                  const SolverParams& params, FieldSolution::Kind kind,
                                  Eigen::VectorXd nodal) {
    const int expected = (kind == FieldSolution::Kind::temperature ? 1 : 2) * mesh.num_nodes();
    if (nodal.size() != expected) {
        throw ConfigError("make_field_solution: nodal vector has wrong length");
    }
    FieldSolution sol;
    sol.kind = kind;
    sol.method = params.method;
    sol.mesh_hash = mesh.hash();
    sol.nodal = std::move(nodal);
    fill_element_data(mesh, materials, params, sol);
    return sol;
}

FieldSolution solve_thermal(const PolygonalMesh& mesh, const MaterialMap& materials,
                            const std::vector<BoundaryCondition>& bcs,
                            const SolverParams& params) {
    const AssembledSystem sys =
        assemble(mesh, materials, params.method, FieldKind::thermal, params, bcs);
    const auto fixed = dirichlet_values(mesh, bcs, FieldKind::thermal);
    FieldSolution sol;
    sol.kind = FieldSolution::Kind::temperature;
    sol.method = params.method;
    sol.mesh_hash = mesh.hash();
    sol.nodal = solve_with_dirichlet(sys, fixed, params.tol);
    fill_element_data(mesh, materials, params, sol);
    return sol;
}

FieldSolution solve_elastic(const PolygonalMesh& mesh, const MaterialMap& materials,
                            const std::vector<BoundaryCondition>& bcs,
                            const SolverParams& params, const FieldSolution* temperature) {
    const AssembledSystem sys =
        assemble(mesh, materials, params.method, FieldKind::mechanical, params, bcs, temperature);
    const auto fixed = dirichlet_values(mesh, bcs, FieldKind::mechanical);
    FieldSolution sol;
    sol.kind = FieldSolution::Kind::displacement;
    sol.method = params.method;
    sol.mesh_hash = mesh.hash();
    sol.nodal = solve_with_dirichlet(sys, fixed, params.tol);
    fill_element_data(mesh, materials, params, sol);
    return sol;
}

std::pair<FieldSolution, FieldSolution> solve_thermomechanical(
    const PolygonalMesh& mesh, const MaterialMap& materials,
    const std::vector<BoundaryCondition>& thermal_bcs,
    const std::vector<BoundaryCondition>& mechanical_bcs, const SolverParams& params) {
    FieldSolution T = solve_thermal(mesh, materials, thermal_bcs, params);
    FieldSolution u = solve_elastic(mesh, materials, mechanical_bcs, params, &T);
    return {std::move(T), std::move(u)};
}

}  // namespace polyvem
