#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyvem/assembly.hpp"

namespace polyvem {

// Generator specs understood by the config "mesh" block.
struct MeshSpec {
    std::string path;  // non-empty: load from file, everything else ignored
    std::string generator;  // "quad" | "voronoi"
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    int nx = 1, ny = 1;
    std::vector<std::vector<double>> outer;  // voronoi outline [[x,y],...]
    int n_seeds = 100;
    int lloyd_iterations = 20;
    std::uint64_t seed = 1;
    std::string region = "domain";
};

struct RunConfig {
    Method method = Method::vem;
    double tau_h = 0.5;
    std::optional<int> uniform_order;
    PlaneMode mode = PlaneMode::plane_stress;
    double T_ref = 0.0;
    double solver_tol = 1e-10;
    std::map<std::string, Material> materials;
    std::vector<BoundaryCondition> thermal_bcs;
    std::vector<BoundaryCondition> mechanical_bcs;
    MeshSpec mesh;
    std::string output_dir = ".";

    SolverParams solver_params() const;
};

RunConfig parse_run_config(const std::string& text);
std::string serialize_run_config(const RunConfig& config);
RunConfig load_run_config(const std::string& path);

PolygonalMesh realize_mesh(const MeshSpec& spec);

// FNV-1a over the serialized config.
std::uint64_t config_hash(const RunConfig& config);

// Run manifest: config hash, mesh hash, method, code version and the unit
// system, written next to the outputs.
void write_manifest(const std::string& path, const RunConfig& config,
                    std::uint64_t mesh_hash);

extern const char* const kCodeVersion;

}  // namespace polyvem
