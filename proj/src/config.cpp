#include "polyvem/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "polyvem/errors.hpp"

namespace polyvem {

using json = nlohmann::ordered_json;

const char* const kCodeVersion = "0.1.0";

SolverParams RunConfig::solver_params() const {
    SolverParams p;
    p.method = method;
    p.tau_h = tau_h;
    p.uniform_order = uniform_order;
    p.mode = mode;
    p.T_ref = T_ref;
    p.tol = solver_tol;
    return p;
}

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& context) {
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError("unknown key '" + key + "' in " + context);
        }
    }
}

BoundaryCondition parse_bc(const json& j, FieldKind field) {
    reject_unknown_keys(j, {"kind", "tag", "value", "tx", "ty", "ux", "uy", "fix"},
                        "boundary condition");
    BoundaryCondition bc;
    bc.field = field;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dirichlet") {
        bc.kind = BoundaryCondition::Kind::dirichlet;
    } else if (kind == "neumann") {
        bc.kind = BoundaryCondition::Kind::neumann;
    } else {
        throw ConfigError("boundary condition kind must be 'dirichlet' or 'neumann'");
    }
    bc.target = j.at("tag").get<std::string>();
    if (field == FieldKind::thermal) {
        bc.value(0) = j.at("value").get<double>();
    } else if (bc.kind == BoundaryCondition::Kind::dirichlet) {
        bc.mask = {false, false};
        if (j.contains("ux")) {
            bc.value(0) = j["ux"].get<double>();
            bc.mask[0] = true;
        }
        if (j.contains("uy")) {
            bc.value(1) = j["uy"].get<double>();
            bc.mask[1] = true;
        }
        if (!bc.mask[0] && !bc.mask[1]) {
            throw ConfigError("mechanical Dirichlet condition must fix ux, uy or both");
        }
    } else {
        bc.value(0) = j.value("tx", 0.0);
        bc.value(1) = j.value("ty", 0.0);
    }
    return bc;
}

json serialize_bc(const BoundaryCondition& bc) {
    json j;
    j["kind"] = bc.kind == BoundaryCondition::Kind::dirichlet ? "dirichlet" : "neumann";
    j["tag"] = bc.target;
    if (bc.field == FieldKind::thermal) {
        j["value"] = bc.value(0);
    } else if (bc.kind == BoundaryCondition::Kind::dirichlet) {
        if (bc.mask[0]) j["ux"] = bc.value(0);
        if (bc.mask[1]) j["uy"] = bc.value(1);
    } else {
        j["tx"] = bc.value(0);
        j["ty"] = bc.value(1);
    }
    return j;
}

MeshSpec parse_mesh_spec(const json& j) {
    reject_unknown_keys(j,
                        {"path", "generator", "x0", "x1", "y0", "y1", "nx", "ny", "outer",
                         "n_seeds", "lloyd_iterations", "seed", "region"},
                        "mesh spec");
    MeshSpec spec;
    spec.path = j.value("path", "");
    if (!spec.path.empty()) return spec;
    spec.generator = j.at("generator").get<std::string>();
    spec.x0 = j.value("x0", 0.0);
    spec.x1 = j.value("x1", 1.0);
    spec.y0 = j.value("y0", 0.0);
    spec.y1 = j.value("y1", 1.0);
    spec.nx = j.value("nx", 1);
    spec.ny = j.value("ny", 1);
    if (j.contains("outer")) {
        spec.outer = j["outer"].get<std::vector<std::vector<double>>>();
    }
    spec.n_seeds = j.value("n_seeds", 100);
    spec.lloyd_iterations = j.value("lloyd_iterations", 20);
    spec.seed = j.value("seed", static_cast<std::uint64_t>(1));
    spec.region = j.value("region", "domain");
    return spec;
}

json serialize_mesh_spec(const MeshSpec& spec) {
    json j;
    if (!spec.path.empty()) {
        j["path"] = spec.path;
        return j;
    }
    j["generator"] = spec.generator;
    if (spec.generator == "quad") {
        j["x0"] = spec.x0;
        j["x1"] = spec.x1;
        j["y0"] = spec.y0;
        j["y1"] = spec.y1;
        j["nx"] = spec.nx;
        j["ny"] = spec.ny;
    } else {
        j["outer"] = spec.outer;
        j["n_seeds"] = spec.n_seeds;
        j["lloyd_iterations"] = spec.lloyd_iterations;
        j["seed"] = spec.seed;
    }
    j["region"] = spec.region;
    return j;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    reject_unknown_keys(j,
                        {"method", "tau_h", "uniform_order", "mode", "T_ref", "solver_tol",
                         "materials", "thermal_bcs", "mechanical_bcs", "mesh", "output_dir"},
                        "config");
    RunConfig cfg;
    cfg.method = method_from_string(j.value("method", "vem"));
    cfg.tau_h = j.value("tau_h", 0.5);
    if (j.contains("uniform_order")) cfg.uniform_order = j["uniform_order"].get<int>();
    cfg.mode = plane_mode_from_string(j.value("mode", "plane_stress"));
    cfg.T_ref = j.value("T_ref", 0.0);
    cfg.solver_tol = j.value("solver_tol", 1e-10);
    if (j.contains("materials")) {
        for (const auto& [region, m] : j["materials"].items()) {
            reject_unknown_keys(m, {"E", "nu", "alpha", "conductivity"},
                                "material '" + region + "'");
            Material mat;
            mat.E = m.value("E", 1.0);
            mat.nu = m.value("nu", 0.0);
            mat.alpha = m.value("alpha", 0.0);
            mat.conductivity = m.value("conductivity", 1.0);
            mat.check();
            cfg.materials[region] = mat;
        }
    }
    if (j.contains("thermal_bcs")) {
        for (const auto& bc : j["thermal_bcs"]) {
            cfg.thermal_bcs.push_back(parse_bc(bc, FieldKind::thermal));
        }
    }
    if (j.contains("mechanical_bcs")) {
        for (const auto& bc : j["mechanical_bcs"]) {
            cfg.mechanical_bcs.push_back(parse_bc(bc, FieldKind::mechanical));
        }
    }
    if (!j.contains("mesh")) throw ConfigError("config must contain a 'mesh' block");
    cfg.mesh = parse_mesh_spec(j["mesh"]);
    cfg.output_dir = j.value("output_dir", ".");
    return cfg;
}

std::string serialize_run_config(const RunConfig& cfg) {
    json j;
    j["method"] = to_string(cfg.method);
    j["tau_h"] = cfg.tau_h;
    if (cfg.uniform_order) j["uniform_order"] = *cfg.uniform_order;
    j["mode"] = to_string(cfg.mode);
    j["T_ref"] = cfg.T_ref;
    j["solver_tol"] = cfg.solver_tol;
    j["materials"] = json::object();
    for (const auto& [region, m] : cfg.materials) {
        j["materials"][region] = {
            {"E", m.E}, {"nu", m.nu}, {"alpha", m.alpha}, {"conductivity", m.conductivity}};
    }
    j["thermal_bcs"] = json::array();
    for (const auto& bc : cfg.thermal_bcs) j["thermal_bcs"].push_back(serialize_bc(bc));
    j["mechanical_bcs"] = json::array();
    for (const auto& bc : cfg.mechanical_bcs) j["mechanical_bcs"].push_back(serialize_bc(bc));
    j["mesh"] = serialize_mesh_spec(cfg.mesh);
    j["output_dir"] = cfg.output_dir;
    return j.dump(2) + "\n";
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

PolygonalMesh realize_mesh(const MeshSpec& spec) {
    if (!spec.path.empty()) return load_mesh(spec.path);
    if (spec.generator == "quad") {
        return generate_quad_mesh(spec.x0, spec.x1, spec.y0, spec.y1, spec.nx, spec.ny,
                                  spec.region);
    }
    if (spec.generator == "voronoi") {
        Polygon outer;
        for (const auto& p : spec.outer) {
            if (p.size() != 2) throw ConfigError("voronoi outline points must be [x, y]");
            outer.emplace_back(p[0], p[1]);
        }
        if (outer.empty()) {
            outer = {{spec.x0, spec.y0}, {spec.x1, spec.y0}, {spec.x1, spec.y1},
                     {spec.x0, spec.y1}};
        }
        return generate_polygonal_mesh({outer, {}}, spec.n_seeds, spec.lloyd_iterations,
                                       spec.seed, spec.region);
    }
    throw ConfigError("unknown mesh generator '" + spec.generator + "'");
}

std::uint64_t config_hash(const RunConfig& cfg) {
    const std::string s = serialize_run_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

void write_manifest(const std::string& path, const RunConfig& cfg, std::uint64_t mesh_hash) {
    json j;
    j["config_hash"] = config_hash(cfg);
    j["mesh_hash"] = mesh_hash;
    j["method"] = to_string(cfg.method);
    j["code_version"] = kCodeVersion;
    j["units"] = "mm-MPa-K";
    std::ofstream out(path);
    if (!out) throw IoError("cannot open manifest '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

}  // namespace polyvem
