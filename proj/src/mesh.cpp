#include "polyvem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "polyvem/errors.hpp"

namespace polyvem {

using json = nlohmann::ordered_json;

Polygon PolygonalMesh::element_polygon(int element_id) const {
    const Element& e = elements.at(static_cast<std::size_t>(element_id));
    Polygon poly;
    poly.reserve(e.vertices.size());
    for (int v : e.vertices) poly.push_back(nodes.at(static_cast<std::size_t>(v)));
    return poly;
}

ElementGeometry PolygonalMesh::element_geometry(int element_id) const {
    const Polygon poly = element_polygon(element_id);
    ElementGeometry g;
    g.area = polygon_signed_area(poly);
    if (g.area <= 0.0) {
        throw DegenerateElementError("element " + std::to_string(element_id) +
                                     " has non-positive area");
    }
    g.centroid = polygon_centroid(poly);
    g.diameter = polygon_diameter(poly);
    return g;
}

double PolygonalMesh::total_area() const {
    double a = 0.0;
    for (int e = 0; e < num_elements(); ++e) a += polygon_signed_area(element_polygon(e));
    return a;
}

double PolygonalMesh::diameter() const {
    if (nodes.empty()) return 0.0;
    Vec2 lo = nodes.front(), hi = nodes.front();
    for (const Vec2& p : nodes) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

std::vector<int> PolygonalMesh::boundary_nodes(const std::string& tag) const {
    std::set<int> s;
    const auto it = boundary_edges.find(tag);
    if (it == boundary_edges.end()) {
        throw ConfigError("unknown boundary tag '" + tag + "'");
    }
    for (const auto& e : it->second) {
        s.insert(e[0]);
        s.insert(e[1]);
    }
    return {s.begin(), s.end()};
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey undirected(int a, int b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

// Incidence count per undirected element edge.
std::map<EdgeKey, int> edge_incidence(const PolygonalMesh& mesh) {
    std::map<EdgeKey, int> count;
    for (const Element& e : mesh.elements) {
        const std::size_t n = e.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            ++count[undirected(e.vertices[i], e.vertices[(i + 1) % n])];
        }
    }
    return count;
}

}  // namespace

void PolygonalMesh::validate() const {
    for (const Vec2& p : nodes) {
        if (!std::isfinite(p.x()) || !std::isfinite(p.y())) {
            throw InvalidDomainError("mesh has non-finite node coordinates");
        }
    }
    for (int eid = 0; eid < num_elements(); ++eid) {
        const Element& e = elements[static_cast<std::size_t>(eid)];
        if (e.vertices.size() < 3) {
            throw DegenerateElementError("element " + std::to_string(eid) + " has < 3 vertices");
        }
        std::set<int> uniq(e.vertices.begin(), e.vertices.end());
        if (uniq.size() != e.vertices.size()) {
            throw DegenerateElementError("element " + std::to_string(eid) +
                                         " has repeated vertices");
        }
        for (int v : e.vertices) {
            if (v < 0 || v >= num_nodes()) {
                throw InvalidDomainError("element " + std::to_string(eid) +
                                         " references node out of range");
            }
        }
        const Polygon poly = element_polygon(eid);
        if (polygon_signed_area(poly) <= 0.0) {
            throw DegenerateElementError("element " + std::to_string(eid) +
                                         " is not CCW with positive area");
        }
        if (!polygon_is_simple(poly)) {
            throw DegenerateElementError("element " + std::to_string(eid) +
                                         " is self-intersecting");
        }
    }
    const auto incidence = edge_incidence(*this);
    for (const auto& [tag, edges] : boundary_edges) {
        for (const auto& e : edges) {
            const auto it = incidence.find(undirected(e[0], e[1]));
            if (it == incidence.end() || it->second != 1) {
                throw InvalidDomainError("boundary edge (" + std::to_string(e[0]) + "," +
                                         std::to_string(e[1]) + ") of tag '" + tag +
                                         "' does not lie on exactly one element");
            }
        }
    }
}

void PolygonalMesh::check_watertight() const {
    std::set<EdgeKey> tagged;
    for (const auto& [tag, edges] : boundary_edges) {
        for (const auto& e : edges) tagged.insert(undirected(e[0], e[1]));
    }
    for (const auto& [key, count] : edge_incidence(*this)) {
        if (count == 2) continue;
        if (count == 1 && tagged.count(key)) continue;
        throw InvalidMergeError("edge (" + std::to_string(key.first) + "," +
                                std::to_string(key.second) + ") has incidence " +
                                std::to_string(count) + " and is not a tagged boundary edge");
    }
}

std::uint64_t PolygonalMesh::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix_bytes = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    auto mix_int = [&](std::int64_t v) { mix_bytes(&v, sizeof(v)); };
    for (const Vec2& p : nodes) {
        const double c[2] = {p.x(), p.y()};
        mix_bytes(c, sizeof(c));
    }
    for (const Element& e : elements) {
        mix_int(static_cast<std::int64_t>(e.vertices.size()));
        for (int v : e.vertices) mix_int(v);
        mix_bytes(e.region.data(), e.region.size());
    }
    for (const auto& [tag, edges] : boundary_edges) {
        mix_bytes(tag.data(), tag.size());
        for (const auto& e : edges) {
            mix_int(e[0]);
            mix_int(e[1]);
        }
    }
    return h;
}

PolygonalMesh generate_quad_mesh(double x0, double x1, double y0, double y1, int nx, int ny,
                                 const std::string& region_tag) {
    if (!(x1 > x0) || !(y1 > y0)) {
        throw InvalidDomainError("generate_quad_mesh: degenerate coordinate range");
    }
    if (nx < 1 || ny < 1) {
        throw InvalidDomainError("generate_quad_mesh: nx and ny must be >= 1");
    }
    return generate_mapped_quad_mesh(
        nx, ny,
        [&](double u, double v) { return Vec2(x0 + u * (x1 - x0), y0 + v * (y1 - y0)); },
        region_tag);
}

PolygonalMesh generate_mapped_quad_mesh(int nu, int nv,
                                        const std::function<Vec2(double, double)>& map,
                                        const std::string& region_tag) {
    if (nu < 1 || nv < 1) {
        throw InvalidDomainError("generate_mapped_quad_mesh: grid counts must be >= 1");
    }
    PolygonalMesh mesh;
    auto id = [nu](int i, int j) { return j * (nu + 1) + i; };
    for (int j = 0; j <= nv; ++j) {
        for (int i = 0; i <= nu; ++i) {
            mesh.nodes.push_back(map(static_cast<double>(i) / nu, static_cast<double>(j) / nv));
        }
    }
    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i < nu; ++i) {
            Element e;
            e.vertices = {id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)};
            e.region = region_tag;
            mesh.elements.push_back(std::move(e));
        }
    }
    auto& b = mesh.boundary_edges;
    for (int j = 0; j < nv; ++j) {
        b["left"].push_back({id(0, j), id(0, j + 1)});
        b["right"].push_back({id(nu, j), id(nu, j + 1)});
    }
    for (int i = 0; i < nu; ++i) {
        b["bottom"].push_back({id(i, 0), id(i + 1, 0)});
        b["top"].push_back({id(i, nv), id(i + 1, nv)});
    }
    mesh.validate();
    return mesh;
}

double default_merge_tolerance(const PolygonalMesh& a, const PolygonalMesh& b) {
    return 1e-9 * std::max(a.diameter(), b.diameter());
}

namespace {

struct Chain {
    std::vector<std::array<int, 2>> edges;  // node ids in the combined mesh
};

double chain_distance(const Vec2& p, const Chain& chain, const std::vector<Vec2>& nodes) {
    double best = std::numeric_limits<double>::max();
    for (const auto& e : chain.edges) {
        best = std::min(best, point_segment_distance(p, nodes[static_cast<std::size_t>(e[0])],
                                                     nodes[static_cast<std::size_t>(e[1])]));
    }
    return best;
}

// Insert the nodes of `other_chain` that lie strictly inside an element edge
// belonging to `own_chain` edges, ordered along the edge.
void insert_hanging_nodes(PolygonalMesh& mesh, const std::set<EdgeKey>& own_interface_edges,
                          const std::vector<int>& other_nodes, double tol) {
    for (Element& el : mesh.elements) {
        bool touched = true;
        while (touched) {
            touched = false;
            const std::size_t n = el.vertices.size();
            for (std::size_t i = 0; i < n; ++i) {
                const int a = el.vertices[i];
                const int b = el.vertices[(i + 1) % n];
                if (!own_interface_edges.count(undirected(a, b))) continue;
                const Vec2& pa = mesh.nodes[static_cast<std::size_t>(a)];
                const Vec2& pb = mesh.nodes[static_cast<std::size_t>(b)];
                const double len = (pb - pa).norm();
                // Collect candidate nodes strictly between a and b.
                std::vector<std::pair<double, int>> inserts;
                for (int v : other_nodes) {
                    if (v == a || v == b) continue;
                    const Vec2& p = mesh.nodes[static_cast<std::size_t>(v)];
                    if (point_segment_distance(p, pa, pb) > tol) continue;
                    const double t = (p - pa).dot(pb - pa) / (len * len);
                    if (t <= tol / len || t >= 1.0 - tol / len) continue;
                    inserts.emplace_back(t, v);
                }
                if (inserts.empty()) continue;
                std::sort(inserts.begin(), inserts.end());
                std::vector<int> seq;
                for (const auto& [t, v] : inserts) seq.push_back(v);
                el.vertices.insert(el.vertices.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                   seq.begin(), seq.end());
                touched = true;
                break;
            }
        }
    }
}

}  // namespace

PolygonalMesh merge_nonmatching_interface(const PolygonalMesh& a, const PolygonalMesh& b,
                                          const std::string& interface_tag_a,
                                          const std::string& interface_tag_b, double tol) {
    if (!(tol > 0.0)) throw ConfigError("merge tolerance must be positive");
    if (!a.boundary_edges.count(interface_tag_a)) {
        throw ConfigError("mesh A has no boundary tag '" + interface_tag_a + "'");
    }
    if (!b.boundary_edges.count(interface_tag_b)) {
        throw ConfigError("mesh B has no boundary tag '" + interface_tag_b + "'");
    }
    PolygonalMesh out;
    out.nodes = a.nodes;
    out.nodes.insert(out.nodes.end(), b.nodes.begin(), b.nodes.end());
    const int offset = a.num_nodes();
    const std::vector<int> remap = dedup_points(out.nodes, tol);
    auto map_a = [&remap](int v) { return remap[static_cast<std::size_t>(v)]; };
    auto map_b = [&remap, offset](int v) { return remap[static_cast<std::size_t>(v + offset)]; };

    Chain chain_a, chain_b;
    for (const auto& e : a.boundary_edges.at(interface_tag_a)) {
        chain_a.edges.push_back({map_a(e[0]), map_a(e[1])});
    }
    for (const auto& e : b.boundary_edges.at(interface_tag_b)) {
        chain_b.edges.push_back({map_b(e[0]), map_b(e[1])});
    }
    // The two chains must be geometrically coincident curves.
    for (const auto& e : chain_a.edges) {
        for (int v : {e[0], e[1]}) {
            if (chain_distance(out.nodes[static_cast<std::size_t>(v)], chain_b, out.nodes) > tol) {
                throw GeometricMismatchError(
                    "interface chains deviate by more than the merge tolerance");
            }
        }
    }
    for (const auto& e : chain_b.edges) {
        for (int v : {e[0], e[1]}) {
            if (chain_distance(out.nodes[static_cast<std::size_t>(v)], chain_a, out.nodes) > tol) {
                throw GeometricMismatchError(
                    "interface chains deviate by more than the merge tolerance");
            }
        }
    }

    for (const Element& e : a.elements) {
        Element el;
        el.region = e.region;
        for (int v : e.vertices) el.vertices.push_back(map_a(v));
        out.elements.push_back(std::move(el));
    }
    for (const Element& e : b.elements) {
        Element el;
        el.region = e.region;
        for (int v : e.vertices) el.vertices.push_back(map_b(v));
        out.elements.push_back(std::move(el));
    }

    std::set<EdgeKey> iface_a, iface_b;
    std::set<int> nodes_a, nodes_b;
    for (const auto& e : chain_a.edges) {
        iface_a.insert(undirected(e[0], e[1]));
        nodes_a.insert({e[0], e[1]});
    }
    for (const auto& e : chain_b.edges) {
        iface_b.insert(undirected(e[0], e[1]));
        nodes_b.insert({e[0], e[1]});
    }
    insert_hanging_nodes(out, iface_a, {nodes_b.begin(), nodes_b.end()}, tol);
    insert_hanging_nodes(out, iface_b, {nodes_a.begin(), nodes_a.end()}, tol);

    // Non-interface boundary tags carry over; the merged interface is interior.
    for (const auto& [tag, edges] : a.boundary_edges) {
        if (tag == interface_tag_a) continue;
        for (const auto& e : edges) out.boundary_edges[tag].push_back({map_a(e[0]), map_a(e[1])});
    }
    for (const auto& [tag, edges] : b.boundary_edges) {
        if (tag == interface_tag_b) continue;
        for (const auto& e : edges) out.boundary_edges[tag].push_back({map_b(e[0]), map_b(e[1])});
    }
    for (const auto& [tag, mat] : a.region_materials) out.region_materials[tag] = mat;
    for (const auto& [tag, mat] : b.region_materials) out.region_materials[tag] = mat;

    for (int eid = 0; eid < out.num_elements(); ++eid) {
        const Polygon poly = out.element_polygon(eid);
        if (polygon_signed_area(poly) <= 0.0 || !polygon_is_simple(poly)) {
            throw InvalidMergeError("merged element " + std::to_string(eid) +
                                    " became degenerate or self-intersecting");
        }
    }
    out.check_watertight();
    return out;
}

PolygonalMesh rotate_region_mesh(const PolygonalMesh& mesh, const std::string& region_tag,
                                 double angle, const Vec2& center) {
    if (angle == 0.0) return mesh;
    bool has_region = false;
    for (const Element& e : mesh.elements) has_region |= (e.region == region_tag);
    if (!has_region) throw ConfigError("mesh has no region '" + region_tag + "'");

    // Split into the region submesh and the rest, duplicating shared nodes.
    PolygonalMesh part[2];  // 0: other, 1: region
    std::vector<std::array<int, 2>> node_map(mesh.nodes.size(), {-1, -1});
    auto local_node = [&](int side, int v) {
        int& slot = node_map[static_cast<std::size_t>(v)][static_cast<std::size_t>(side)];
        if (slot < 0) {
            slot = part[side].num_nodes();
            part[side].nodes.push_back(mesh.nodes[static_cast<std::size_t>(v)]);
        }
        return slot;
    };
    std::vector<int> side_of_element(mesh.elements.size());
    for (std::size_t i = 0; i < mesh.elements.size(); ++i) {
        const Element& e = mesh.elements[i];
        const int side = e.region == region_tag ? 1 : 0;
        side_of_element[i] = side;
        Element el;
        el.region = e.region;
        for (int v : e.vertices) el.vertices.push_back(local_node(side, v));
        part[side].elements.push_back(std::move(el));
    }
    // Interface edges: incident to one element of each side.
    std::map<EdgeKey, std::array<int, 2>> side_count;
    for (std::size_t i = 0; i < mesh.elements.size(); ++i) {
        const Element& e = mesh.elements[i];
        const std::size_t n = e.vertices.size();
        for (std::size_t k = 0; k < n; ++k) {
            auto key = undirected(e.vertices[k], e.vertices[(k + 1) % n]);
            auto it = side_count.emplace(key, std::array<int, 2>{0, 0}).first;
            ++it->second[static_cast<std::size_t>(side_of_element[i])];
        }
    }
    const std::string iface = "__iface";
    for (const auto& [key, counts] : side_count) {
        if (counts[0] >= 1 && counts[1] >= 1) {
            part[0].boundary_edges[iface].push_back(
                {local_node(0, key.first), local_node(0, key.second)});
            part[1].boundary_edges[iface].push_back(
                {local_node(1, key.first), local_node(1, key.second)});
        }
    }
    if (!part[0].boundary_edges.count(iface)) {
        throw GeometricMismatchError("region '" + region_tag + "' shares no interface edges");
    }
    // Original boundary tags follow the side owning the edge.
    for (const auto& [tag, edges] : mesh.boundary_edges) {
        for (const auto& e : edges) {
            const auto it = side_count.find(undirected(e[0], e[1]));
            const int side = (it != side_count.end() && it->second[1] > 0) ? 1 : 0;
            part[side].boundary_edges[tag].push_back(
                {local_node(side, e[0]), local_node(side, e[1])});
        }
    }
    const double c = std::cos(angle), s = std::sin(angle);
    for (Vec2& p : part[1].nodes) {
        const Vec2 d = p - center;
        p = center + Vec2(c * d.x() - s * d.y(), s * d.x() + c * d.y());
    }
    const double tol = 1e-9 * mesh.diameter();
    PolygonalMesh merged = merge_nonmatching_interface(part[0], part[1], iface, iface, tol);
    merged.region_materials = mesh.region_materials;
    return merged;
}

void retag_boundary_edges(PolygonalMesh& mesh, const std::string& new_tag,
                          const std::function<bool(const Vec2&, const Vec2&)>& pred) {
    std::vector<std::array<int, 2>> moved;
    for (auto& [tag, edges] : mesh.boundary_edges) {
        if (tag == new_tag) continue;
        std::vector<std::array<int, 2>> keep;
        for (const auto& e : edges) {
            if (pred(mesh.nodes[static_cast<std::size_t>(e[0])],
                     mesh.nodes[static_cast<std::size_t>(e[1])])) {
                moved.push_back(e);
            } else {
                keep.push_back(e);
            }
        }
        edges = std::move(keep);
    }
    for (const auto& e : moved) mesh.boundary_edges[new_tag].push_back(e);
    for (auto it = mesh.boundary_edges.begin(); it != mesh.boundary_edges.end();) {
        it = it->second.empty() ? mesh.boundary_edges.erase(it) : std::next(it);
    }
}

std::string mesh_to_json(const PolygonalMesh& mesh) {
    json j;
    j["nodes"] = json::array();
    for (const Vec2& p : mesh.nodes) j["nodes"].push_back({p.x(), p.y()});
    j["elements"] = json::array();
    for (const Element& e : mesh.elements) {
        j["elements"].push_back({{"v", e.vertices}, {"region", e.region}});
    }
    j["boundary"] = json::object();
    for (const auto& [tag, edges] : mesh.boundary_edges) {
        json list = json::array();
        for (const auto& e : edges) list.push_back({e[0], e[1]});
        j["boundary"][tag] = std::move(list);
    }
    return j.dump(2) + "\n";
}

PolygonalMesh mesh_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("mesh JSON parse error: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "nodes" && key != "elements" && key != "boundary") {
            throw IoError("mesh JSON has unknown top-level key '" + key + "'");
        }
    }
    if (!j.contains("nodes") || !j.contains("elements")) {
        throw IoError("mesh JSON must contain 'nodes' and 'elements'");
    }
    PolygonalMesh mesh;
    for (const auto& node : j["nodes"]) {
        if (!node.is_array() || node.size() != 2) throw IoError("mesh node must be [x, y]");
        mesh.nodes.emplace_back(node[0].get<double>(), node[1].get<double>());
    }
    for (const auto& el : j["elements"]) {
        Element e;
        e.vertices = el.at("v").get<std::vector<int>>();
        e.region = el.value("region", "domain");
        mesh.elements.push_back(std::move(e));
    }
    if (j.contains("boundary")) {
        for (const auto& [tag, edges] : j["boundary"].items()) {
            for (const auto& e : edges) {
                mesh.boundary_edges[tag].push_back({e[0].get<int>(), e[1].get<int>()});
            }
        }
    }
    mesh.validate();
    return mesh;
}

void save_mesh(const PolygonalMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << mesh_to_json(mesh);
}

PolygonalMesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::stringstream ss;
    ss << in.rdbuf();
    return mesh_from_json(ss.str());
}

}  // namespace polyvem
