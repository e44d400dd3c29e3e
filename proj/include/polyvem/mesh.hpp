#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "polyvem/geometry.hpp"

namespace polyvem {

struct Element {
    std::vector<int> vertices;  // CCW node ids
    std::string region;
};

struct ElementGeometry {
    double area = 0.0;
    Vec2 centroid{0.0, 0.0};
    double diameter = 0.0;  // max pairwise vertex distance
};

struct PolygonalMesh {
    std::vector<Vec2> nodes;
    std::vector<Element> elements;
    // tag -> list of (node, node) edges on the outer boundary / interfaces
    std::map<std::string, std::vector<std::array<int, 2>>> boundary_edges;
    std::map<std::string, int> region_materials;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_elements() const { return static_cast<int>(elements.size()); }

    Polygon element_polygon(int element_id) const;
    ElementGeometry element_geometry(int element_id) const;
    double total_area() const;
    double diameter() const;

    // All node ids referenced by a boundary tag's edges.
    std::vector<int> boundary_nodes(const std::string& tag) const;

    // Checks: dense ids, finite coordinates, >=3 distinct vertices per element,
    // positive CCW area, simple polygons, boundary edges each on exactly one
    // element. Throws on violation.
    void validate() const;

    // Every edge is incident to exactly one element (then it must appear in a
    // boundary tag) or exactly two. Throws InvalidMergeError otherwise.
    void check_watertight() const;

    // FNV-1a over node coordinates, connectivity, regions and boundary tags.
    std::uint64_t hash() const;
};

// Structured quadrilateral grid over [x0,x1] x [y0,y1] with boundary tags
// left/right/bottom/top.
PolygonalMesh generate_quad_mesh(double x0, double x1, double y0, double y1, int nx, int ny,
                                 const std::string& region_tag);

// Structured quad grid over a smooth mapping of the unit square. The mapping
// receives (u, v) in [0,1]^2. Boundary tags: u=0 -> "left", u=1 -> "right",
// v=0 -> "bottom", v=1 -> "top".
PolygonalMesh generate_mapped_quad_mesh(int nu, int nv,
                                        const std::function<Vec2(double, double)>& map,
                                        const std::string& region_tag);

struct PolygonWithHoles {
    Polygon outer;                   // CCW
    std::vector<Polygon> holes;      // convex, CCW
};

// Centroidal Voronoi tessellation clipped to the domain, with Lloyd
// relaxation. Deterministic for a fixed RNG seed.
PolygonalMesh generate_polygonal_mesh(const PolygonWithHoles& domain, int n_seeds,
                                      int lloyd_iterations, std::uint64_t seed,
                                      const std::string& region_tag = "domain");

// Default merge tolerance: 1e-9 x domain diameter.
double default_merge_tolerance(const PolygonalMesh& a, const PolygonalMesh& b);

// Join two independently generated meshes along geometrically coincident
// interface chains. Hanging nodes are promoted to polygon vertices of the
// abutting elements; duplicate nodes within tol are merged. Element count of
// the result is |a| + |b|.
PolygonalMesh merge_nonmatching_interface(const PolygonalMesh& a, const PolygonalMesh& b,
                                          const std::string& interface_tag_a,
                                          const std::string& interface_tag_b, double tol);

// Move boundary edges whose endpoints satisfy pred into new_tag; empty tags
// are dropped afterwards.
void retag_boundary_edges(PolygonalMesh& mesh, const std::string& new_tag,
                          const std::function<bool(const Vec2&, const Vec2&)>& pred);

// Rigidly rotate the nodes of one region of a merged mesh and re-merge the
// interface. angle == 0 returns the input unchanged.
PolygonalMesh rotate_region_mesh(const PolygonalMesh& mesh, const std::string& region_tag,
                                 double angle, const Vec2& center);

// Mesh JSON document:
//   { "nodes": [[x,y],...],
//     "elements": [{"v":[i,...],"region":"tag"},...],
//     "boundary": {"tag":[[i,j],...]} }
// The reader rejects unknown top-level keys, naming the key.
std::string mesh_to_json(const PolygonalMesh& mesh);
PolygonalMesh mesh_from_json(const std::string& text);
void save_mesh(const PolygonalMesh& mesh, const std::string& path);
PolygonalMesh load_mesh(const std::string& path);

}  // namespace polyvem
