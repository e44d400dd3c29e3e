#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "polyvem/errors.hpp"
#include "polyvem/mesh.hpp"

namespace polyvem {

namespace {

// Platform-independent uniform double in [0, 1).
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inside the outer boundary and not strictly inside any hole; points within
// eps of a hole boundary still count as inside the domain.
bool point_in_domain(const Vec2& p, const PolygonWithHoles& domain, double eps) {
    if (!point_in_polygon(p, domain.outer, eps)) return false;
    for (const Polygon& hole : domain.holes) {
        if (!point_in_polygon(p, hole, 0.0)) continue;
        double d = std::numeric_limits<double>::max();
        for (std::size_t i = 0; i < hole.size(); ++i) {
            d = std::min(d, point_segment_distance(p, hole[i], hole[(i + 1) % hole.size()]));
        }
        if (d > eps) return false;
    }
    return true;
}

// Voronoi cell of seeds[i] clipped to the domain. Distant seeds cannot cut the
// cell once twice their distance exceeds the cell's farthest vertex, so
// neighbors are processed nearest first with an early exit.
Polygon voronoi_cell(const std::vector<Vec2>& seeds, std::size_t i, const PolygonWithHoles& domain,
                     const Polygon& bbox, double tol) {
    const Vec2& s = seeds[i];
    Polygon cell = bbox;
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(seeds.size() - 1);
    for (std::size_t j = 0; j < seeds.size(); ++j) {
        if (j != i) order.emplace_back((seeds[j] - s).squaredNorm(), j);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [d2, j] : order) {
        if (cell.empty()) break;
        double max_r2 = 0.0;
        for (const Vec2& v : cell) max_r2 = std::max(max_r2, (v - s).squaredNorm());
        if (d2 > 4.0 * max_r2) break;
        const Vec2 mid = 0.5 * (s + seeds[j]);
        cell = clip_half_plane(cell, mid, seeds[j] - s);
    }
    if (cell.empty()) return cell;
    cell = clip_to_convex(domain.outer, cell);
    cell = dedup_vertices(cell, tol);
    for (const Polygon& hole : domain.holes) {
        if (cell.empty()) break;
        cell = subtract_convex_hole(cell, hole, tol);
        cell = dedup_vertices(cell, tol);
    }
    return cell;
}

}  // namespace

PolygonalMesh generate_polygonal_mesh(const PolygonWithHoles& domain, int n_seeds,
                                      int lloyd_iterations, std::uint64_t seed,
                                      const std::string& region_tag) {
    if (n_seeds < 1) throw InvalidDomainError("generate_polygonal_mesh: n_seeds must be >= 1");
    if (domain.outer.size() < 3 || !polygon_is_simple(domain.outer)) {
        throw InvalidDomainError("generate_polygonal_mesh: outer boundary is not simple");
    }
    if (polygon_signed_area(domain.outer) <= 0.0) {
        throw InvalidDomainError("generate_polygonal_mesh: outer boundary must be CCW");
    }
    for (const Polygon& hole : domain.holes) {
        if (!polygon_is_convex(hole)) {
            throw InvalidDomainError("generate_polygonal_mesh: holes must be convex polygons");
        }
    }

    Vec2 lo = domain.outer.front(), hi = domain.outer.front();
    for (const Vec2& p : domain.outer) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double diam = (hi - lo).norm();
    const double tol = 1e-12 * diam;
    const Vec2 pad = 0.05 * (hi - lo) + Vec2(tol, tol);
    const Polygon bbox = {lo - pad, Vec2(hi.x() + pad.x(), lo.y() - pad.y()), hi + pad,
                          Vec2(lo.x() - pad.x(), hi.y() + pad.y())};

    std::mt19937_64 rng(seed);
    auto sample_interior = [&]() {
        for (int attempt = 0; attempt < 100000; ++attempt) {
            const Vec2 p(lo.x() + uniform01(rng) * (hi.x() - lo.x()),
                         lo.y() + uniform01(rng) * (hi.y() - lo.y()));
            if (point_in_domain(p, domain, -tol)) return p;
        }
        throw InvalidDomainError("generate_polygonal_mesh: could not sample seeds inside domain");
    };
    std::vector<Vec2> seeds;
    seeds.reserve(static_cast<std::size_t>(n_seeds));
    for (int k = 0; k < n_seeds; ++k) seeds.push_back(sample_interior());

    std::vector<Polygon> cells(static_cast<std::size_t>(n_seeds));
    const int retries = 50;
    for (int iter = 0; iter <= lloyd_iterations; ++iter) {
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            Polygon cell = voronoi_cell(seeds, i, domain, bbox, tol);
            int attempt = 0;
            while ((cell.size() < 3 || polygon_signed_area(cell) <= 0.0) && attempt < retries) {
                seeds[i] = sample_interior();
                cell = voronoi_cell(seeds, i, domain, bbox, tol);
                ++attempt;
            }
            if (cell.size() < 3 || polygon_signed_area(cell) <= 0.0) {
                throw InvalidDomainError(
                    "generate_polygonal_mesh: empty Voronoi cell after retries");
            }
            cells[i] = std::move(cell);
        }
        if (iter < lloyd_iterations) {
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                const Vec2 c = polygon_centroid(cells[i]);
                if (point_in_domain(c, domain, -tol)) seeds[i] = c;
            }
        }
    }

    // Assemble the mesh; duplicate cell corners within node_tol collapse to
    // shared nodes so adjacent cells are watertight.
    PolygonalMesh mesh;
    const double node_tol = 1e-9 * diam;
    for (const Polygon& cell : cells) {
        for (const Vec2& p : cell) mesh.nodes.push_back(p);
    }
    const std::vector<int> remap = dedup_points(mesh.nodes, node_tol);
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        Element e;
        e.region = region_tag;
        for (std::size_t k = 0; k < cells[i].size(); ++k) {
            const int v = remap[cursor++];
            if (e.vertices.empty() || (e.vertices.back() != v && e.vertices.front() != v)) {
                e.vertices.push_back(v);
            }
        }
        if (e.vertices.size() < 3) {
            throw InvalidDomainError("generate_polygonal_mesh: degenerate cell after dedup");
        }
        mesh.elements.push_back(std::move(e));
    }

    // Boundary edges: element edges with no partner, tagged by proximity to the
    // outer boundary or a hole ("boundary" / "hole0", "hole1", ...).
    std::map<std::pair<int, int>, int> incidence;
    for (const Element& e : mesh.elements) {
        const std::size_t n = e.vertices.size();
        for (std::size_t k = 0; k < n; ++k) {
            int a = e.vertices[k], b = e.vertices[(k + 1) % n];
            if (a > b) std::swap(a, b);
            ++incidence[{a, b}];
        }
    }
    const double edge_tol = 1e-6 * diam;
    for (const Element& e : mesh.elements) {
        const std::size_t n = e.vertices.size();
        for (std::size_t k = 0; k < n; ++k) {
            int a = e.vertices[k], b = e.vertices[(k + 1) % n];
            int lo_id = std::min(a, b), hi_id = std::max(a, b);
            if (incidence[{lo_id, hi_id}] != 1) continue;
            const Vec2 mid = 0.5 * (mesh.nodes[static_cast<std::size_t>(a)] +
                                    mesh.nodes[static_cast<std::size_t>(b)]);
            std::string tag = "boundary";
            for (std::size_t hidx = 0; hidx < domain.holes.size(); ++hidx) {
                const Polygon& hole = domain.holes[hidx];
                for (std::size_t m = 0; m < hole.size(); ++m) {
                    if (point_segment_distance(mid, hole[m], hole[(m + 1) % hole.size()]) <=
                        edge_tol) {
                        tag = "hole" + std::to_string(hidx);
                        break;
                    }
                }
            }
            mesh.boundary_edges[tag].push_back({a, b});
        }
    }
    mesh.validate();
    return mesh;
}

}  // namespace polyvem
