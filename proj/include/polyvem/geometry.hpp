#pragma once

#include <Eigen/Dense>
#include <vector>

namespace polyvem {

using Vec2 = Eigen::Vector2d;
using Polygon = std::vector<Vec2>;

// Signed area by the shoelace formula; positive for CCW orientation.
double polygon_signed_area(const Polygon& poly);

// Area-weighted centroid. Throws DegenerateElementError if the area vanishes.
Vec2 polygon_centroid(const Polygon& poly);

// Maximum pairwise vertex distance.
double polygon_diameter(const Polygon& poly);

bool polygon_is_simple(const Polygon& poly);
bool polygon_is_convex(const Polygon& poly);

// Boundary-inclusive point membership (crossing test with tolerance eps).
bool point_in_polygon(const Vec2& p, const Polygon& poly, double eps = 1e-12);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

// Keep the part of poly with n.dot(x - p) <= 0.
Polygon clip_half_plane(const Polygon& poly, const Vec2& p, const Vec2& n);

// Sutherland-Hodgman: clip an arbitrary simple subject against a convex CCW
// clipper. The result may be weakly degenerate when the true intersection is
// disconnected; callers validate downstream.
Polygon clip_to_convex(const Polygon& subject, const Polygon& convex_clipper);

// Remove from a simple polygon the part covered by a convex hole. Returns a
// single simple polygon; throws InvalidDomainError when the difference is not
// a single piece (hole splitting the polygon, or hole strictly inside it).
Polygon subtract_convex_hole(const Polygon& poly, const Polygon& hole, double tol);

// Drop consecutive vertices closer than tol and exactly-collinear spikes
// (A,B,A patterns) produced by degenerate clips.
Polygon dedup_vertices(const Polygon& poly, double tol);

// Collapse points within tol onto representatives (first occurrence wins).
// Rewrites `points` to the kept set and returns old-index -> new-index.
std::vector<int> dedup_points(std::vector<Vec2>& points, double tol);

}  // namespace polyvem
