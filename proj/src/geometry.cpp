#include "polyvem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "polyvem/errors.hpp"

namespace polyvem {

double polygon_signed_area(const Polygon& poly) {
    const std::size_t n = poly.size();
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

Vec2 polygon_centroid(const Polygon& poly) {
    const std::size_t n = poly.size();
    const double a = polygon_signed_area(poly);
    if (std::abs(a) < 1e-300) {
        throw DegenerateElementError("polygon_centroid: zero-area polygon");
    }
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const double w = p.x() * q.y() - q.x() * p.y();
        cx += (p.x() + q.x()) * w;
        cy += (p.y() + q.y()) * w;
    }
    return Vec2(cx, cy) / (6.0 * a);
}

double polygon_diameter(const Polygon& poly) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        for (std::size_t j = i + 1; j < poly.size(); ++j) {
            d2 = std::max(d2, (poly[i] - poly[j]).squaredNorm());
        }
    }
    return std::sqrt(d2);
}

namespace {

// Orientation of c relative to segment a->b, scaled by |a-b|.
double cross2(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double d1 = cross2(c, d, a);
    const double d2 = cross2(c, d, b);
    const double d3 = cross2(a, b, c);
    const double d4 = cross2(a, b, d);
    return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
           ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

}  // namespace

bool polygon_is_simple(const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        if ((b - a).norm() == 0.0) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip adjacent edges (they share an endpoint).
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_properly_intersect(a, b, poly[j], poly[(j + 1) % n])) return false;
        }
    }
    return true;
}

bool polygon_is_convex(const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    int sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = cross2(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
        if (c != 0.0) {
            const int s = c > 0.0 ? 1 : -1;
            if (sign == 0) sign = s;
            else if (s != sign) return false;
        }
    }
    return true;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly, double eps) {
    const std::size_t n = poly.size();
    // Boundary test first so points on edges count as inside.
    for (std::size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, poly[i], poly[(i + 1) % n]) <= eps) return true;
    }
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

Polygon clip_half_plane(const Polygon& poly, const Vec2& p, const Vec2& n) {
    Polygon out;
    const std::size_t m = poly.size();
    if (m == 0) return out;
    out.reserve(m + 2);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& cur = poly[i];
        const Vec2& nxt = poly[(i + 1) % m];
        const double dc = n.dot(cur - p);
        const double dn = n.dot(nxt - p);
        if (dc <= 0.0) {
            out.push_back(cur);
            if (dn > 0.0) out.push_back(cur + (nxt - cur) * (dc / (dc - dn)));
        } else if (dn <= 0.0) {
            out.push_back(cur + (nxt - cur) * (dc / (dc - dn)));
        }
    }
    return out;
}

Polygon clip_to_convex(const Polygon& subject, const Polygon& convex_clipper) {
    Polygon out = subject;
    const std::size_t m = convex_clipper.size();
    const double orient = polygon_signed_area(convex_clipper) >= 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < m && !out.empty(); ++i) {
        const Vec2& a = convex_clipper[i];
        const Vec2& b = convex_clipper[(i + 1) % m];
        const Vec2 edge = b - a;
        // Outward normal of a CCW clipper edge.
        const Vec2 n = orient * Vec2(edge.y(), -edge.x());
        out = clip_half_plane(out, a, n);
    }
    return out;
}

Polygon dedup_vertices(const Polygon& poly, double tol) {
    Polygon out;
    for (const Vec2& p : poly) {
        if (out.empty() || (out.back() - p).norm() > tol) out.push_back(p);
    }
    while (out.size() > 1 && (out.front() - out.back()).norm() <= tol) out.pop_back();
    // Remove spikes A,B,A.
    bool changed = true;
    while (changed && out.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const Vec2& prev = out[(i + out.size() - 1) % out.size()];
            const Vec2& next = out[(i + 1) % out.size()];
            if ((prev - next).norm() <= tol) {
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return out;
}

std::vector<int> dedup_points(std::vector<Vec2>& points, double tol) {
    if (!(tol > 0.0)) throw InvalidDomainError("dedup_points: tolerance must be positive");
    const std::size_t n = points.size();
    std::vector<int> remap(n, -1);
    std::vector<Vec2> kept;
    std::unordered_map<std::int64_t, std::vector<int>> grid;
    auto cell_key = [tol](double x, double y) {
        const auto cx = static_cast<std::int64_t>(std::floor(x / tol));
        const auto cy = static_cast<std::int64_t>(std::floor(y / tol));
        return cx * 73856093 ^ cy * 19349663;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = points[i];
        int found = -1;
        for (int dx = -1; dx <= 1 && found < 0; ++dx) {
            for (int dy = -1; dy <= 1 && found < 0; ++dy) {
                const auto it = grid.find(cell_key(p.x() + dx * tol, p.y() + dy * tol));
                if (it == grid.end()) continue;
                for (int k : it->second) {
                    if ((kept[static_cast<std::size_t>(k)] - p).norm() <= tol) {
                        found = k;
                        break;
                    }
                }
            }
        }
        if (found < 0) {
            found = static_cast<int>(kept.size());
            kept.push_back(p);
            grid[cell_key(p.x(), p.y())].push_back(found);
        }
        remap[i] = found;
    }
    points = std::move(kept);
    return remap;
}

namespace {

// Parameter interval [t0, t1] of segment a->b lying inside a convex CCW polygon.
// Returns false when the segment misses the polygon.
bool segment_in_convex(const Vec2& a, const Vec2& b, const Polygon& conv, double& t0, double& t1) {
    t0 = 0.0;
    t1 = 1.0;
    const std::size_t m = conv.size();
    const Vec2 d = b - a;
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& p = conv[i];
        const Vec2& q = conv[(i + 1) % m];
        const Vec2 e = q - p;
        const Vec2 n(e.y(), -e.x());  // outward for CCW
        const double num = n.dot(a - p);
        const double den = n.dot(d);
        if (std::abs(den) < 1e-300) {
            if (num > 0.0) return false;
        } else {
            const double t = -num / den;
            if (den > 0.0) t1 = std::min(t1, t);
            else t0 = std::max(t0, t);
            if (t0 > t1) return false;
        }
    }
    return t0 <= t1;
}

}  // namespace

Polygon subtract_convex_hole(const Polygon& poly, const Polygon& hole, double tol) {
    const Polygon inter = clip_to_convex(poly, hole);
    if (inter.empty() || std::abs(polygon_signed_area(inter)) <= tol * tol) {
        return poly;  // no overlap
    }
    const double apoly = std::abs(polygon_signed_area(poly));
    if (std::abs(std::abs(polygon_signed_area(inter)) - apoly) <= 1e-12 * apoly) {
        return {};  // polygon swallowed by the hole
    }

    struct Seg {
        Vec2 a, b;
    };
    std::vector<Seg> segs;
    // Parts of the polygon boundary outside the hole (original direction).
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        double t0, t1;
        if (!segment_in_convex(a, b, hole, t0, t1)) {
            segs.push_back({a, b});
        } else {
            if (t0 > 0.0) segs.push_back({a, a + t0 * (b - a)});
            if (t1 < 1.0) segs.push_back({a + t1 * (b - a), b});
        }
    }
    // Parts of the hole boundary inside the polygon, reversed. Crossing
    // parameters come from exact segment-segment intersections so the cut
    // points agree with the polygon-side cuts to rounding.
    const std::size_t m = hole.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = hole[i];
        const Vec2& b = hole[(i + 1) % m];
        std::vector<double> cuts = {0.0, 1.0};
        for (std::size_t j = 0; j < n; ++j) {
            const Vec2& c = poly[j];
            const Vec2& d = poly[(j + 1) % n];
            const double denom = cross2(a, b, d) - cross2(a, b, c);
            if (std::abs(denom) < 1e-300) continue;
            const double s = -cross2(a, b, c) / denom;          // param on c->d
            const double den2 = cross2(c, d, b) - cross2(c, d, a);
            if (std::abs(den2) < 1e-300) continue;
            const double t = -cross2(c, d, a) / den2;           // param on a->b
            if (s >= 0.0 && s <= 1.0 && t > 0.0 && t < 1.0) cuts.push_back(t);
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double t0 = cuts[k], t1 = cuts[k + 1];
            if (t1 - t0 < 1e-14) continue;
            const Vec2 mid = a + 0.5 * (t0 + t1) * (b - a);
            if (point_in_polygon(mid, poly, tol)) {
                segs.push_back({a + t1 * (b - a), a + t0 * (b - a)});  // reversed
            }
        }
    }
    // Stitch segments into a loop.
    std::vector<bool> used(segs.size(), false);
    Polygon out;
    out.push_back(segs[0].a);
    Vec2 cur = segs[0].b;
    used[0] = true;
    for (std::size_t count = 1; count < segs.size(); ++count) {
        double best = tol * 16.0;
        std::size_t bi = segs.size();
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (used[i]) continue;
            const double d = (segs[i].a - cur).norm();
            if (d < best) {
                best = d;
                bi = i;
            }
        }
        if (bi == segs.size()) {
            throw InvalidDomainError("subtract_convex_hole: boundary does not form a single loop");
        }
        out.push_back(segs[bi].a);
        cur = segs[bi].b;
        used[bi] = true;
    }
    if ((cur - out.front()).norm() > tol * 16.0) {
        throw InvalidDomainError("subtract_convex_hole: open boundary after subtraction");
    }
    return dedup_vertices(out, tol);
}

}  // namespace polyvem
