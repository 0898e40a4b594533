#pragma once

#include <algorithm>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphpack/vec3.hpp"

namespace sphpack::geom {

inline constexpr double kPi = std::numbers::pi;

// Tolerances, all at unit scale (ball radius = 1).
inline constexpr double kVertexMergeTol = 1e-9;     // polytope vertex dedup
inline constexpr double kConstraintTol = 1e-9;      // halfspace satisfaction
inline constexpr double kDegenerateTripleTol = 1e-12;
inline constexpr double kBoundingBoxHalfWidth = 100.0;

class GeometryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class UnboundedRegion : public GeometryError {
  public:
    using GeometryError::GeometryError;
};

class EmptyRegion : public GeometryError {
  public:
    using GeometryError::GeometryError;
};

struct Ball {
    Vec3 center;
    double radius = 1.0;

    Ball() = default;
    Ball(const Vec3& c, double r) : center(c), radius(r) {
        if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
    }
    double volume() const { return 4.0 / 3.0 * kPi * radius * radius * radius; }
};

inline double ball_volume(double r) { return 4.0 / 3.0 * kPi * r * r * r; }

// Points p with dot(normal, p) <= offset. The normal is kept unit length.
struct HalfSpace {
    Vec3 normal;
    double offset = 0.0;

    HalfSpace() = default;
    HalfSpace(const Vec3& n, double off) : normal(n), offset(off) {
        if (std::fabs(norm(n) - 1.0) > 1e-12)
            throw std::invalid_argument("halfspace normal must be unit length");
    }

    static HalfSpace from_direction(const Vec3& dir, double off) {
        const double len = norm(dir);
        if (len == 0.0) throw std::invalid_argument("halfspace direction must be nonzero");
        return HalfSpace(dir / len, off / len);
    }

    bool contains(const Vec3& p, double tol = kConstraintTol) const {
        return dot(normal, p) <= offset + tol;
    }
};

// Halfspace of points at least as close to `site` as to `other`.
inline HalfSpace bisector(const Vec3& site, const Vec3& other) {
    const Vec3 d = other - site;
    const double len = norm(d);
    if (len == 0.0) throw std::invalid_argument("bisector of coincident points");
    const Vec3 n = d / len;
    return HalfSpace(n, dot(n, (site + other) * 0.5));
}

// Bounded intersection of halfspaces with the defining constraints, the
// enumerated vertex set and the enclosed volume.
struct ConvexPolytope {
    std::vector<HalfSpace> halfspaces;
    std::vector<Vec3> vertices;
    // Vertex indices per active halfspace, ordered around the outward normal.
    std::vector<std::vector<int>> facets;
    double volume = 0.0;

    int face_count() const { return static_cast<int>(facets.size()); }
};

// vol(B(p,r1) ∩ B(q,r2)) for |p-q| = d. Total in all arguments.
inline double lens_volume(double d, double r1, double r2) {
    if (d < 0.0 || !(r1 > 0.0) || !(r2 > 0.0))
        throw std::invalid_argument("lens_volume: need d >= 0 and positive radii");
    if (d >= r1 + r2) return 0.0;
    if (d <= std::fabs(r1 - r2)) return ball_volume(std::min(r1, r2));
    // Two spherical caps joined at the radical plane, collapsed to one closed form.
    const double s = r1 + r2 - d;
    const double t = d * d + 2.0 * d * (r1 + r2) - 3.0 * (r1 - r2) * (r1 - r2);
    const double v = kPi * s * s * t / (12.0 * d);
    return std::max(v, 0.0);
}

// Solid angle subtended at `apex` by triangle (a, b, c), in [0, 2*pi).
// Triple-product arctangent form (Van Oosterom & Strackee).
inline double solid_angle(const Vec3& apex, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ra = a - apex;
    const Vec3 rb = b - apex;
    const Vec3 rc = c - apex;
    const double la = norm(ra), lb = norm(rb), lc = norm(rc);
    if (la == 0.0 || lb == 0.0 || lc == 0.0)
        throw std::invalid_argument("solid_angle: triangle vertex coincides with apex");
    const double triple = dot(ra, cross(rb, rc));
    if (std::fabs(triple) / (la * lb * lc) < kDegenerateTripleTol)
        throw std::invalid_argument("solid_angle: apex coplanar with triangle (zero-measure cone)");
    const double den =
        la * lb * lc + dot(ra, rb) * lc + dot(ra, rc) * lb + dot(rb, rc) * la;
    return 2.0 * std::atan2(std::fabs(triple), den);
}

namespace detail {

// Solve the 3x3 system n_i . x = off_i by Cramer's rule.
// Returns false when the normals are (nearly) linearly dependent.
inline bool plane_triple_point(const HalfSpace& h0, const HalfSpace& h1, const HalfSpace& h2,
                               Vec3& out) {
    const Vec3& n0 = h0.normal;
    const Vec3& n1 = h1.normal;
    const Vec3& n2 = h2.normal;
    const Vec3 c12 = cross(n1, n2);
    const double det = dot(n0, c12);
    if (std::fabs(det) < 1e-10) return false;
    const Vec3 c20 = cross(n2, n0);
    const Vec3 c01 = cross(n0, n1);
    out = (c12 * h0.offset + c20 * h1.offset + c01 * h2.offset) / det;
    return true;
}

inline void order_facet_vertices(const std::vector<Vec3>& verts, const Vec3& normal,
                                 std::vector<int>& facet) {
    Vec3 centroid{0, 0, 0};
    for (int i : facet) centroid += verts[i];
    centroid = centroid / static_cast<double>(facet.size());
    const Vec3 e1 = any_orthogonal(normal);
    const Vec3 e2 = cross(normal, e1);
    std::sort(facet.begin(), facet.end(), [&](int i, int j) {
        const Vec3 di = verts[i] - centroid;
        const Vec3 dj = verts[j] - centroid;
        return std::atan2(dot(di, e2), dot(di, e1)) < std::atan2(dot(dj, e2), dot(dj, e1));
    });
}

}  // namespace detail

// Intersection of halfspaces, required bounded with nonempty interior.
// Vertices are enumerated from constraint triples and deduplicated at
// kVertexMergeTol; the volume is the exact hull volume via a centroid fan
// over facets (robust to non-simplicial facets).
//
// Unboundedness is detected by intersecting with a box of half-width 100
// around `box_center`: any resulting vertex on the box flags the region
// as unbounded.
inline ConvexPolytope halfspace_intersection(std::span<const HalfSpace> halfspaces,
                                             const Vec3& box_center = Vec3{0, 0, 0}) {
    std::vector<HalfSpace> all(halfspaces.begin(), halfspaces.end());
    const std::size_t n_input = all.size();
    for (int axis = 0; axis < 3; ++axis) {
        for (double sign : {1.0, -1.0}) {
            Vec3 n{0, 0, 0};
            if (axis == 0) n.x = sign;
            if (axis == 1) n.y = sign;
            if (axis == 2) n.z = sign;
            all.emplace_back(n, dot(n, box_center) + kBoundingBoxHalfWidth);
        }
    }

    const std::size_t m = all.size();
    std::vector<Vec3> verts;
    std::vector<bool> on_box;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            for (std::size_t k = j + 1; k < m; ++k) {
                Vec3 x;
                if (!detail::plane_triple_point(all[i], all[j], all[k], x)) continue;
                bool ok = true;
                for (std::size_t q = 0; q < m; ++q) {
                    if (dot(all[q].normal, x) > all[q].offset + kConstraintTol) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                bool duplicate = false;
                for (const Vec3& v : verts) {
                    if (distance(v, x) < kVertexMergeTol) {
                        duplicate = true;
                        break;
                    }
                }
                if (duplicate) continue;
                verts.push_back(x);
                on_box.push_back(i >= n_input || j >= n_input || k >= n_input);
            }
        }
    }

    for (std::size_t i = 0; i < verts.size(); ++i) {
        if (on_box[i])
            throw UnboundedRegion("halfspace_intersection: unbounded region (vertex on bounding box)");
    }
    if (verts.size() < 4)
        throw EmptyRegion("halfspace_intersection: empty or lower-dimensional intersection");

    ConvexPolytope poly;
    poly.halfspaces.assign(halfspaces.begin(), halfspaces.end());
    poly.vertices = verts;

    Vec3 centroid{0, 0, 0};
    for (const Vec3& v : verts) centroid += v;
    centroid = centroid / static_cast<double>(verts.size());

    double volume = 0.0;
    for (std::size_t h = 0; h < n_input; ++h) {
        std::vector<int> facet;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            if (std::fabs(dot(all[h].normal, verts[i]) - all[h].offset) <= kConstraintTol)
                facet.push_back(static_cast<int>(i));
        }
        if (facet.size() < 3) continue;
        detail::order_facet_vertices(verts, all[h].normal, facet);
        // Skip duplicate facets from redundant parallel constraints.
        bool seen = false;
        for (const auto& f : poly.facets) {
            if (f == facet) {
                seen = true;
                break;
            }
        }
        if (seen) continue;

        Vec3 fc{0, 0, 0};
        for (int i : facet) fc += verts[i];
        fc = fc / static_cast<double>(facet.size());
        for (std::size_t e = 0; e < facet.size(); ++e) {
            const Vec3& v1 = verts[facet[e]];
            const Vec3& v2 = verts[facet[(e + 1) % facet.size()]];
            volume += dot(fc - centroid, cross(v1 - centroid, v2 - centroid)) / 6.0;
        }
        poly.facets.push_back(std::move(facet));
    }

    if (!(volume > 1e-12))
        throw EmptyRegion("halfspace_intersection: intersection has empty interior");
    poly.volume = volume;
    return poly;
}

inline double polytope_circumradius(const ConvexPolytope& p, const Vec3& center) {
    double r = 0.0;
    for (const Vec3& v : p.vertices) r = std::max(r, distance(v, center));
    return r;
}

}  // namespace sphpack::geom
