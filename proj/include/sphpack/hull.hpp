#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "sphpack/geom.hpp"
#include "sphpack/vec3.hpp"

namespace sphpack::hull {

struct Triangle {
    int a, b, c;       // counterclockwise seen from outside
    Vec3 normal;       // outward unit normal
};

class DegenerateHull : public geom::GeometryError {
  public:
    using geom::GeometryError::GeometryError;
};

namespace detail {

inline Vec3 tri_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
    return cross(b - a, c - a);
}

}  // namespace detail

// Incremental 3D convex hull. Input points must span 3 dimensions; interior
// and duplicate points are absorbed. Returns outward-oriented triangles.
inline std::vector<Triangle> convex_hull(std::span<const Vec3> pts, double eps = 1e-12) {
    const int n = static_cast<int>(pts.size());
    if (n < 4) throw DegenerateHull("convex_hull: need at least 4 points");

    double scale = 0.0;
    for (const Vec3& p : pts) scale = std::max({scale, std::fabs(p.x), std::fabs(p.y), std::fabs(p.z)});
    const double tol = eps * std::max(scale, 1.0) * std::max(scale, 1.0);

    // Initial simplex: two far points, then max-area, then max-volume.
    int i0 = 0, i1 = 1;
    double best = -1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (double d = norm2(pts[i] - pts[j]); d > best) best = d, i0 = i, i1 = j;
    if (best <= tol * tol) throw DegenerateHull("convex_hull: all points coincide");

    int i2 = -1;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double a = norm2(cross(pts[i1] - pts[i0], pts[i] - pts[i0]));
        if (a > best) best = a, i2 = i;
    }
    if (best <= tol * tol) throw DegenerateHull("convex_hull: points are collinear");

    int i3 = -1;
    best = -1.0;
    const Vec3 base_n = detail::tri_normal(pts[i0], pts[i1], pts[i2]);
    for (int i = 0; i < n; ++i) {
        const double v = std::fabs(dot(base_n, pts[i] - pts[i0]));
        if (v > best) best = v, i3 = i;
    }
    if (best <= tol) throw DegenerateHull("convex_hull: points are coplanar");

    struct Face {
        int a, b, c;
        Vec3 n;            // outward, unnormalized
        bool alive = true;
    };
    std::vector<Face> faces;
    auto add_face = [&](int a, int b, int c, const Vec3& inside) {
        Face f{a, b, c, detail::tri_normal(pts[a], pts[b], pts[c]), true};
        if (dot(f.n, inside - pts[a]) > 0.0) {
            std::swap(f.b, f.c);
            f.n = -f.n;
        }
        faces.push_back(f);
        return static_cast<int>(faces.size() - 1);
    };

    const Vec3 inside = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
    add_face(i0, i1, i2, inside);
    add_face(i0, i1, i3, inside);
    add_face(i0, i2, i3, inside);
    add_face(i1, i2, i3, inside);

    for (int p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        // Collect faces that see the point.
        std::vector<int> visible;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
            if (!faces[f].alive) continue;
            if (dot(faces[f].n, pts[p] - pts[faces[f].a]) > tol) visible.push_back(f);
        }
        if (visible.empty()) continue;

        // Horizon = directed edges of visible faces whose reverse is not visible.
        std::map<std::pair<int, int>, int> edge_use;
        for (int f : visible) {
            const std::array<std::pair<int, int>, 3> es = {
                std::make_pair(faces[f].a, faces[f].b),
                std::make_pair(faces[f].b, faces[f].c),
                std::make_pair(faces[f].c, faces[f].a)};
            for (const auto& e : es) ++edge_use[e];
            faces[f].alive = false;
        }
        for (const auto& [e, cnt] : edge_use) {
            if (cnt != 1) throw DegenerateHull("convex_hull: inconsistent horizon");
            if (edge_use.count({e.second, e.first})) continue;  // interior edge
            add_face(e.first, e.second, p, inside);
        }
    }

    std::vector<Triangle> out;
    std::map<std::pair<int, int>, int> edge_count;
    for (const Face& f : faces) {
        if (!f.alive) continue;
        const double len = norm(f.n);
        if (len <= tol) throw DegenerateHull("convex_hull: zero-area facet");
        out.push_back({f.a, f.b, f.c, f.n / len});
        ++edge_count[{std::min(f.a, f.b), std::max(f.a, f.b)}];
        ++edge_count[{std::min(f.b, f.c), std::max(f.b, f.c)}];
        ++edge_count[{std::min(f.c, f.a), std::max(f.c, f.a)}];
    }
    for (const auto& [e, cnt] : edge_count)
        if (cnt != 2) throw DegenerateHull("convex_hull: non-watertight result");
    return out;
}

inline double hull_volume(std::span<const Vec3> pts) {
    const auto tris = convex_hull(pts);
    Vec3 c{0, 0, 0};
    for (const Vec3& p : pts) c += p;
    c = c / static_cast<double>(pts.size());
    double v = 0.0;
    for (const Triangle& t : tris)
        v += dot(pts[t.a] - c, cross(pts[t.b] - c, pts[t.c] - c)) / 6.0;
    return v;
}

// Groups hull triangles into maximal coplanar faces (dihedral tolerance in
// radians) and returns each face as a vertex cycle, counterclockwise seen
// from outside.
inline std::vector<std::vector<int>> merged_faces(const std::vector<Triangle>& tris,
                                                  double dihedral_tol = 1e-7) {
    const int nf = static_cast<int>(tris.size());
    std::vector<int> parent(nf);
    for (int i = 0; i < nf; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    // Adjacency via shared undirected edges.
    std::map<std::pair<int, int>, std::vector<int>> by_edge;
    for (int f = 0; f < nf; ++f) {
        const std::array<std::pair<int, int>, 3> es = {
            std::make_pair(std::min(tris[f].a, tris[f].b), std::max(tris[f].a, tris[f].b)),
            std::make_pair(std::min(tris[f].b, tris[f].c), std::max(tris[f].b, tris[f].c)),
            std::make_pair(std::min(tris[f].c, tris[f].a), std::max(tris[f].c, tris[f].a))};
        for (const auto& e : es) by_edge[e].push_back(f);
    }
    for (const auto& [e, fs] : by_edge) {
        if (fs.size() != 2) continue;
        const double cosang = std::clamp(dot(tris[fs[0]].normal, tris[fs[1]].normal), -1.0, 1.0);
        if (std::acos(cosang) < dihedral_tol) {
            parent[find(fs[0])] = find(fs[1]);
        }
    }

    std::map<int, std::vector<int>> groups;
    for (int f = 0; f < nf; ++f) groups[find(f)].push_back(f);

    std::vector<std::vector<int>> faces;
    for (const auto& [root, fs] : groups) {
        // Boundary = directed edges whose reverse is not in the group.
        std::map<std::pair<int, int>, bool> dir_edges;
        for (int f : fs) {
            dir_edges[{tris[f].a, tris[f].b}] = true;
            dir_edges[{tris[f].b, tris[f].c}] = true;
            dir_edges[{tris[f].c, tris[f].a}] = true;
        }
        std::map<int, int> next;
        for (const auto& [e, _] : dir_edges) {
            if (dir_edges.count({e.second, e.first})) continue;
            if (next.count(e.first)) throw DegenerateHull("merged_faces: face boundary not a simple cycle");
            next[e.first] = e.second;
        }
        if (next.empty()) throw DegenerateHull("merged_faces: closed face group");
        std::vector<int> cycle;
        const int start = next.begin()->first;
        int cur = start;
        do {
            cycle.push_back(cur);
            auto it = next.find(cur);
            if (it == next.end()) throw DegenerateHull("merged_faces: broken face boundary");
            cur = it->second;
        } while (cur != start && cycle.size() <= next.size());
        if (cur != start || cycle.size() != next.size())
            throw DegenerateHull("merged_faces: face boundary not a single cycle");
        faces.push_back(std::move(cycle));
    }
    return faces;
}

}  // namespace sphpack::hull
