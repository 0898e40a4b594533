#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphpack/constants.hpp"
#include "sphpack/geom.hpp"
#include "sphpack/hull.hpp"
#include "sphpack/packing.hpp"

namespace sphpack::stargraph {

class NotPlaneGraph : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// The local configuration around a center: everything within distance 4
// (which determines the local geometry) and the contact set within
// 2*t0 = 2.51 (the vertex set of the attached graph).
struct LocalStar {
    Vec3 center;
    std::vector<Vec3> near_vertices;  // distance <= 4, center excluded
    std::vector<Vec3> u_set;          // distance <= 2.51, center excluded
};

// Combinatorial plane graph with its spherical embedding data.
struct PlaneGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;        // i < j, sorted
    std::vector<std::vector<int>> faces;           // vertex cycles
    std::vector<std::vector<int>> rotation;        // cyclic neighbor order per vertex
    std::string embedding_source;

    int edge_count() const { return static_cast<int>(edges.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }

    std::vector<int> degrees() const {
        std::vector<int> deg(static_cast<std::size_t>(n), 0);
        for (const auto& [a, b] : edges) ++deg[static_cast<std::size_t>(a)], ++deg[static_cast<std::size_t>(b)];
        return deg;
    }

    // Face sizes in ascending order.
    std::vector<int> face_size_vector() const {
        std::vector<int> out;
        for (const auto& f : faces) out.push_back(static_cast<int>(f.size()));
        std::sort(out.begin(), out.end());
        return out;
    }
};

enum class GraphClass { FCC, HCP, PENT, OTHER };

inline const char* to_string(GraphClass c) {
    switch (c) {
        case GraphClass::FCC: return "FCC";
        case GraphClass::HCP: return "HCP";
        case GraphClass::PENT: return "PENT";
        default: return "OTHER";
    }
}

struct ClassifyResult {
    GraphClass cls = GraphClass::OTHER;
    // vertex i of the classified graph corresponds to certificate[i] in the
    // reference graph, when cls != OTHER
    std::vector<int> certificate;
};

inline LocalStar local_star(const packing::Packing& p, int v_index) {
    if (v_index < 0 || v_index >= static_cast<int>(p.centers.size()))
        throw std::invalid_argument("local_star: vertex index out of range");
    if (!p.is_interior(v_index))
        throw std::invalid_argument("local_star: vertex is not interior");
    LocalStar s;
    s.center = p.centers[static_cast<std::size_t>(v_index)];
    for (int j = 0; j < static_cast<int>(p.centers.size()); ++j) {
        if (j == v_index) continue;
        const Vec3& u = p.centers[static_cast<std::size_t>(j)];
        const double d = distance(u, s.center);
        if (d <= 4.0) {
            s.near_vertices.push_back(u);
            if (d <= constants::kTwoT0) s.u_set.push_back(u);
        }
    }
    return s;
}

namespace detail {

inline bool arc_contains(const Vec3& a, const Vec3& b, const Vec3& q) {
    const Vec3 n = cross(a, b);
    return dot(cross(a, q), n) > 1e-12 && dot(cross(q, b), n) > 1e-12;
}

// Strict interior crossing of the minor great-circle arcs (a,b) and (c,d).
inline bool arcs_cross(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const Vec3 t = cross(cross(a, b), cross(c, d));
    const double len = norm(t);
    if (len < 1e-12) return false;  // same great circle; overlap handled by embedding check
    for (double sign : {1.0, -1.0}) {
        const Vec3 q = t * (sign / len);
        if (arc_contains(a, b, q) && arc_contains(c, d, q)) return true;
    }
    return false;
}

}  // namespace detail

// Plane graph of a local star. Vertices are the u_set members; edges join
// pairs at distance <= 2*t0; faces are read off the spherical embedding as
// the convex-hull facets of the unit direction vectors, with coplanar
// facets merged (the square faces of a kissing arrangement arrive as
// coplanar triangle pairs). The edge rule and the embedding must agree,
// otherwise NOT_PLANE_GRAPH.
inline PlaneGraph star_graph(const LocalStar& s) {
    const int n = static_cast<int>(s.u_set.size());
    if (n == 0) throw std::invalid_argument("star_graph: empty u_set");

    std::vector<Vec3> dirs;
    dirs.reserve(static_cast<std::size_t>(n));
    for (const Vec3& u : s.u_set) dirs.push_back(normalized(u - s.center));

    PlaneGraph g;
    g.n = n;
    g.embedding_source = "radial projection / convex hull of directions";
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (distance(s.u_set[static_cast<std::size_t>(i)], s.u_set[static_cast<std::size_t>(j)]) <=
                constants::kTwoT0)
                g.edges.emplace_back(i, j);

    const auto tris = hull::convex_hull(dirs);  // throws DegenerateHull on flat input
    g.faces = hull::merged_faces(tris);

    std::set<std::pair<int, int>> hull_edges;
    for (const auto& f : g.faces) {
        for (std::size_t e = 0; e < f.size(); ++e) {
            const int a = f[e], b = f[(e + 1) % f.size()];
            hull_edges.insert({std::min(a, b), std::max(a, b)});
        }
    }
    const std::set<std::pair<int, int>> dist_edges(g.edges.begin(), g.edges.end());
    if (dist_edges != hull_edges) {
        // Diagnose: does some distance edge cross the embedding?
        for (const auto& [a, b] : dist_edges) {
            if (hull_edges.count({a, b})) continue;
            for (const auto& [c, d] : hull_edges) {
                if (a == c || a == d || b == c || b == d) continue;
                if (detail::arcs_cross(dirs[static_cast<std::size_t>(a)], dirs[static_cast<std::size_t>(b)],
                                       dirs[static_cast<std::size_t>(c)], dirs[static_cast<std::size_t>(d)]))
                    throw NotPlaneGraph("star_graph: NOT_PLANE_GRAPH (edges cross in the spherical embedding)");
            }
        }
        throw NotPlaneGraph("star_graph: NOT_PLANE_GRAPH (edge rule disagrees with the spherical embedding)");
    }

    // Rotation system: neighbors ordered by angle around each direction.
    g.rotation.assign(static_cast<std::size_t>(n), {});
    for (const auto& [a, b] : g.edges) {
        g.rotation[static_cast<std::size_t>(a)].push_back(b);
        g.rotation[static_cast<std::size_t>(b)].push_back(a);
    }
    for (int v = 0; v < n; ++v) {
        const Vec3& dv = dirs[static_cast<std::size_t>(v)];
        const Vec3 e1 = any_orthogonal(dv);
        const Vec3 e2 = cross(dv, e1);
        auto& neigh = g.rotation[static_cast<std::size_t>(v)];
        std::sort(neigh.begin(), neigh.end(), [&](int i, int j) {
            const Vec3 ti = dirs[static_cast<std::size_t>(i)] - dv * dot(dirs[static_cast<std::size_t>(i)], dv);
            const Vec3 tj = dirs[static_cast<std::size_t>(j)] - dv * dot(dirs[static_cast<std::size_t>(j)], dv);
            return std::atan2(dot(ti, e2), dot(ti, e1)) < std::atan2(dot(tj, e2), dot(tj, e1));
        });
    }

    // Euler relation and the two-faces-per-edge property.
    if (g.n - g.edge_count() + g.face_count() != 2)
        throw NotPlaneGraph("star_graph: Euler relation violated");
    std::map<std::pair<int, int>, int> face_use;
    for (const auto& f : g.faces) {
        std::set<int> distinct(f.begin(), f.end());
        if (distinct.size() != f.size()) throw NotPlaneGraph("star_graph: face is not a simple cycle");
        for (std::size_t e = 0; e < f.size(); ++e) {
            const int a = f[e], b = f[(e + 1) % f.size()];
            ++face_use[{std::min(a, b), std::max(a, b)}];
        }
    }
    for (const auto& [e, cnt] : face_use)
        if (cnt != 2) throw NotPlaneGraph("star_graph: edge not on exactly two faces");
    return g;
}

// Twelve tangent points arranged as north/south poles plus two staggered
// pentagonal rings, each ring touching its pole. The ring latitude is found
// by one-dimensional root solving on the pole-to-ring chord length; the
// pairwise separations are certified afterwards.
inline LocalStar pent_star() {
    // chord(theta) = 4 sin(theta/2) = 2  (ring point to pole, both at radius 2)
    auto chord_gap = [](double theta) { return 4.0 * std::sin(theta / 2.0) - 2.0; };
    double lo = 0.2, hi = geom::kPi / 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (chord_gap(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double theta = 0.5 * (lo + hi);

    LocalStar s;
    s.center = Vec3{0, 0, 0};
    s.u_set.push_back({0, 0, 2});
    s.u_set.push_back({0, 0, -2});
    const double rr = 2.0 * std::sin(theta);
    const double zz = 2.0 * std::cos(theta);
    for (int k = 0; k < 5; ++k) {
        const double a = 2.0 * geom::kPi * k / 5.0;
        s.u_set.push_back({rr * std::cos(a), rr * std::sin(a), zz});
    }
    for (int k = 0; k < 5; ++k) {
        const double a = 2.0 * geom::kPi * k / 5.0 + geom::kPi / 5.0;
        s.u_set.push_back({rr * std::cos(a), rr * std::sin(a), -zz});
    }
    s.near_vertices = s.u_set;

    for (std::size_t i = 0; i < s.u_set.size(); ++i) {
        if (std::fabs(norm(s.u_set[i]) - 2.0) > 1e-9)
            throw geom::GeometryError("pent_star: point not at distance 2 from center");
        for (std::size_t j = i + 1; j < s.u_set.size(); ++j)
            if (distance(s.u_set[i], s.u_set[j]) < 2.0 - 1e-9)
                throw geom::GeometryError("pent_star: pairwise separation below 2");
    }
    return s;
}

// Canonical code of a plane graph embedding: breadth-first traversal codes
// minimized over every starting directed edge and both senses of rotation,
// so relabelings and mirror images share one code. Codes are equal exactly
// for isomorphic embedded graphs.
namespace detail {

struct Walk {
    std::vector<std::uint8_t> code;
    std::vector<int> labels;  // labels[v] = 1-based discovery label
};

inline Walk bfs_code(const PlaneGraph& g, int root, int first_neighbor, bool reversed) {
    const int n = g.n;
    Walk w;
    w.labels.assign(static_cast<std::size_t>(n), 0);
    std::vector<int> order;
    std::vector<int> entry(static_cast<std::size_t>(n), -1);
    int next = 1;

    w.labels[static_cast<std::size_t>(root)] = next++;
    entry[static_cast<std::size_t>(root)] = first_neighbor;
    order.push_back(root);

    for (std::size_t qi = 0; qi < order.size(); ++qi) {
        const int v = order[qi];
        const auto& rot = g.rotation[static_cast<std::size_t>(v)];
        const int deg = static_cast<int>(rot.size());
        int start = 0;
        for (int i = 0; i < deg; ++i)
            if (rot[static_cast<std::size_t>(i)] == entry[static_cast<std::size_t>(v)]) start = i;
        for (int t = 0; t < deg; ++t) {
            const int idx = reversed ? (start - t + 2 * deg) % deg : (start + t) % deg;
            const int u = rot[static_cast<std::size_t>(idx)];
            if (w.labels[static_cast<std::size_t>(u)] == 0) {
                w.labels[static_cast<std::size_t>(u)] = next++;
                entry[static_cast<std::size_t>(u)] = v;
                order.push_back(u);
            }
            w.code.push_back(static_cast<std::uint8_t>(w.labels[static_cast<std::size_t>(u)]));
        }
        w.code.push_back(0);
    }
    if (static_cast<int>(order.size()) != n)
        throw NotPlaneGraph("canonical_form: graph is not connected");
    return w;
}

inline Walk canonical_walk(const PlaneGraph& g) {
    if (g.n <= 0 || g.n > 254) throw std::invalid_argument("canonical_form: vertex count out of range");
    std::optional<Walk> best;
    for (int v = 0; v < g.n; ++v) {
        for (int u : g.rotation[static_cast<std::size_t>(v)]) {
            for (bool rev : {false, true}) {
                Walk w = bfs_code(g, v, u, rev);
                if (!best || w.code < best->code) best = std::move(w);
            }
        }
    }
    if (!best) throw std::invalid_argument("canonical_form: graph has no edges");
    return *best;
}

}  // namespace detail

inline std::vector<std::uint8_t> canonical_form(const PlaneGraph& g) {
    return detail::canonical_walk(g).code;
}

// The three reference kissing-star graphs, built from their generating
// configurations on first use.
struct ReferenceGraphs {
    PlaneGraph fcc, hcp, pent;
    std::vector<std::uint8_t> fcc_code, hcp_code, pent_code;
};

inline const ReferenceGraphs& reference_graphs() {
    static const ReferenceGraphs refs = [] {
        ReferenceGraphs r;
        auto origin_star = [](const packing::Packing& p) {
            for (int i = 0; i < static_cast<int>(p.centers.size()); ++i)
                if (norm(p.centers[static_cast<std::size_t>(i)]) < 1e-9) return local_star(p, i);
            throw std::logic_error("reference packing has no origin vertex");
        };
        r.fcc = star_graph(origin_star(packing::fcc_packing(7.0)));
        r.hcp = star_graph(origin_star(packing::hcp_packing(7.0)));
        r.pent = star_graph(pent_star());
        r.fcc_code = canonical_form(r.fcc);
        r.hcp_code = canonical_form(r.hcp);
        r.pent_code = canonical_form(r.pent);
        return r;
    }();
    return refs;
}

inline ClassifyResult classify(const PlaneGraph& g) {
    const auto& refs = reference_graphs();
    const detail::Walk walk = detail::canonical_walk(g);

    auto match = [&](const PlaneGraph& ref, const std::vector<std::uint8_t>& ref_code,
                     GraphClass cls) -> std::optional<ClassifyResult> {
        if (walk.code != ref_code) return std::nullopt;
        ClassifyResult res;
        res.cls = cls;
        // Compose the two canonical labelings into a vertex bijection.
        const detail::Walk ref_walk = detail::canonical_walk(ref);
        std::vector<int> by_label(static_cast<std::size_t>(ref.n) + 1, -1);
        for (int v = 0; v < ref.n; ++v) by_label[static_cast<std::size_t>(ref_walk.labels[static_cast<std::size_t>(v)])] = v;
        res.certificate.assign(static_cast<std::size_t>(g.n), -1);
        for (int v = 0; v < g.n; ++v)
            res.certificate[static_cast<std::size_t>(v)] =
                by_label[static_cast<std::size_t>(walk.labels[static_cast<std::size_t>(v)])];
        return res;
    };

    if (auto r = match(refs.fcc, refs.fcc_code, GraphClass::FCC)) return *r;
    if (auto r = match(refs.hcp, refs.hcp_code, GraphClass::HCP)) return *r;
    if (auto r = match(refs.pent, refs.pent_code, GraphClass::PENT)) return *r;
    return {GraphClass::OTHER, {}};
}

// Classification straight from a star; configurations whose contact graph
// is not a valid plane graph (no edges, crossings, flat hulls) are OTHER.
inline GraphClass classify_star(const LocalStar& s) {
    try {
        return classify(star_graph(s)).cls;
    } catch (const NotPlaneGraph&) {
        return GraphClass::OTHER;
    } catch (const hull::DegenerateHull&) {
        return GraphClass::OTHER;
    } catch (const std::invalid_argument&) {
        return GraphClass::OTHER;
    }
}

// Illustrative structural screens on a plane graph; the published tameness
// property list is a different, much finer object.
struct TamePredicateConfig {
    int min_vertices = 12;
    int min_face_size = 3;
    int max_face_size = 8;
    int min_degree = 2;
    int max_degree = 6;
};

struct PredicateResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

inline std::vector<PredicateResult> tame_predicates(const PlaneGraph& g,
                                                    const TamePredicateConfig& cfg = {}) {
    std::vector<PredicateResult> out;
    out.push_back({"vertex_count", g.n >= cfg.min_vertices,
                   std::to_string(g.n) + " vertices, need >= " + std::to_string(cfg.min_vertices)});
    bool faces_ok = true;
    for (const auto& f : g.faces)
        if (static_cast<int>(f.size()) < cfg.min_face_size ||
            static_cast<int>(f.size()) > cfg.max_face_size)
            faces_ok = false;
    out.push_back({"face_sizes", faces_ok,
                   "all face sizes in [" + std::to_string(cfg.min_face_size) + ", " +
                       std::to_string(cfg.max_face_size) + "]"});
    bool degrees_ok = true;
    for (int d : g.degrees())
        if (d < cfg.min_degree || d > cfg.max_degree) degrees_ok = false;
    out.push_back({"degrees", degrees_ok,
                   "all degrees in [" + std::to_string(cfg.min_degree) + ", " +
                       std::to_string(cfg.max_degree) + "]"});
    return out;
}

}  // namespace sphpack::stargraph
