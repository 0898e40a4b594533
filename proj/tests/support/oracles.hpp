#pragma once

// Independent verification routes used by the tests only: Monte-Carlo
// volumes, cap-sum lens formula, quadrature for solid angles. None of these
// share code with the library paths they check.

#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "sphpack/geom.hpp"
#include "sphpack/stargraph.hpp"
#include "sphpack/vec3.hpp"

namespace oracles {

using sphpack::Vec3;

inline constexpr double kPi = 3.14159265358979323846;

inline double cap_volume(double r, double h) {
    if (h <= 0.0) return 0.0;
    if (h >= 2.0 * r) return 4.0 / 3.0 * kPi * r * r * r;
    return kPi * h * h * (3.0 * r - h) / 3.0;
}

// Lens volume as the sum of the two spherical caps cut by the radical plane.
inline double cap_sum_lens(double d, double r1, double r2) {
    if (d >= r1 + r2) return 0.0;
    if (d <= std::fabs(r1 - r2)) {
        const double rm = std::min(r1, r2);
        return 4.0 / 3.0 * kPi * rm * rm * rm;
    }
    const double x1 = (d * d - r2 * r2 + r1 * r1) / (2.0 * d);
    const double h1 = r1 - x1;
    const double h2 = r2 - (d - x1);
    return cap_volume(r1, h1) + cap_volume(r2, h2);
}

struct McEstimate {
    double value = 0.0;
    double standard_error = 0.0;
};

// Monte-Carlo lens volume: rejection sampling over a box enclosing both balls.
inline McEstimate mc_lens(double d, double r1, double r2, long samples, std::uint64_t seed) {
    const double xlo = -r1, xhi = d + r2;
    const double ylo = -std::max(r1, r2), yhi = std::max(r1, r2);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(xlo, xhi), uy(ylo, yhi);
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
        const double x = ux(rng), y = uy(rng), z = uy(rng);
        const double in1 = x * x + y * y + z * z;
        const double dx = x - d;
        const double in2 = dx * dx + y * y + z * z;
        if (in1 <= r1 * r1 && in2 <= r2 * r2) ++hits;
    }
    const double boxvol = (xhi - xlo) * (yhi - ylo) * (yhi - ylo);
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    return {boxvol * p, boxvol * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

// Monte-Carlo volume of a halfspace intersection by rejection from a box.
inline McEstimate mc_polytope_volume(std::span<const sphpack::geom::HalfSpace> halves,
                                     const Vec3& box_lo, const Vec3& box_hi, long samples,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(box_lo.x, box_hi.x), uy(box_lo.y, box_hi.y),
        uz(box_lo.z, box_hi.z);
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
        const Vec3 q{ux(rng), uy(rng), uz(rng)};
        bool inside = true;
        for (const auto& h : halves)
            if (dot(h.normal, q) > h.offset) {
                inside = false;
                break;
            }
        if (inside) ++hits;
    }
    const double boxvol =
        (box_hi.x - box_lo.x) * (box_hi.y - box_lo.y) * (box_hi.z - box_lo.z);
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    return {boxvol * p, boxvol * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

// Solid angle of the convex cone at the origin spanned by `dirs` (the unit
// edge directions of the cone, in arbitrary order), computed by integrating
// the polar-angle profile around the cone's mean axis:
//   Omega = integral over azimuth of (1 - cos theta(phi)).
// Independent of the arctangent formula.
inline double cone_solid_angle_quadrature(std::vector<Vec3> dirs, double tol = 1e-12) {
    for (auto& d : dirs) d = normalized(d);
    Vec3 axis{0, 0, 0};
    for (const auto& d : dirs) axis += d;
    axis = normalized(axis);

    // Order directions by azimuth so consecutive pairs bound the facets.
    const Vec3 e1 = any_orthogonal(axis);
    const Vec3 e2 = cross(axis, e1);
    std::sort(dirs.begin(), dirs.end(), [&](const Vec3& a, const Vec3& b) {
        return std::atan2(dot(a, e2), dot(a, e1)) < std::atan2(dot(b, e2), dot(b, e1));
    });

    // Inward-oriented facet normals of the cone boundary.
    std::vector<Vec3> normals;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        Vec3 n = cross(dirs[i], dirs[(i + 1) % dirs.size()]);
        n = normalized(n);
        if (dot(n, axis) < 0.0) n = -n;
        normals.push_back(n);
    }

    auto theta_of = [&](double phi) {
        const Vec3 u = e1 * std::cos(phi) + e2 * std::sin(phi);
        double theta = kPi;
        for (const auto& n : normals) {
            const double gn = dot(axis, n);
            const double un = dot(u, n);
            // Boundary ray: sin(t) un + cos(t) gn = 0 with gn > 0.
            const double t = std::atan2(gn, -un);
            if (t > 0.0 && t < theta) theta = t;
        }
        return 1.0 - std::cos(theta);
    };
    return detail::integrate(theta_of, 0.0, 2.0 * kPi, tol);
}

// Dihedral angle along the edge (a, b) of tetrahedron (a, b, c, d).
inline double dihedral(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const Vec3 ab = b - a;
    const Vec3 n1 = cross(ab, c - a);
    const Vec3 n2 = cross(ab, d - a);
    const double cosang = dot(n1, n2) / (norm(n1) * norm(n2));
    return std::acos(std::clamp(cosang, -1.0, 1.0));
}

// Vertex permutation of a plane graph, preserving the embedding.
inline sphpack::stargraph::PlaneGraph relabel(const sphpack::stargraph::PlaneGraph& g,
                                              const std::vector<int>& perm) {
    sphpack::stargraph::PlaneGraph out;
    out.n = g.n;
    out.embedding_source = g.embedding_source;
    for (const auto& [a, b] : g.edges) {
        const int na = perm[static_cast<std::size_t>(a)], nb = perm[static_cast<std::size_t>(b)];
        out.edges.emplace_back(std::min(na, nb), std::max(na, nb));
    }
    std::sort(out.edges.begin(), out.edges.end());
    for (const auto& f : g.faces) {
        std::vector<int> nf;
        for (int v : f) nf.push_back(perm[static_cast<std::size_t>(v)]);
        out.faces.push_back(std::move(nf));
    }
    out.rotation.assign(static_cast<std::size_t>(g.n), {});
    for (int v = 0; v < g.n; ++v) {
        std::vector<int> r;
        for (int u : g.rotation[static_cast<std::size_t>(v)]) r.push_back(perm[static_cast<std::size_t>(u)]);
        out.rotation[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] = std::move(r);
    }
    return out;
}

// Mirror image: reverse every rotation and face cycle.
inline sphpack::stargraph::PlaneGraph mirrored(const sphpack::stargraph::PlaneGraph& g) {
    sphpack::stargraph::PlaneGraph out = g;
    for (auto& r : out.rotation) std::reverse(r.begin(), r.end());
    for (auto& f : out.faces) std::reverse(f.begin(), f.end());
    return out;
}

}  // namespace oracles
