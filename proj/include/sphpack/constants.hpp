#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sphpack/geom.hpp"

namespace sphpack::constants {

// Truncation parameter used throughout the local analysis: vertices within
// 2*t0 = 2.51 of a center form its contact graph. Defined by fiat.
inline constexpr double kT0 = 1.255;
inline constexpr double kTwoT0 = 2.51;

// Packing density of a regular tetrahedron of edge 2: ratio of the volume
// within distance 1 of a vertex to the tetrahedron volume.
inline double delta_tet() {
    return std::sqrt(8.0) * std::atan(std::sqrt(2.0) / 5.0);
}

namespace detail {

// Vertex solid angle of the regular octahedron of edge 2, summed over the
// two triangles splitting the four-sided cone at a vertex.
inline double octahedron_vertex_solid_angle() {
    const double s = std::sqrt(2.0);
    const Vec3 apex{0, 0, s};
    const Vec3 n1{s, 0, 0}, n2{0, s, 0}, n3{-s, 0, 0}, n4{0, -s, 0};
    return geom::solid_angle(apex, n1, n2, n3) + geom::solid_angle(apex, n1, n3, n4);
}

}  // namespace detail

// Packing density of a regular octahedron of edge 2, built from the vertex
// solid angles: six unit-ball sectors against volume 8*sqrt(2)/3.
inline double delta_oct() {
    const double omega = detail::octahedron_vertex_solid_angle();
    const double volume = 8.0 * std::sqrt(2.0) / 3.0;
    return 6.0 * (omega / 3.0) / volume;
}

// The "point" scoring unit: -pi/3 + sqrt(2) * delta_tet.
inline double pt() {
    return -geom::kPi / 3.0 + std::sqrt(2.0) * delta_tet();
}

// Density of the face-centered cubic packing, pi/sqrt(18).
inline double fcc_density() {
    return geom::kPi / std::sqrt(18.0);
}

// Ratio of the volume of a ball to the volume of the circumscribed regular
// dodecahedron (inradius 1), computed from the twelve face planes.
inline double dodecahedral_bound() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<geom::HalfSpace> faces;
    // Face normals of the dodecahedron: vertex directions of an icosahedron.
    const double pairs[6][3] = {{0, 1, phi},  {0, -1, phi}, {1, phi, 0},
                                {-1, phi, 0}, {phi, 0, 1},  {phi, 0, -1}};
    for (const auto& p : pairs) {
        const Vec3 v{p[0], p[1], p[2]};
        faces.push_back(geom::HalfSpace(normalized(v), 1.0));
        faces.push_back(geom::HalfSpace(-normalized(v), 1.0));
    }
    const auto dodeca = geom::halfspace_intersection(faces);
    return geom::ball_volume(1.0) / dodeca.volume;
}

// Common volume of the Voronoi cells in the fcc and hcp packings, sqrt(32).
// Also reproduced, nontrivially, by -8pt/(4*delta_oct) + 4pi/(3*delta_oct).
inline double fcc_cell_volume() {
    return std::sqrt(32.0);
}

struct NamedConstant {
    std::string name;
    std::string formula;
    double value = 0.0;
    double oracle = 0.0;      // independently computed verification value
    double tolerance = 0.0;
    bool has_oracle = true;

    bool pass() const { return !has_oracle || std::fabs(value - oracle) <= tolerance; }
};

// Every named constant with its verification oracle. Values are computed,
// never hard-coded; decimal literals appear only as oracle targets.
inline std::vector<NamedConstant> all_constants() {
    std::vector<NamedConstant> out;

    const double dtet = delta_tet();
    const double doct = delta_oct();
    const double point = pt();

    // Solid-angle reconstruction of delta_tet from an edge-2 tetrahedron.
    {
        const double s = 2.0 / std::sqrt(2.0);  // tetrahedron on alternate cube vertices
        const Vec3 a{s, s, 0}, b{s, 0, s}, c{0, s, s}, apex{0, 0, 0};
        const double omega = geom::solid_angle(apex, a, b, c);
        const double vol = 8.0 / (6.0 * std::sqrt(2.0));
        out.push_back({"delta_tet", "sqrt(8)*arctan(sqrt(2)/5)", dtet,
                       4.0 * (omega / 3.0) / vol, 1e-9, true});
    }
    out.push_back({"delta_oct", "6*(vertex solid angle/3) / (8*sqrt(2)/3)", doct,
                   3.0 * std::asin(1.0 / 3.0) / std::sqrt(2.0), 1e-9, true});
    out.push_back({"pt", "-pi/3 + sqrt(2)*delta_tet", point, 0.05537, 1e-5, true});
    out.push_back({"eight_pt", "8*pt", 8.0 * point, 0.442989, 1e-6, true});
    out.push_back({"fcc_density", "pi/sqrt(18)", fcc_density(), 0.74048, 1e-5, true});
    out.push_back({"rogers_bound", "delta_tet (Rogers)", dtet, 0.7797, 1e-4, true});
    out.push_back({"dodecahedral_bound", "(4pi/3) / vol(dodecahedron, inradius 1)",
                   dodecahedral_bound(), 0.754697, 1e-6, true});
    out.push_back({"fcc_cell_volume", "sqrt(32)", fcc_cell_volume(),
                   -8.0 * point / (4.0 * doct) + 4.0 * geom::kPi / (3.0 * doct), 1e-9, true});
    out.push_back({"t0", "1.255 (by definition)", kT0, kT0, 0.0, false});
    return out;
}

}  // namespace sphpack::constants
