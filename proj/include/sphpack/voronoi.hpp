#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphpack/constants.hpp"
#include "sphpack/geom.hpp"
#include "sphpack/packing.hpp"

namespace sphpack::voronoi {

// Bisector constraints are collected from vertices within this distance.
// Sufficient whenever cells are contained in balls of radius 2 around their
// centers, which holds for saturated packings; violations are detected by
// the circumradius check after construction.
inline constexpr double kNeighborCutoff = 4.0;
inline constexpr double kCellContainmentRadius = 2.0;
inline constexpr double kMarginTol = 1e-9;

struct VoronoiCellRecord {
    int index = -1;
    Vec3 vertex;
    geom::ConvexPolytope cell;
    double volume = 0.0;
    double circumradius = 0.0;
};

// A real-valued function on the interior vertices of a packing.
struct VertexFunction {
    std::map<int, double> values;
    std::string source;

    double at(int i) const {
        auto it = values.find(i);
        if (it == values.end())
            throw std::invalid_argument("vertex function undefined at vertex " + std::to_string(i));
        return it->second;
    }

    static VertexFunction constant(const packing::Packing& p, double v, const std::string& tag) {
        VertexFunction f;
        f.source = tag;
        for (int i : p.interior_indices()) f.values[i] = v;
        return f;
    }
};

struct CompatibilityMargin {
    int index = -1;
    double margin = 0.0;  // vol(cell) + a(v) - sqrt(32)
};

// Finite-window evidence for quadratic growth of partial sums of a vertex
// function: sums[i] over vertices within radii[i], and the smallest C1 with
// sums <= C1 * r^2 on the sampled radii.
struct NegligibilityFit {
    std::vector<double> radii;
    std::vector<double> sums;
    double fitted_C1 = 0.0;
    bool passes = false;
};

// Voronoi cell of an interior vertex: intersection of the bisector
// halfspaces against all vertices within distance 4. The constructed cell
// must lie in the radius-2 ball around its center; escaping that ball means
// the cutoff was insufficient (unsaturated packing) and is an error.
inline VoronoiCellRecord voronoi_cell(const packing::Packing& p, int v_index) {
    if (v_index < 0 || v_index >= static_cast<int>(p.centers.size()))
        throw std::invalid_argument("voronoi_cell: vertex index out of range");
    if (!p.is_interior(v_index))
        throw std::invalid_argument("voronoi_cell: vertex is not interior (within 4 of window boundary)");

    const Vec3 v = p.centers[static_cast<std::size_t>(v_index)];
    std::vector<geom::HalfSpace> halves;
    for (int j = 0; j < static_cast<int>(p.centers.size()); ++j) {
        if (j == v_index) continue;
        const Vec3& u = p.centers[static_cast<std::size_t>(j)];
        const double d = distance(u, v);
        if (d <= kNeighborCutoff) halves.push_back(geom::bisector(v, u));
    }

    VoronoiCellRecord rec;
    rec.index = v_index;
    rec.vertex = v;
    rec.cell = geom::halfspace_intersection(halves, v);
    rec.volume = rec.cell.volume;
    rec.circumradius = geom::polytope_circumradius(rec.cell, v);
    if (rec.circumradius > kCellContainmentRadius + kMarginTol)
        throw geom::GeometryError(
            "voronoi_cell: cell escapes the radius-2 ball (packing not saturated near vertex " +
            std::to_string(v_index) + ")");
    return rec;
}

inline std::vector<VoronoiCellRecord> interior_cells(const packing::Packing& p) {
    std::vector<VoronoiCellRecord> out;
    for (int i : p.interior_indices()) out.push_back(voronoi_cell(p, i));
    return out;
}

// margin(v) = vol(cell(v)) + a(v) - sqrt(32); the function is fcc-compatible
// on the window iff every margin is >= -1e-9.
inline std::vector<CompatibilityMargin> fcc_compatibility_check(const packing::Packing& p,
                                                                const VertexFunction& a) {
    std::vector<CompatibilityMargin> out;
    const double target = constants::fcc_cell_volume();
    for (int i : p.interior_indices()) {
        const double vol = voronoi_cell(p, i).volume;
        out.push_back({i, vol + a.at(i) - target});
    }
    return out;
}

inline bool all_compatible(const std::vector<CompatibilityMargin>& margins) {
    for (const auto& m : margins)
        if (m.margin < -kMarginTol) return false;
    return true;
}

// Partial sums of `a` over vertices within each radius of x. All sampled
// balls must stay inside the interior region, where `a` is defined.
inline NegligibilityFit negligibility_fit(const packing::Packing& p, const VertexFunction& a,
                                          const Vec3& x, const std::vector<double>& radii) {
    const double safe = p.window.radius - packing::kInteriorMargin;
    NegligibilityFit fit;
    for (double r : radii) {
        if (distance(x, p.window.center) + r > safe + 1e-12)
            throw std::invalid_argument("negligibility_fit: radius reaches non-interior vertices");
        double sum = 0.0;
        for (const auto& [i, val] : a.values) {
            if (distance(p.centers[static_cast<std::size_t>(i)], x) <= r) sum += val;
        }
        fit.radii.push_back(r);
        fit.sums.push_back(sum);
        fit.fitted_C1 = std::max(fit.fitted_C1, sum / (r * r));
    }
    fit.fitted_C1 = std::max(fit.fitted_C1, 0.0);
    fit.passes = true;
    for (std::size_t i = 0; i < fit.radii.size(); ++i)
        if (fit.sums[i] > fit.fitted_C1 * fit.radii[i] * fit.radii[i] + 1e-9) fit.passes = false;
    return fit;
}

// Vertex function induced by a per-vertex score hypothesis:
//   a(v) = -score(v)/(4*delta_oct) + 4*pi/(3*delta_oct) - vol(cell(v)).
// With score identically 8*pt this makes vol + a equal sqrt(32) exactly.
inline VertexFunction vertex_function_from_score(const packing::Packing& p,
                                                 const VertexFunction& score) {
    const double doct = constants::delta_oct();
    VertexFunction a;
    a.source = "from_score(" + score.source + ")";
    for (int i : p.interior_indices()) {
        const double vol = voronoi_cell(p, i).volume;
        a.values[i] = -score.at(i) / (4.0 * doct) + 4.0 * geom::kPi / (3.0 * doct) - vol;
    }
    return a;
}

}  // namespace sphpack::voronoi
