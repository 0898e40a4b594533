#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sphpack/constants.hpp"
#include "sphpack/geom.hpp"
#include "sphpack/packing.hpp"
#include "sphpack/voronoi.hpp"

namespace sphpack::density {

struct DensityReport {
    Vec3 x;
    double r = 0.0;
    double A = 0.0;          // covered volume inside B(x, r)
    double delta = 0.0;      // A / vol(B(x, r))
    long ball_count = 0;     // |Lambda(x, r+1)|, balls meeting B(x, r)
};

// One row of the explicit density-bound scan:
//   delta(x, r) <= (pi/sqrt(18)) (1 + 3/r)^3 + C1 (r+1)^2 / (r^3 sqrt(32)).
struct DensityBoundCheck {
    double r = 0.0;
    double C1 = 0.0;
    double bound = 0.0;
    double delta = 0.0;
    bool satisfied = false;
    double fitted_C = 0.0;   // r * (delta - pi/sqrt(18)) at this radius
};

struct DensityBoundScan {
    std::vector<DensityBoundCheck> checks;
    double fitted_C = 0.0;   // max over the scanned radii
};

// Audit of the counting step that bounds sqrt(32) |Lambda(x,r+1)| by the
// compensated cell volumes and then by C1 (r+1)^2 + vol B(x, r+3).
struct CellSumAudit {
    long count = 0;          // |Lambda(x, r+1)|
    double lhs = 0.0;        // sqrt(32) * count
    double middle = 0.0;     // sum of a(v) + vol(cell(v))
    double rhs = 0.0;        // C1 (r+1)^2 + vol B(x, r+3)
    bool lhs_le_middle = false;
    bool middle_le_rhs = false;
};

inline void require_window_covers(const packing::Packing& p, const Vec3& x, double r) {
    if (distance(x, p.window.center) + r + 1.0 > p.window.radius + 1e-9)
        throw std::invalid_argument(
            "density: B(x, r+1) exceeds the packing window; balls would be missing");
}

// Volume of B(x, r) covered by the union of unit balls of the packing.
// Exact: packing balls are pairwise disjoint, so the union volume is the
// sum of the pairwise lens volumes against B(x, r).
inline double covered_volume(const packing::Packing& p, const Vec3& x, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("covered_volume: radius must be positive");
    require_window_covers(p, x, r);
    double sum = 0.0;
    for (const Vec3& v : p.centers) {
        const double d = distance(v, x);
        if (d < r + 1.0) sum += geom::lens_volume(d, 1.0, r);
    }
    return sum;
}

inline DensityReport finite_density(const packing::Packing& p, const Vec3& x, double r) {
    DensityReport rep;
    rep.x = x;
    rep.r = r;
    rep.A = covered_volume(p, x, r);
    rep.delta = rep.A / geom::ball_volume(r);
    for (const Vec3& v : p.centers)
        if (distance(v, x) <= r + 1.0) ++rep.ball_count;
    if (rep.delta < 0.0 || rep.delta > 1.0 + 1e-12)
        throw geom::GeometryError("finite_density: density outside [0, 1]");
    if (rep.A > static_cast<double>(rep.ball_count) * geom::ball_volume(1.0) + 1e-9)
        throw geom::GeometryError("finite_density: covered volume exceeds ball-count bound");
    return rep;
}

inline DensityBoundScan density_bound_scan(const packing::Packing& p, const Vec3& x,
                                           const std::vector<double>& radii, double C1) {
    DensityBoundScan scan;
    const double rho = constants::fcc_density();
    bool first = true;
    for (double r : radii) {
        const DensityReport rep = finite_density(p, x, r);
        DensityBoundCheck c;
        c.r = r;
        c.C1 = C1;
        c.delta = rep.delta;
        c.bound = rho * std::pow(1.0 + 3.0 / r, 3) +
                  C1 * (r + 1.0) * (r + 1.0) / (r * r * r * std::sqrt(32.0));
        c.satisfied = c.delta <= c.bound + 1e-12;
        c.fitted_C = r * (c.delta - rho);
        scan.fitted_C = first ? c.fitted_C : std::max(scan.fitted_C, c.fitted_C);
        first = false;
        scan.checks.push_back(c);
    }
    return scan;
}

// The vertex-counting audit over Lambda(x, r+1); every vertex in that ball
// must be interior so its cell and a-value exist.
inline CellSumAudit cell_sum_audit(const packing::Packing& p, const voronoi::VertexFunction& a,
                                   const Vec3& x, double r, double C1) {
    CellSumAudit audit;
    const double sqrt32 = constants::fcc_cell_volume();
    for (int i = 0; i < static_cast<int>(p.centers.size()); ++i) {
        if (distance(p.centers[static_cast<std::size_t>(i)], x) > r + 1.0) continue;
        if (!p.is_interior(i))
            throw std::invalid_argument("cell_sum_audit: Lambda(x, r+1) reaches non-interior vertices");
        ++audit.count;
        audit.middle += a.at(i) + voronoi::voronoi_cell(p, i).volume;
    }
    audit.lhs = sqrt32 * static_cast<double>(audit.count);
    audit.rhs = C1 * (r + 1.0) * (r + 1.0) + geom::ball_volume(r + 3.0);
    audit.lhs_le_middle = audit.lhs <= audit.middle + 1e-9;
    audit.middle_le_rhs = audit.middle <= audit.rhs + 1e-9;
    return audit;
}

}  // namespace sphpack::density
