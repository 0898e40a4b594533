#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "sphpack/vec3.hpp"

namespace sphpack::packing {

inline constexpr double kMinSeparation = 2.0;
inline constexpr double kSeparationTol = 1e-12;
// Vertices farther than this from the window boundary have complete
// distance-4 neighborhoods and are safe for cell/graph analysis.
inline constexpr double kInteriorMargin = 4.0;

struct Window {
    Vec3 center;
    double radius = 0.0;
};

// A finite set of ball centers, pairwise >= 2 apart, generated inside a
// spherical window.
struct Packing {
    std::vector<Vec3> centers;
    Window window;
    std::string label;

    bool is_interior(int i) const {
        return distance(centers[static_cast<std::size_t>(i)], window.center) <=
               window.radius - kInteriorMargin + 1e-12;
    }

    std::vector<int> interior_indices() const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(centers.size()); ++i)
            if (is_interior(i)) out.push_back(i);
        return out;
    }
};

struct SaturationReport {
    long probe_count = 0;
    double max_gap_distance = 0.0;  // largest probe-to-nearest-center distance
    bool saturated = false;
    double probe_spacing = 0.0;
};

namespace detail {

// Uniform-grid spatial hash for neighbor queries among centers.
class CellGrid {
  public:
    explicit CellGrid(double cell_size) : cell_(cell_size) {}

    void insert(const Vec3& p, int index) {
        cells_[key(p)].push_back(index);
    }

    // Visits indices in all 27 cells around p.
    template <typename F>
    void for_neighborhood(const Vec3& p, F&& f) const {
        const auto [ci, cj, ck] = key(p);
        for (long di = -1; di <= 1; ++di)
            for (long dj = -1; dj <= 1; ++dj)
                for (long dk = -1; dk <= 1; ++dk) {
                    auto it = cells_.find({ci + di, cj + dj, ck + dk});
                    if (it == cells_.end()) continue;
                    for (int idx : it->second) f(idx);
                }
    }

  private:
    using Key = std::tuple<long, long, long>;
    Key key(const Vec3& p) const {
        return {static_cast<long>(std::floor(p.x / cell_)),
                static_cast<long>(std::floor(p.y / cell_)),
                static_cast<long>(std::floor(p.z / cell_))};
    }
    double cell_;
    std::map<Key, std::vector<int>> cells_;
};

}  // namespace detail

// Distance from p to the nearest center, by expanding ring search over a
// hashed grid. Returns +inf for an empty packing.
inline double nearest_center_distance(const Packing& p, const Vec3& q) {
    if (p.centers.empty()) return std::numeric_limits<double>::infinity();
    double best2 = std::numeric_limits<double>::infinity();
    for (const Vec3& c : p.centers) best2 = std::min(best2, norm2(c - q));
    return std::sqrt(best2);
}

// Smallest pairwise distance, or +inf for fewer than two centers. Exhaustive
// below 5000 centers, hashed 27-neighborhood above (any violating pair and
// any lattice-contact pair is within one cell length).
inline double min_pairwise_distance(const Packing& p) {
    const int n = static_cast<int>(p.centers.size());
    double best2 = std::numeric_limits<double>::infinity();
    if (n < 5000) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                best2 = std::min(best2, norm2(p.centers[i] - p.centers[j]));
    } else {
        detail::CellGrid grid(2.05);
        for (int i = 0; i < n; ++i) grid.insert(p.centers[i], i);
        for (int i = 0; i < n; ++i) {
            grid.for_neighborhood(p.centers[i], [&](int j) {
                if (j != i) best2 = std::min(best2, norm2(p.centers[i] - p.centers[j]));
            });
        }
    }
    return std::sqrt(best2);
}

// Throws when the separation or window invariant is violated.
inline void validate(const Packing& p) {
    const double d = min_pairwise_distance(p);
    if (d < kMinSeparation - kSeparationTol)
        throw std::invalid_argument("packing: centers closer than 2 (min " + std::to_string(d) + ")");
    for (const Vec3& c : p.centers) {
        if (!finite(c)) throw std::invalid_argument("packing: non-finite center");
        if (distance(c, p.window.center) > p.window.radius + 1e-9)
            throw std::invalid_argument("packing: center outside window");
    }
}

namespace detail {

// Triangular-layer stacking along z shared by the fcc and hcp builders.
// Layer k sits at z = k * 2*sqrt(2/3); in-plane lattice {(2,0),(1,sqrt(3))}
// is shifted by one of the three stacking offsets A, B, C.
template <typename OffsetOf>
inline Packing layered_packing(double window_radius, const std::string& label, OffsetOf&& offset_of) {
    const double layer_gap = 2.0 * std::sqrt(2.0 / 3.0);
    const double sq3 = std::sqrt(3.0);
    const double offsets[3][2] = {{0.0, 0.0}, {1.0, 1.0 / sq3}, {2.0, 2.0 / sq3}};

    Packing p;
    p.window = {Vec3{0, 0, 0}, window_radius};
    p.label = label;

    const long kmax = static_cast<long>(std::floor(window_radius / layer_gap)) + 1;
    for (long k = -kmax; k <= kmax; ++k) {
        const double z = static_cast<double>(k) * layer_gap;
        if (std::fabs(z) > window_radius) continue;
        const int off = offset_of(k);
        const double ox = offsets[off][0];
        const double oy = offsets[off][1];
        const double rmax = std::sqrt(std::max(window_radius * window_radius - z * z, 0.0));
        const long imax = static_cast<long>(rmax / 2.0) + 3;
        const long jmax = static_cast<long>(rmax / sq3) + 3;
        for (long i = -imax; i <= imax; ++i) {
            for (long j = -jmax; j <= jmax; ++j) {
                const double x = 2.0 * static_cast<double>(i) + static_cast<double>(j) + ox;
                const double y = sq3 * static_cast<double>(j) + oy;
                if (x * x + y * y + z * z <= window_radius * window_radius + 1e-12)
                    p.centers.push_back({x, y, z});
            }
        }
    }
    return p;
}

}  // namespace detail

// Face-centered cubic packing (ABC layer stacking), nearest-neighbor
// distance exactly 2, origin included.
inline Packing fcc_packing(double window_radius) {
    if (window_radius < 0.0) throw std::invalid_argument("fcc_packing: negative radius");
    return detail::layered_packing(window_radius, "fcc",
                                   [](long k) { return static_cast<int>(((k % 3) + 3) % 3); });
}

// Hexagonal-close packing (ABAB layer stacking), origin included.
inline Packing hcp_packing(double window_radius) {
    if (window_radius < 0.0) throw std::invalid_argument("hcp_packing: negative radius");
    return detail::layered_packing(window_radius, "hcp",
                                   [](long k) { return static_cast<int>(((k % 2) + 2) % 2); });
}

// Simple cubic lattice at the given spacing (saturated for spacing 2, since
// the deep hole sqrt(3) < 2). Used as a contrasting non-optimal packing.
inline Packing cubic_packing(double window_radius, double spacing = 2.0) {
    if (spacing < kMinSeparation) throw std::invalid_argument("cubic_packing: spacing below 2");
    Packing p;
    p.window = {Vec3{0, 0, 0}, window_radius};
    p.label = "cubic";
    const long m = static_cast<long>(std::floor(window_radius / spacing)) + 1;
    for (long i = -m; i <= m; ++i)
        for (long j = -m; j <= m; ++j)
            for (long k = -m; k <= m; ++k) {
                const Vec3 c{spacing * static_cast<double>(i), spacing * static_cast<double>(j),
                             spacing * static_cast<double>(k)};
                if (norm(c) <= window_radius + 1e-12) p.centers.push_back(c);
            }
    return p;
}

inline Packing empty_packing(double window_radius, const Vec3& center = Vec3{0, 0, 0}) {
    Packing p;
    p.window = {center, window_radius};
    p.label = "empty";
    return p;
}

// Greedy saturation: walk a jittered grid over the window in deterministic
// order and insert every candidate at distance >= 2 from all current
// centers. Deterministic for a fixed seed; a second pass with the same seed
// inserts nothing.
inline Packing saturate(const Packing& p, std::uint64_t seed, double candidate_spacing) {
    if (!(candidate_spacing > 0.0) || candidate_spacing > 0.5)
        throw std::invalid_argument("saturate: candidate_spacing must be in (0, 0.5]");

    Packing out = p;
    out.label = p.label + "+saturated";
    detail::CellGrid grid(kMinSeparation);
    for (int i = 0; i < static_cast<int>(out.centers.size()); ++i) grid.insert(out.centers[i], i);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);

    const Vec3 wc = p.window.center;
    const double R = p.window.radius;
    const long m = static_cast<long>(std::ceil(2.0 * R / candidate_spacing));
    for (long i = 0; i <= m; ++i) {
        for (long j = 0; j <= m; ++j) {
            for (long k = 0; k <= m; ++k) {
                // Jitter is drawn for every cell so the candidate stream only
                // depends on the seed and the window, not on prior insertions.
                const double jx = jitter(rng), jy = jitter(rng), jz = jitter(rng);
                const Vec3 cand = wc + Vec3{-R + (static_cast<double>(i) + jx) * candidate_spacing,
                                            -R + (static_cast<double>(j) + jy) * candidate_spacing,
                                            -R + (static_cast<double>(k) + jz) * candidate_spacing};
                if (distance(cand, wc) > R) continue;
                bool free = true;
                grid.for_neighborhood(cand, [&](int idx) {
                    if (free && norm2(out.centers[idx] - cand) <
                                    kMinSeparation * kMinSeparation - 1e-14)
                        free = false;
                });
                if (!free) continue;
                out.centers.push_back(cand);
                grid.insert(cand, static_cast<int>(out.centers.size()) - 1);
            }
        }
    }
    return out;
}

// Probes a grid over the window shrunk by 2 and reports the largest
// probe-to-nearest-center distance. Saturation is certified only up to the
// probe resolution, which the report records.
inline SaturationReport check_saturation(const Packing& p, double probe_spacing) {
    if (!(probe_spacing > 0.0) || probe_spacing > 0.5)
        throw std::invalid_argument("check_saturation: probe_spacing must be in (0, 0.5]");

    SaturationReport rep;
    rep.probe_spacing = probe_spacing;

    detail::CellGrid grid(kMinSeparation);
    for (int i = 0; i < static_cast<int>(p.centers.size()); ++i) grid.insert(p.centers[i], i);

    const double Ri = p.window.radius - 2.0;
    const Vec3 wc = p.window.center;
    double max_gap = 0.0;
    const long m = static_cast<long>(std::ceil(2.0 * Ri / probe_spacing));
    for (long i = 0; i <= m; ++i) {
        for (long j = 0; j <= m; ++j) {
            for (long k = 0; k <= m; ++k) {
                const Vec3 q = wc + Vec3{-Ri + static_cast<double>(i) * probe_spacing,
                                         -Ri + static_cast<double>(j) * probe_spacing,
                                         -Ri + static_cast<double>(k) * probe_spacing};
                if (distance(q, wc) > Ri) continue;
                ++rep.probe_count;
                double best2 = std::numeric_limits<double>::infinity();
                grid.for_neighborhood(q, [&](int idx) {
                    best2 = std::min(best2, norm2(p.centers[idx] - q));
                });
                double d = std::sqrt(best2);
                // The cell ring covers everything within 2; an empty ring
                // means a gap, so fall back to the exact nearest distance.
                if (std::isinf(d)) d = nearest_center_distance(p, q);
                max_gap = std::max(max_gap, d);
            }
        }
    }
    rep.max_gap_distance = max_gap;
    rep.saturated = max_gap < kMinSeparation;
    return rep;
}

}  // namespace sphpack::packing
