#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sphpack/constants.hpp"
#include "sphpack/density.hpp"
#include "sphpack/geom.hpp"
#include "sphpack/lp.hpp"
#include "sphpack/packing.hpp"
#include "sphpack/stargraph.hpp"
#include "sphpack/voronoi.hpp"

namespace sphpack::acceptance {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace oracle {

// Monte-Carlo estimate of the volume of B(x, r) covered by the packing's
// unit balls: uniform samples in the ball against a dense membership grid.
// Independent of the lens-sum route. Returns {estimate, standard_error}.
inline std::pair<double, double> mc_union_volume(const packing::Packing& p, const Vec3& x,
                                                 double r, long samples, std::uint64_t seed) {
    const double reach = r + 1.0;
    const double cell = 1.0;
    const int side = static_cast<int>(std::ceil(2.0 * (reach + 1.0) / cell));
    const Vec3 corner = x - Vec3{reach + 1.0, reach + 1.0, reach + 1.0};
    std::vector<std::vector<int>> grid(static_cast<std::size_t>(side) * side * side);
    auto cell_index = [&](const Vec3& q) -> long {
        const int i = static_cast<int>((q.x - corner.x) / cell);
        const int j = static_cast<int>((q.y - corner.y) / cell);
        const int k = static_cast<int>((q.z - corner.z) / cell);
        if (i < 0 || j < 0 || k < 0 || i >= side || j >= side || k >= side) return -1;
        return (static_cast<long>(i) * side + j) * side + k;
    };
    for (int idx = 0; idx < static_cast<int>(p.centers.size()); ++idx) {
        const Vec3& c = p.centers[static_cast<std::size_t>(idx)];
        if (distance(c, x) > reach) continue;
        const long ci = cell_index(c);
        if (ci >= 0) grid[static_cast<std::size_t>(ci)].push_back(idx);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    long hits = 0;
    long accepted = 0;
    while (accepted < samples) {
        const Vec3 q{unit(rng) * r, unit(rng) * r, unit(rng) * r};
        if (norm2(q) > r * r) continue;
        ++accepted;
        const Vec3 s = x + q;
        bool covered = false;
        const int bi = static_cast<int>((s.x - corner.x) / cell);
        const int bj = static_cast<int>((s.y - corner.y) / cell);
        const int bk = static_cast<int>((s.z - corner.z) / cell);
        for (int di = -1; di <= 1 && !covered; ++di)
            for (int dj = -1; dj <= 1 && !covered; ++dj)
                for (int dk = -1; dk <= 1 && !covered; ++dk) {
                    const int i = bi + di, j = bj + dj, k = bk + dk;
                    if (i < 0 || j < 0 || k < 0 || i >= side || j >= side || k >= side) continue;
                    for (int idx : grid[(static_cast<std::size_t>(i) * side + j) * side + k]) {
                        if (norm2(p.centers[static_cast<std::size_t>(idx)] - s) <= 1.0) {
                            covered = true;
                            break;
                        }
                    }
                }
        if (covered) ++hits;
    }
    const double vol = geom::ball_volume(r);
    const double phat = static_cast<double>(hits) / static_cast<double>(samples);
    const double se = vol * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
    return {vol * phat, se};
}

// Brute-force LP oracle: enumerate all n-subsets of the constraint planes
// (rows plus box faces), solve, keep feasible vertices, take the best.
struct EnumerationResult {
    bool feasible = false;
    double value = 0.0;
};

inline EnumerationResult lp_vertex_enumeration(const lp::LinearProgram& prob) {
    const int n = prob.num_vars();
    std::vector<std::vector<double>> planes;  // coeffs then bound
    for (const auto& row : prob.rows) {
        std::vector<double> p = row.coeffs;
        p.push_back(row.bound);
        planes.push_back(std::move(p));
    }
    for (int j = 0; j < n; ++j) {
        std::vector<double> up(static_cast<std::size_t>(n) + 1, 0.0);
        up[static_cast<std::size_t>(j)] = 1.0;
        up[static_cast<std::size_t>(n)] = prob.variable_bounds[static_cast<std::size_t>(j)].second;
        planes.push_back(up);
        std::vector<double> dn(static_cast<std::size_t>(n) + 1, 0.0);
        dn[static_cast<std::size_t>(j)] = -1.0;
        dn[static_cast<std::size_t>(n)] = -prob.variable_bounds[static_cast<std::size_t>(j)].first;
        planes.push_back(dn);
    }

    const int m = static_cast<int>(planes.size());
    std::vector<int> pick(static_cast<std::size_t>(n));
    EnumerationResult best;

    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == n) {
            // Solve the n x n system by Gaussian elimination with pivoting.
            std::vector<std::vector<double>> a(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
            std::vector<double> xsol(static_cast<std::size_t>(n));
            for (int col = 0; col < n; ++col) {
                int piv = -1;
                double bestabs = 1e-9;
                for (int row = col; row < n; ++row)
                    if (std::fabs(a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]) > bestabs) {
                        bestabs = std::fabs(a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]);
                        piv = row;
                    }
                if (piv < 0) return;
                std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(piv)]);
                for (int row = 0; row < n; ++row) {
                    if (row == col) continue;
                    const double f = a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] /
                                     a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
                    for (int c2 = col; c2 <= n; ++c2)
                        a[static_cast<std::size_t>(row)][static_cast<std::size_t>(c2)] -=
                            f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c2)];
                }
            }
            for (int i = 0; i < n; ++i)
                xsol[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] /
                                                    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
            for (const auto& plane : planes) {
                double lhs = 0.0;
                for (int j = 0; j < n; ++j) lhs += plane[static_cast<std::size_t>(j)] * xsol[static_cast<std::size_t>(j)];
                if (lhs > plane[static_cast<std::size_t>(n)] + 1e-7) return;
            }
            double val = 0.0;
            for (int j = 0; j < n; ++j) val += prob.objective[static_cast<std::size_t>(j)] * xsol[static_cast<std::size_t>(j)];
            if (!best.feasible || val > best.value) best = {true, val};
            return;
        }
        for (int i = start; i < m; ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

// Dense grid search for the maxima of the toy objectives.
inline double grid_max_2d(const std::function<double(double, double)>& f, double lo, double hi,
                          int steps) {
    double best = -1e300;
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j) {
            const double x = lo + (hi - lo) * i / steps;
            const double y = lo + (hi - lo) * j / steps;
            best = std::max(best, f(x, y));
        }
    return best;
}

inline double grid_max_3d(const std::function<double(double, double, double)>& f, double lo,
                          double hi, int steps) {
    double best = -1e300;
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j)
            for (int k = 0; k <= steps; ++k) {
                const double x = lo + (hi - lo) * i / steps;
                const double y = lo + (hi - lo) * j / steps;
                const double z = lo + (hi - lo) * k / steps;
                best = std::max(best, f(x, y, z));
            }
    return best;
}

// Tangent-cut relaxation for a separable concave objective; shared by the
// toy problems of the bound-certification checks.
inline lp::RelaxableProblem separable_concave_problem(
    lp::Box root, std::function<double(double)> term, std::function<double(double)> deriv) {
    lp::RelaxableProblem p;
    p.dimension = root.dimension();
    p.root = root;
    p.objective = [term](std::span<const double> x) {
        double v = 0.0;
        for (double xi : x) v += term(xi);
        return v;
    };
    const int n = root.dimension();
    p.relaxer = [term, deriv, n](const lp::Box& box) {
        lp::LinearProgram prog;
        prog.objective.assign(static_cast<std::size_t>(2 * n), 0.0);
        prog.variable_bounds.resize(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
            prog.objective[static_cast<std::size_t>(n + i)] = 1.0;
            prog.variable_bounds[static_cast<std::size_t>(i)] = {box.lo[static_cast<std::size_t>(i)],
                                                                 box.hi[static_cast<std::size_t>(i)]};
            prog.variable_bounds[static_cast<std::size_t>(n + i)] = {-1e3, 1e3};
            const double a = box.lo[static_cast<std::size_t>(i)], b = box.hi[static_cast<std::size_t>(i)];
            for (double x0 : {a, a + 0.25 * (b - a), 0.5 * (a + b), b - 0.25 * (b - a), b}) {
                lp::LinearProgram::Row row;
                row.coeffs.assign(static_cast<std::size_t>(2 * n), 0.0);
                row.coeffs[static_cast<std::size_t>(n + i)] = 1.0;
                row.coeffs[static_cast<std::size_t>(i)] = -deriv(x0);
                row.bound = term(x0) - deriv(x0) * x0;
                prog.rows.push_back(std::move(row));
            }
        }
        return prog;
    };
    return p;
}

}  // namespace oracle

namespace detail {

inline std::string num(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

inline void add(std::vector<CheckResult>& out, const std::string& name, bool pass,
                const std::string& detail) {
    out.push_back({name, pass, detail});
}

}  // namespace detail

// The full acceptance suite over the library (reproducibility checks over
// CLI outputs live with the command layer). Runs in well under ten minutes.
inline std::vector<CheckResult> run_library_checks() {
    using detail::add;
    using detail::num;
    std::vector<CheckResult> out;

    // --- 1. Constants ------------------------------------------------------
    {
        const double dtet = constants::delta_tet();
        const double closed = std::sqrt(8.0) * std::atan(std::sqrt(2.0) / 5.0);
        add(out, "constants.delta_tet_closed_form", std::fabs(dtet - closed) <= 1e-12,
            "delta_tet = " + num(dtet));
        const double s = std::sqrt(2.0);
        const double omega = geom::solid_angle({0, 0, 0}, {s, s, 0}, {s, 0, s}, {0, s, s});
        const double rebuilt = 4.0 * (omega / 3.0) / (8.0 / (6.0 * std::sqrt(2.0)));
        add(out, "constants.delta_tet_solid_angle", std::fabs(dtet - rebuilt) <= 1e-9,
            "reconstruction " + num(rebuilt));
        add(out, "constants.eight_pt", std::fabs(8.0 * constants::pt() - 0.442989) <= 1e-6,
            "8pt = " + num(8.0 * constants::pt()));
        add(out, "constants.delta_oct", std::fabs(constants::delta_oct() - 0.72) <= 0.005,
            "delta_oct = " + num(constants::delta_oct()));
        add(out, "constants.fcc_density", std::fabs(constants::fcc_density() - 0.74048) <= 1e-5,
            "pi/sqrt(18) = " + num(constants::fcc_density()));
    }

    // --- 2. Cell-volume identity ------------------------------------------
    {
        const double doct = constants::delta_oct();
        const double lhs = -8.0 * constants::pt() / (4.0 * doct) + 4.0 * geom::kPi / (3.0 * doct);
        add(out, "identity.sqrt32_from_constants",
            std::fabs(lhs - constants::fcc_cell_volume()) <= 1e-9,
            "-8pt/(4 d_oct) + 4pi/(3 d_oct) = " + num(lhs));
    }

    // --- 3. Voronoi volumes and containment --------------------------------
    {
        const auto fcc = packing::fcc_packing(7.0);
        const auto hcp = packing::hcp_packing(7.0);
        auto origin_index = [](const packing::Packing& p) {
            for (int i = 0; i < static_cast<int>(p.centers.size()); ++i)
                if (norm(p.centers[static_cast<std::size_t>(i)]) < 1e-9) return i;
            return -1;
        };
        const double vf = voronoi::voronoi_cell(fcc, origin_index(fcc)).volume;
        const double vh = voronoi::voronoi_cell(hcp, origin_index(hcp)).volume;
        add(out, "voronoi.fcc_cell_sqrt32", std::fabs(vf - std::sqrt(32.0)) <= 1e-9,
            "fcc cell volume " + num(vf));
        add(out, "voronoi.hcp_cell_sqrt32", std::fabs(vh - std::sqrt(32.0)) <= 1e-9,
            "hcp cell volume " + num(vh));

        const auto sat = packing::saturate(packing::empty_packing(9.0), 20240601u, 0.25);
        const auto rep = packing::check_saturation(sat, 0.25);
        bool circ_ok = rep.saturated;
        double worst = 0.0;
        for (int i : sat.interior_indices()) {
            const auto cell = voronoi::voronoi_cell(sat, i);
            worst = std::max(worst, cell.circumradius);
            if (cell.circumradius > 2.0 + 1e-9) circ_ok = false;
        }
        add(out, "voronoi.saturated_circumradius", circ_ok,
            "saturated packing, " + std::to_string(sat.centers.size()) +
                " centers, max interior circumradius " + num(worst));
    }

    // --- 4. Density law -----------------------------------------------------
    const auto big = packing::fcc_packing(45.0);
    {
        const std::vector<double> radii{5.0, 10.0, 20.0, 40.0};
        const auto scan = density::density_bound_scan(big, {0, 0, 0}, radii, 0.0);
        bool all_sat = true;
        for (const auto& c : scan.checks) all_sat = all_sat && c.satisfied;
        add(out, "density.bound_satisfied", all_sat, "C1 = 0 at r in {5,10,20,40}");

        const double c5 = std::fabs(scan.checks[0].fitted_C);
        double late = 0.0;
        for (std::size_t i = 1; i < scan.checks.size(); ++i)
            late = std::max(late, std::fabs(scan.checks[i].fitted_C));
        add(out, "density.fitted_C_no_growth", late <= 1.5 * c5,
            "|C(5)| = " + num(c5) + ", max |C(10..40)| = " + num(late));

        bool ineq1 = true;
        for (double r : radii) {
            const auto rep = density::finite_density(big, {0, 0, 0}, r);
            if (rep.A > static_cast<double>(rep.ball_count) * geom::ball_volume(1.0)) ineq1 = false;
        }
        add(out, "density.counting_inequality", ineq1, "A <= |Lambda(x,r+1)| 4pi/3 at all radii");
    }

    // --- 5. Monte-Carlo cross-check -----------------------------------------
    {
        const double exact = density::covered_volume(big, {0, 0, 0}, 10.0);
        const auto [est, se] = oracle::mc_union_volume(big, {0, 0, 0}, 10.0, 10'000'000L, 777u);
        add(out, "density.monte_carlo", std::fabs(exact - est) <= 3.0 * se,
            "exact " + num(exact) + ", MC " + num(est) + " +- " + num(se));
    }

    // --- 6. Graphs -----------------------------------------------------------
    {
        const auto& refs = stargraph::reference_graphs();
        auto star_of = [](const packing::Packing& p) {
            for (int i = 0; i < static_cast<int>(p.centers.size()); ++i)
                if (norm(p.centers[static_cast<std::size_t>(i)]) < 1e-9)
                    return stargraph::local_star(p, i);
            throw std::logic_error("no origin vertex");
        };
        const auto fs = star_of(packing::fcc_packing(7.0));
        const auto hs = star_of(packing::hcp_packing(7.0));
        add(out, "graph.kissing_cardinality",
            fs.u_set.size() == 12 && hs.u_set.size() == 12,
            "fcc |U| = " + std::to_string(fs.u_set.size()) + ", hcp |U| = " +
                std::to_string(hs.u_set.size()));

        auto shape_ok = [](const stargraph::PlaneGraph& g) {
            const auto sizes = g.face_size_vector();
            const int tris = static_cast<int>(std::count(sizes.begin(), sizes.end(), 3));
            const int quads = static_cast<int>(std::count(sizes.begin(), sizes.end(), 4));
            return g.n == 12 && g.edge_count() == 24 && g.face_count() == 14 && tris == 8 &&
                   quads == 6;
        };
        add(out, "graph.kissing_star_shape", shape_ok(refs.fcc) && shape_ok(refs.hcp),
            "V=12 E=24 F=14 with 8 triangles + 6 quadrilaterals");

        const bool distinct = refs.fcc_code != refs.hcp_code && refs.fcc_code != refs.pent_code &&
                              refs.hcp_code != refs.pent_code;
        add(out, "graph.reference_codes_distinct", distinct, "fcc/hcp/pent pairwise distinct");

        const auto window = packing::fcc_packing(10.0);
        bool all_fcc = true;
        int count = 0;
        for (int i : window.interior_indices()) {
            ++count;
            if (stargraph::classify_star(stargraph::local_star(window, i)) !=
                stargraph::GraphClass::FCC)
                all_fcc = false;
        }
        add(out, "graph.fcc_window_classification", all_fcc && count > 0,
            std::to_string(count) + " interior vertices all classify FCC");
    }

    // --- 7. Pentahedral configuration ---------------------------------------
    {
        const auto pent = stargraph::pent_star();
        bool ok = pent.u_set.size() == 12;
        double minpair = 1e300;
        int poles = 0, upper = 0, lower = 0;
        for (std::size_t i = 0; i < pent.u_set.size(); ++i) {
            if (std::fabs(norm(pent.u_set[i]) - 2.0) > 1e-9) ok = false;
            if (std::fabs(std::fabs(pent.u_set[i].z) - 2.0) <= 1e-9) ++poles;
            else if (pent.u_set[i].z > 0.0) ++upper;
            else ++lower;
            for (std::size_t j = i + 1; j < pent.u_set.size(); ++j)
                minpair = std::min(minpair, distance(pent.u_set[i], pent.u_set[j]));
        }
        ok = ok && minpair >= 2.0 - 1e-9 && poles == 2 && upper == 5 && lower == 5;
        add(out, "graph.pent_star", ok,
            "two poles + two pentagonal rings, min pairwise distance " + num(minpair));
    }

    // --- 8. LP machinery ------------------------------------------------------
    {
        std::mt19937_64 rng(4242u);
        std::uniform_real_distribution<double> coeff(-1.0, 1.0);
        std::uniform_int_distribution<int> nvars(2, 6), nrows(1, 10);
        bool all_ok = true;
        std::string fail;
        for (int trial = 0; trial < 100; ++trial) {
            lp::LinearProgram prob;
            const int n = nvars(rng), m = nrows(rng);
            prob.objective.resize(static_cast<std::size_t>(n));
            for (auto& c : prob.objective) c = coeff(rng);
            prob.variable_bounds.resize(static_cast<std::size_t>(n));
            for (auto& b : prob.variable_bounds) {
                const double lo = -1.0 - std::fabs(coeff(rng));
                const double hi = 1.0 + std::fabs(coeff(rng));
                b = {lo, hi};
            }
            for (int i = 0; i < m; ++i) {
                lp::LinearProgram::Row row;
                row.coeffs.resize(static_cast<std::size_t>(n));
                for (auto& c : row.coeffs) c = coeff(rng);
                row.bound = coeff(rng) + 0.5;
                prob.rows.push_back(std::move(row));
            }
            const auto got = lp::simplex_max(prob);
            const auto expect = oracle::lp_vertex_enumeration(prob);
            if (expect.feasible != (got.status == lp::LpStatus::Optimal)) {
                all_ok = false;
                fail = "status mismatch on trial " + std::to_string(trial);
                break;
            }
            if (expect.feasible && std::fabs(expect.value - got.value) > 1e-8) {
                all_ok = false;
                fail = "value mismatch on trial " + std::to_string(trial) + ": " +
                       num(got.value) + " vs " + num(expect.value);
                break;
            }
        }
        add(out, "lp.simplex_vs_enumeration", all_ok,
            all_ok ? "100 random LPs agree within 1e-8" : fail);
    }
    {
        // Toy problem certificates with grid-search confirmation.
        auto quad = oracle::separable_concave_problem(
            lp::Box{{-1, -1, -1}, {1, 1, 1}}, [](double x) { return -x * x; },
            [](double x) { return -2.0 * x; });
        const auto quad_res = lp::branch_and_bound(quad, 0.5, 100000);
        const double quad_true = oracle::grid_max_3d(
            [](double x, double y, double z) { return -(x * x + y * y + z * z); }, -1.0, 1.0, 40);
        bool pass = quad_res.outcome == lp::BnbOutcome::Verified && quad_true < 0.5 &&
                    quad_res.certificate && quad_res.certificate->verified;

        auto sines = oracle::separable_concave_problem(
            lp::Box{{0, 0}, {geom::kPi / 2.0, geom::kPi / 2.0}},
            [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); });
        const double sin_true = oracle::grid_max_2d(
            [](double x, double y) { return std::sin(x) + std::sin(y); }, 0.0, geom::kPi / 2.0, 400);
        const auto refute = lp::branch_and_bound(sines, 1.9, 100000);
        pass = pass && refute.outcome == lp::BnbOutcome::Refuted && sin_true >= 1.9 &&
               refute.witness && refute.witness->value >= 1.9;
        const auto verify = lp::branch_and_bound(sines, 2.1, 100000);
        pass = pass && verify.outcome == lp::BnbOutcome::Verified && sin_true < 2.1 &&
               verify.certificate && verify.certificate->verified;
        add(out, "lp.bnb_toy_problems", pass,
            "quadratic verified at 0.5; sum-of-sines refuted at 1.9, verified at 2.1");

        bool audits = true;
        if (quad_res.certificate) {
            audits = audits && lp::leaf_tiling_audit(*quad_res.certificate, quad.root).pass &&
                     lp::soundness_sampling_audit(quad, *quad_res.certificate, 100, 99u);
        }
        if (verify.certificate) {
            audits = audits && lp::leaf_tiling_audit(*verify.certificate, sines.root).pass &&
                     lp::soundness_sampling_audit(sines, *verify.certificate, 100, 99u);
        }
        add(out, "lp.certificate_audits", audits,
            "leaf tiling exact; 100 samples per leaf below the leaf bound");
    }

    return out;
}

}  // namespace sphpack::acceptance
