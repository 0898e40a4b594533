#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphpack/constants.hpp"
#include "sphpack/stargraph.hpp"

namespace sphpack::lp {

inline constexpr double kPivotEps = 1e-9;
inline constexpr double kFeasEps = 1e-7;
inline constexpr int kDegeneratePivotLimit = 1000;  // then fall back to Bland's rule

class SoundnessViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// max objective . x  subject to  rows[i].coeffs . x <= rows[i].bound  and
// variable_bounds[j].first <= x_j <= variable_bounds[j].second.
// All bounds must be finite.
struct LinearProgram {
    struct Row {
        std::vector<double> coeffs;
        double bound = 0.0;
    };
    std::vector<double> objective;
    std::vector<Row> rows;
    std::vector<std::pair<double, double>> variable_bounds;

    int num_vars() const { return static_cast<int>(objective.size()); }

    void validate() const {
        const std::size_t n = objective.size();
        if (variable_bounds.size() != n)
            throw std::invalid_argument("lp: bounds/objective dimension mismatch");
        for (const auto& [lo, hi] : variable_bounds)
            if (!std::isfinite(lo) || !std::isfinite(hi))
                throw std::invalid_argument("lp: variable bounds must be finite");
        for (const auto& row : rows)
            if (row.coeffs.size() != n)
                throw std::invalid_argument("lp: row dimension mismatch");
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct SimplexResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> point;
};

namespace detail {

// Dense two-phase tableau simplex over the standard form obtained by
// shifting variables to their lower bounds and adding upper-bound rows.
class SimplexTableau {
  public:
    SimplexTableau(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>((rows + 1) * cols), 0.0) {}

    double& at(int r, int c) { return a_[static_cast<std::size_t>(r * cols_ + c)]; }
    double at(int r, int c) const { return a_[static_cast<std::size_t>(r * cols_ + c)]; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void pivot(int pr, int pc) {
        const double piv = at(pr, pc);
        for (int c = 0; c < cols_; ++c) at(pr, c) /= piv;
        for (int r = 0; r <= rows_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (int c = 0; c < cols_; ++c) at(r, c) -= f * at(pr, c);
        }
    }

  private:
    int rows_, cols_;
    std::vector<double> a_;
};

// Runs the simplex loop on the tableau's objective row (row == rows()).
// `enterable` masks out columns that may not enter (artificials in phase 2).
// Returns false on unboundedness.
inline bool simplex_iterate(SimplexTableau& t, std::vector<int>& basis,
                            const std::vector<bool>& enterable) {
    const int m = t.rows();
    const int ncols = t.cols() - 1;  // last column is RHS
    int degenerate_run = 0;
    bool bland = false;
    for (long iter = 0; iter < 100000; ++iter) {
        int pc = -1;
        if (bland) {
            for (int c = 0; c < ncols; ++c)
                if (enterable[static_cast<std::size_t>(c)] && t.at(m, c) > kPivotEps) {
                    pc = c;
                    break;
                }
        } else {
            double best = kPivotEps;
            for (int c = 0; c < ncols; ++c)
                if (enterable[static_cast<std::size_t>(c)] && t.at(m, c) > best) {
                    best = t.at(m, c);
                    pc = c;
                }
        }
        if (pc < 0) return true;  // optimal

        int pr = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int r = 0; r < m; ++r) {
            const double arc = t.at(r, pc);
            if (arc > kPivotEps) {
                const double ratio = t.at(r, ncols) / arc;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && pr >= 0 &&
                     basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(pr)])) {
                    best_ratio = ratio;
                    pr = r;
                }
            }
        }
        if (pr < 0) return false;  // unbounded direction

        if (best_ratio < 1e-12) {
            if (++degenerate_run > kDegeneratePivotLimit) bland = true;
        } else {
            degenerate_run = 0;
        }
        t.pivot(pr, pc);
        basis[static_cast<std::size_t>(pr)] = pc;
    }
    throw std::runtime_error("simplex: iteration limit exceeded");
}

}  // namespace detail

inline SimplexResult simplex_max(const LinearProgram& lp) {
    lp.validate();
    const int n = lp.num_vars();
    const int m_in = static_cast<int>(lp.rows.size());

    // Shift to y = x - lo >= 0 and turn upper bounds into rows.
    std::vector<double> lo(static_cast<std::size_t>(n)), width(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        lo[static_cast<std::size_t>(j)] = lp.variable_bounds[static_cast<std::size_t>(j)].first;
        width[static_cast<std::size_t>(j)] =
            lp.variable_bounds[static_cast<std::size_t>(j)].second - lo[static_cast<std::size_t>(j)];
        if (width[static_cast<std::size_t>(j)] < 0.0) return {LpStatus::Infeasible, 0.0, {}};
    }

    const int m = m_in + n;
    // Columns: n structural + m slacks + up to m artificials + RHS.
    std::vector<std::vector<double>> rowdata(static_cast<std::size_t>(m));
    std::vector<double> rhs(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        auto& rd = rowdata[static_cast<std::size_t>(i)];
        rd.assign(static_cast<std::size_t>(n), 0.0);
        if (i < m_in) {
            double shift = 0.0;
            for (int j = 0; j < n; ++j) {
                rd[static_cast<std::size_t>(j)] = lp.rows[static_cast<std::size_t>(i)].coeffs[static_cast<std::size_t>(j)];
                shift += rd[static_cast<std::size_t>(j)] * lo[static_cast<std::size_t>(j)];
            }
            rhs[static_cast<std::size_t>(i)] = lp.rows[static_cast<std::size_t>(i)].bound - shift;
        } else {
            rd[static_cast<std::size_t>(i - m_in)] = 1.0;
            rhs[static_cast<std::size_t>(i)] = width[static_cast<std::size_t>(i - m_in)];
        }
    }

    std::vector<int> art_rows;
    for (int i = 0; i < m; ++i)
        if (rhs[static_cast<std::size_t>(i)] < 0.0) art_rows.push_back(i);
    const int n_art = static_cast<int>(art_rows.size());
    const int ncols = n + m + n_art;

    detail::SimplexTableau t(m, ncols + 1);
    std::vector<int> basis(static_cast<std::size_t>(m));
    {
        int art = 0;
        for (int i = 0; i < m; ++i) {
            const double sign = rhs[static_cast<std::size_t>(i)] < 0.0 ? -1.0 : 1.0;
            for (int j = 0; j < n; ++j) t.at(i, j) = sign * rowdata[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            t.at(i, n + i) = sign;  // slack
            t.at(i, ncols) = sign * rhs[static_cast<std::size_t>(i)];
            if (sign < 0.0) {
                t.at(i, n + m + art) = 1.0;
                basis[static_cast<std::size_t>(i)] = n + m + art;
                ++art;
            } else {
                basis[static_cast<std::size_t>(i)] = n + i;
            }
        }
    }

    std::vector<bool> enterable(static_cast<std::size_t>(ncols), true);

    if (n_art > 0) {
        // Phase 1: maximize -sum(artificials); price out the artificial basis.
        for (int i : art_rows)
            for (int c = 0; c <= ncols; ++c) t.at(m, c) += t.at(i, c);
        for (int a = 0; a < n_art; ++a) t.at(m, n + m + a) = 0.0;
        if (!detail::simplex_iterate(t, basis, enterable))
            throw std::runtime_error("simplex: phase-1 unbounded");
        if (t.at(m, ncols) > kFeasEps) return {LpStatus::Infeasible, 0.0, {}};
        // Drive leftover artificials out of the basis where possible.
        for (int i = 0; i < m; ++i) {
            if (basis[static_cast<std::size_t>(i)] < n + m) continue;
            int pc = -1;
            for (int c = 0; c < n + m; ++c)
                if (std::fabs(t.at(i, c)) > kPivotEps) {
                    pc = c;
                    break;
                }
            if (pc >= 0) {
                t.pivot(i, pc);
                basis[static_cast<std::size_t>(i)] = pc;
            }
        }
        for (int a = 0; a < n_art; ++a) enterable[static_cast<std::size_t>(n + m + a)] = false;
    }

    // Phase 2: real objective over the shifted variables.
    for (int c = 0; c <= ncols; ++c) t.at(m, c) = 0.0;
    for (int j = 0; j < n; ++j) t.at(m, j) = lp.objective[static_cast<std::size_t>(j)];
    for (int i = 0; i < m; ++i) {
        const int b = basis[static_cast<std::size_t>(i)];
        const double f = t.at(m, b);
        if (f != 0.0)
            for (int c = 0; c <= ncols; ++c) t.at(m, c) -= f * t.at(i, c);
    }
    if (!detail::simplex_iterate(t, basis, enterable)) return {LpStatus::Unbounded, 0.0, {}};

    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[static_cast<std::size_t>(i)] < n)
            y[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] = t.at(i, ncols);

    SimplexResult res;
    res.status = LpStatus::Optimal;
    res.point.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        res.point[static_cast<std::size_t>(j)] =
            y[static_cast<std::size_t>(j)] + lo[static_cast<std::size_t>(j)];
    res.value = 0.0;
    for (int j = 0; j < n; ++j)
        res.value += lp.objective[static_cast<std::size_t>(j)] * res.point[static_cast<std::size_t>(j)];
    return res;
}

// ---------------------------------------------------------------------------
// Branch and bound over axis-aligned boxes.

struct Box {
    std::vector<double> lo, hi;

    int dimension() const { return static_cast<int>(lo.size()); }

    double volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
        return v;
    }

    int widest_dimension() const {
        int best = 0;
        double w = -1.0;
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (hi[i] - lo[i] > w) w = hi[i] - lo[i], best = static_cast<int>(i);
        return best;
    }

    std::vector<double> center() const {
        std::vector<double> c(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
        return c;
    }

    bool contains(const Box& other, double tol = 1e-12) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (other.lo[i] < lo[i] - tol || other.hi[i] > hi[i] + tol) return false;
        return true;
    }
};

struct SamplePoint {
    std::vector<double> point;
    double value = 0.0;
};

// A bounded maximization problem with a caller-supplied linear relaxation:
// the relaxer must return an LP whose maximum upper-bounds the true
// objective on the box. That contract is audited by sampling at every node.
struct RelaxableProblem {
    int dimension = 0;
    Box root;
    std::function<LinearProgram(const Box&)> relaxer;
    std::function<double(std::span<const double>)> objective;
    // Feasible sample inside a box; defaults to the box center.
    std::function<SamplePoint(const Box&)> sample;

    SamplePoint sample_in(const Box& box) const {
        if (sample) return sample(box);
        SamplePoint s;
        s.point = box.center();
        s.value = objective(s.point);
        return s;
    }
};

enum class BnbOutcome { Verified, Refuted, Inconclusive };

inline const char* to_string(BnbOutcome o) {
    switch (o) {
        case BnbOutcome::Verified: return "verified";
        case BnbOutcome::Refuted: return "refuted";
        default: return "inconclusive";
    }
}

struct BoundedLeaf {
    Box box;
    double lp_bound = 0.0;
};

struct BoundCertificate {
    double target = 0.0;
    std::vector<BoundedLeaf> leaves;   // partition of the root box
    double global_bound = 0.0;         // max leaf bound
    bool verified = false;             // global_bound < target, strictly
    long node_count = 0;
    int max_depth = 0;
};

struct BnbResult {
    BnbOutcome outcome = BnbOutcome::Inconclusive;
    std::optional<BoundCertificate> certificate;
    std::optional<SamplePoint> witness;
    long node_count = 0;
};

// Depth-first: relax on the box; a bound strictly below the target closes
// the leaf; a sampled objective value at or above the target refutes with a
// witness; otherwise split the widest variable at its midpoint.
inline BnbResult branch_and_bound(const RelaxableProblem& p, double target, long max_nodes) {
    struct Node {
        Box box;
        int depth;
    };
    std::vector<Node> stack{{p.root, 0}};
    std::vector<BoundedLeaf> leaves;
    long nodes = 0;
    int max_depth = 0;

    while (!stack.empty()) {
        if (nodes >= max_nodes) return {BnbOutcome::Inconclusive, std::nullopt, std::nullopt, nodes};
        Node node = std::move(stack.back());
        stack.pop_back();
        ++nodes;
        max_depth = std::max(max_depth, node.depth);

        const SimplexResult rel = simplex_max(p.relaxer(node.box));
        if (rel.status == LpStatus::Unbounded)
            throw std::runtime_error("branch_and_bound: relaxation is unbounded");
        const double bound = rel.status == LpStatus::Infeasible
                                 ? -std::numeric_limits<double>::infinity()
                                 : rel.value;

        const SamplePoint sample = p.sample_in(node.box);
        if (sample.value > bound + 1e-9)
            throw SoundnessViolation("branch_and_bound: sampled objective " +
                                     std::to_string(sample.value) + " exceeds relaxation bound " +
                                     std::to_string(bound));

        if (bound < target) {
            leaves.push_back({node.box, bound});
            continue;
        }
        if (sample.value >= target)
            return {BnbOutcome::Refuted, std::nullopt, sample, nodes};

        const int d = node.box.widest_dimension();
        const double mid = 0.5 * (node.box.lo[static_cast<std::size_t>(d)] +
                                  node.box.hi[static_cast<std::size_t>(d)]);
        Box lo_half = node.box, hi_half = node.box;
        lo_half.hi[static_cast<std::size_t>(d)] = mid;
        hi_half.lo[static_cast<std::size_t>(d)] = mid;
        stack.push_back({std::move(lo_half), node.depth + 1});
        stack.push_back({std::move(hi_half), node.depth + 1});
    }

    std::sort(leaves.begin(), leaves.end(), [](const BoundedLeaf& a, const BoundedLeaf& b) {
        if (a.box.lo != b.box.lo) return a.box.lo < b.box.lo;
        return a.box.hi < b.box.hi;
    });
    BoundCertificate cert;
    cert.target = target;
    cert.leaves = std::move(leaves);
    cert.global_bound = -std::numeric_limits<double>::infinity();
    for (const auto& leaf : cert.leaves) cert.global_bound = std::max(cert.global_bound, leaf.lp_bound);
    cert.verified = cert.global_bound < target;
    cert.node_count = nodes;
    cert.max_depth = max_depth;
    return {BnbOutcome::Verified, std::move(cert), std::nullopt, nodes};
}

// Leaf boxes must lie in the root and their volumes must sum to its volume.
struct TilingAudit {
    bool pass = false;
    double relative_volume_error = 0.0;
};

inline TilingAudit leaf_tiling_audit(const BoundCertificate& cert, const Box& root) {
    TilingAudit audit;
    double sum = 0.0;
    for (const auto& leaf : cert.leaves) {
        if (!root.contains(leaf.box)) return audit;
        sum += leaf.box.volume();
    }
    audit.relative_volume_error = std::fabs(sum - root.volume()) / root.volume();
    audit.pass = audit.relative_volume_error <= 1e-9;
    return audit;
}

// Uniform samples of the true objective in every closed leaf must respect
// the leaf's certified bound.
inline bool soundness_sampling_audit(const RelaxableProblem& p, const BoundCertificate& cert,
                                     int samples_per_leaf, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& leaf : cert.leaves) {
        for (int s = 0; s < samples_per_leaf; ++s) {
            std::vector<double> x(leaf.box.lo.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] = leaf.box.lo[i] + unit(rng) * (leaf.box.hi[i] - leaf.box.lo[i]);
            if (p.objective(x) > leaf.lp_bound + 1e-9) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Demonstration score over a plane graph: a documented stand-in objective,
// NOT any packing score. One variable per edge in [2, 2*t0]; the score is a
// sum over faces of a concave per-edge term, relaxed by tangent cuts.

namespace face_demo {

inline constexpr double kPeak = 2.2;

inline double edge_term(double x) { return 0.25 - (x - kPeak) * (x - kPeak); }
inline double edge_term_deriv(double x) { return -2.0 * (x - kPeak); }

// Edge weights: the number of faces each edge lies on (two, for a valid
// plane graph; computed rather than assumed).
inline std::vector<double> edge_weights(const stargraph::PlaneGraph& g) {
    std::vector<double> w(g.edges.size(), 0.0);
    std::map<std::pair<int, int>, int> index;
    for (std::size_t e = 0; e < g.edges.size(); ++e) index[g.edges[e]] = static_cast<int>(e);
    for (const auto& f : g.faces) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            const int a = f[i], b = f[(i + 1) % f.size()];
            w[static_cast<std::size_t>(index.at({std::min(a, b), std::max(a, b)}))] += 1.0;
        }
    }
    return w;
}

}  // namespace face_demo

inline RelaxableProblem make_face_score_problem(const stargraph::PlaneGraph& g) {
    const int ne = g.edge_count();
    if (ne == 0) throw std::invalid_argument("face score: graph has no edges");
    const auto weights = face_demo::edge_weights(g);

    RelaxableProblem p;
    p.dimension = ne;
    p.root.lo.assign(static_cast<std::size_t>(ne), 2.0);
    p.root.hi.assign(static_cast<std::size_t>(ne), constants::kTwoT0);

    p.objective = [weights](std::span<const double> x) {
        double v = 0.0;
        for (std::size_t e = 0; e < weights.size(); ++e) v += weights[e] * face_demo::edge_term(x[e]);
        return v;
    };

    // Exact separable maximum over the box; doubles as the refutation probe.
    p.sample = [weights](const Box& box) {
        SamplePoint s;
        s.point.resize(box.lo.size());
        s.value = 0.0;
        for (std::size_t e = 0; e < box.lo.size(); ++e) {
            s.point[e] = std::clamp(face_demo::kPeak, box.lo[e], box.hi[e]);
            s.value += weights[e] * face_demo::edge_term(s.point[e]);
        }
        return s;
    };

    // Variables [x_0..x_{E-1}, t_0..t_{E-1}]; t_e overestimates term(x_e)
    // via five tangent cuts, the objective collects the weighted t's, and
    // each face contributes a (redundant) structural length row.
    const auto faces = g.faces;
    const auto edges = g.edges;
    p.relaxer = [weights, faces, edges, ne](const Box& box) {
        LinearProgram lp;
        lp.objective.assign(static_cast<std::size_t>(2 * ne), 0.0);
        for (int e = 0; e < ne; ++e) lp.objective[static_cast<std::size_t>(ne + e)] = weights[static_cast<std::size_t>(e)];
        lp.variable_bounds.resize(static_cast<std::size_t>(2 * ne));
        for (int e = 0; e < ne; ++e) {
            lp.variable_bounds[static_cast<std::size_t>(e)] = {box.lo[static_cast<std::size_t>(e)],
                                                               box.hi[static_cast<std::size_t>(e)]};
            lp.variable_bounds[static_cast<std::size_t>(ne + e)] = {-2.0, 1.0};
        }
        for (int e = 0; e < ne; ++e) {
            const double a = box.lo[static_cast<std::size_t>(e)], b = box.hi[static_cast<std::size_t>(e)];
            for (double x0 : {a, a + (b - a) * 0.25, 0.5 * (a + b), b - (b - a) * 0.25, b}) {
                LinearProgram::Row row;
                row.coeffs.assign(static_cast<std::size_t>(2 * ne), 0.0);
                row.coeffs[static_cast<std::size_t>(ne + e)] = 1.0;
                row.coeffs[static_cast<std::size_t>(e)] = -face_demo::edge_term_deriv(x0);
                row.bound = face_demo::edge_term(x0) - face_demo::edge_term_deriv(x0) * x0;
                lp.rows.push_back(std::move(row));
            }
        }
        std::map<std::pair<int, int>, int> index;
        for (std::size_t e = 0; e < edges.size(); ++e) index[edges[e]] = static_cast<int>(e);
        for (const auto& f : faces) {
            LinearProgram::Row row;
            row.coeffs.assign(static_cast<std::size_t>(2 * ne), 0.0);
            for (std::size_t i = 0; i < f.size(); ++i) {
                const int a = f[i], b = f[(i + 1) % f.size()];
                row.coeffs[static_cast<std::size_t>(index.at({std::min(a, b), std::max(a, b)}))] = 1.0;
            }
            row.bound = static_cast<double>(f.size()) * constants::kTwoT0;
            lp.rows.push_back(std::move(row));
        }
        return lp;
    };
    return p;
}

// Closed-form optimum of the demonstration score (separability).
inline double face_score_optimum(const stargraph::PlaneGraph& g) {
    const auto p = make_face_score_problem(g);
    return p.sample_in(p.root).value;
}

inline BnbResult face_score_demo(const stargraph::PlaneGraph& g, double target, long max_nodes) {
    return branch_and_bound(make_face_score_problem(g), target, max_nodes);
}

}  // namespace sphpack::lp
