#pragma once

// Discretized (eps,T)-chains: chain graphs on a grid of M, chain sets, the
// lift/projection check and the small-perturbation sweep.

#include "morseflow/error.hpp"
#include "morseflow/graph.hpp"
#include "morseflow/hybrid.hpp"
#include "morseflow/morse.hpp"
#include "morseflow/parallel.hpp"
#include "morseflow/scc.hpp"
#include "morseflow/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace morseflow {

struct ChainOptions {
    int grid_n = 201;
    double eps = 0.02;
    double T = -1.0;     ///< default 5 h
    double T_max = -1.0; ///< default 2 T
    int word_len = 3;
    int threads = 1;
};

struct ChainEdge {
    int from = 0;
    int to = 0;
    std::size_t signal = 0; ///< index into ChainGraph::signals
    double t = 0.0;
};

struct ChainGraph {
    std::vector<double> grid;
    double spacing = 0.0;
    double eps = 0.0;
    double T = 0.0;
    double T_max = 0.0;
    int word_len = 0;
    std::vector<SymbolicSignal> signals;
    std::vector<ChainEdge> edges;             ///< sorted by (from, to), one witness each
    std::vector<std::vector<int>> successors; ///< sorted

    std::size_t size() const { return grid.size(); }

    bool has_edge(int i, int j) const
    {
        const auto& s = successors.at(i);
        return std::binary_search(s.begin(), s.end(), j);
    }
};

/// Sampled times T, T+h, ..., up to T_max (always including T).
inline std::vector<double> chain_times(double T, double T_max, double h)
{
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double t = T + k * h;
        if (k > 0 && t > T_max + 1e-9 * h) {
            break;
        }
        out.push_back(t);
    }
    return out;
}

/// Edge i -> j whenever some sampled signal carries grid[i] to within eps of
/// grid[j] at a sampled time t >= T.
inline ChainGraph build_chain_graph(const HybridSystem& sys, const ChainOptions& opt,
                                    std::vector<double> grid = {})
{
    const double h = sys.h();
    const auto& space = sys.space();
    if (grid.empty()) {
        if (opt.grid_n < 2) {
            throw PreconditionError("chain graph needs at least two grid points");
        }
        grid = uniform_grid(space, opt.grid_n);
    } else if (grid.size() < 2) {
        throw PreconditionError("chain graph needs at least two grid points");
    }
    if (!(opt.eps > 0.0)) {
        throw PreconditionError("chain graph needs eps > 0");
    }
    ChainGraph cg;
    cg.grid = std::move(grid);
    cg.spacing = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < cg.grid.size(); ++i) {
        cg.spacing = std::min(cg.spacing, cg.grid[i] - cg.grid[i - 1]);
    }
    cg.eps = opt.eps;
    cg.T = opt.T < 0.0 ? 5.0 * h : opt.T;
    cg.T_max = opt.T_max < 0.0 ? 2.0 * cg.T : opt.T_max;
    if (cg.T_max < cg.T) {
        throw PreconditionError("chain graph needs T_max >= T");
    }
    cg.word_len = opt.word_len;
    cg.signals = signal_family(sys.graph(), opt.word_len, h);
    const auto times = chain_times(cg.T, cg.T_max, h);

    const std::size_t n = cg.grid.size();
    std::vector<std::vector<ChainEdge>> found(n);
    parallel_for(n, opt.threads, [&](std::size_t i) {
        std::vector<char> seen(n, 0);
        for (std::size_t s = 0; s < cg.signals.size(); ++s) {
            FlowCursor cursor(sys, cg.signals[s], cg.grid[i]);
            for (double t : times) {
                cursor.advance_to(t);
                const double y = cursor.x();
                for (std::size_t j = 0; j < n; ++j) {
                    if (!seen[j] && space.distance(y, cg.grid[j]) <= cg.eps) {
                        seen[j] = 1;
                        found[i].push_back({static_cast<int>(i), static_cast<int>(j), s, t});
                    }
                }
            }
        }
        std::sort(found[i].begin(), found[i].end(), [](const ChainEdge& a, const ChainEdge& b) { return a.to < b.to; });
    });
    cg.successors.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& e : found[i]) {
            cg.successors[i].push_back(e.to);
            cg.edges.push_back(e);
        }
    }
    return cg;
}

struct ChainComponent {
    std::vector<int> members; ///< grid indices, ascending
    double lo = 0.0;          ///< smallest member point
    double hi = 0.0;          ///< largest member point
    std::optional<std::size_t> witness_signal; ///< keeps witness_member in the tube
    int witness_member = -1;
};

struct ChainSetResult {
    std::vector<ChainComponent> components;

    /// Index of the component containing grid node i.
    std::optional<std::size_t> component_of(int i) const
    {
        for (std::size_t c = 0; c < components.size(); ++c) {
            const auto& m = components[c].members;
            if (std::binary_search(m.begin(), m.end(), i)) {
                return c;
            }
        }
        return std::nullopt;
    }
};

/// Strongly connected components of the chain graph that carry a cycle.
inline ChainSetResult chain_sets(const ChainGraph& cg)
{
    ChainSetResult out;
    for (const auto& comp : strongly_connected_components(cg.successors)) {
        const int first = static_cast<int>(comp.front());
        if (comp.size() == 1 && !cg.has_edge(first, first)) {
            continue;
        }
        ChainComponent c;
        for (auto i : comp) {
            c.members.push_back(static_cast<int>(i));
        }
        c.lo = cg.grid[c.members.front()];
        c.hi = cg.grid[c.members.back()];
        out.components.push_back(std::move(c));
    }
    return out;
}

namespace detail {

inline double tube_distance(const ChainGraph& cg, const std::vector<int>& members, double y, const StateSpace& space)
{
    double best = std::numeric_limits<double>::infinity();
    for (int m : members) {
        best = std::min(best, space.distance(y, cg.grid[m]));
    }
    return best;
}

/// Whether the forward trajectory of grid[member] under signal s stays within
/// eps of the component's nodes over [0, horizon].
inline bool stays_in_tube(const HybridSystem& sys, const ChainGraph& cg, const std::vector<int>& members, int member,
                          const SymbolicSignal& s, double horizon)
{
    FlowCursor cursor(sys, s, cg.grid[member]);
    const double dt = sys.h() / 8.0;
    const int n = static_cast<int>(std::ceil(horizon / dt));
    for (int j = 1; j <= n; ++j) {
        cursor.advance_to(std::min(horizon, j * dt));
        if (tube_distance(cg, members, cursor.x(), sys.space()) > cg.eps) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/// Chain sets with an invariance witness: the first (member, signal) pair,
/// in index order, whose forward trajectory stays in the component tube.
inline ChainSetResult chain_sets(const HybridSystem& sys, const ChainGraph& cg, double horizon = -1.0)
{
    auto out = chain_sets(cg);
    const double hz = horizon < 0.0 ? 50.0 * sys.h() : horizon;
    for (auto& c : out.components) {
        for (int m : c.members) {
            for (std::size_t s = 0; s < cg.signals.size() && !c.witness_signal; ++s) {
                if (detail::stays_in_tube(sys, cg, c.members, m, cg.signals[s], hz)) {
                    c.witness_signal = s;
                    c.witness_member = m;
                }
            }
            if (c.witness_signal) {
                break;
            }
        }
    }
    return out;
}

struct LiftProjectionResult {
    bool invariant = true;       ///< condition 1 at grid scale
    bool chain_transitive = true; ///< condition 2 within the component
    std::vector<std::string> diagnostics;

    bool passed() const { return invariant && chain_transitive; }
};

/// Checks a node set against the two chain-set conditions at grid scale.
///
/// Condition 1: every member has a sampled signal keeping it within eps of
/// the set for `horizon` forward, and a chain-graph predecessor inside the set.
/// Condition 2: every ordered pair of members is joined by a chain that never
/// leaves the set.
inline LiftProjectionResult lift_projection_check(const HybridSystem& sys, const ChainGraph& cg,
                                                  const std::vector<int>& members, double horizon = -1.0,
                                                  int threads = 1)
{
    LiftProjectionResult out;
    if (members.empty()) {
        out.invariant = false;
        out.diagnostics.push_back("empty node set");
        return out;
    }
    const double hz = horizon < 0.0 ? 50.0 * sys.h() : horizon;
    std::vector<char> in_set(cg.size(), 0);
    for (int m : members) {
        in_set.at(m) = 1;
    }
    std::vector<char> kept(members.size(), 0);
    parallel_for(members.size(), threads, [&](std::size_t k) {
        for (const auto& s : cg.signals) {
            if (detail::stays_in_tube(sys, cg, members, members[k], s, hz)) {
                kept[k] = 1;
                return;
            }
        }
    });
    std::vector<char> has_pred(cg.size(), 0);
    for (const auto& e : cg.edges) {
        if (in_set[e.from] && in_set[e.to]) {
            has_pred[e.to] = 1;
        }
    }
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (!kept[k]) {
            out.invariant = false;
            out.diagnostics.push_back("node " + std::to_string(members[k]) + " (x=" + fmt(cg.grid[members[k]])
                                      + ") leaves the eps-tube under every sampled signal");
        }
        if (!has_pred[members[k]]) {
            out.invariant = false;
            out.diagnostics.push_back("node " + std::to_string(members[k]) + " (x=" + fmt(cg.grid[members[k]])
                                      + ") has no chain predecessor in the set");
        }
    }
    for (int a : members) {
        std::vector<char> reached(cg.size(), 0);
        std::vector<int> frontier{a};
        while (!frontier.empty()) {
            const int v = frontier.back();
            frontier.pop_back();
            for (int w : cg.successors[v]) {
                if (in_set[w] && !reached[w]) {
                    reached[w] = 1;
                    frontier.push_back(w);
                }
            }
        }
        for (int b : members) {
            if (!reached[b]) {
                out.chain_transitive = false;
                out.diagnostics.push_back("no chain from node " + std::to_string(a) + " to node " + std::to_string(b)
                                          + " inside the set");
                break;
            }
        }
    }
    return out;
}

/// Hausdorff distance between two finite point sets of M.
inline double hausdorff(const std::vector<double>& a, const std::vector<double>& b, const StateSpace& space)
{
    auto one_sided = [&](const std::vector<double>& p, const std::vector<double>& q) {
        double worst = 0.0;
        for (double x : p) {
            double best = std::numeric_limits<double>::infinity();
            for (double y : q) {
                best = std::min(best, space.distance(x, y));
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

struct SweepOptions {
    std::vector<double> controls{-1.0, 0.0, 1.0}; ///< values of u, one vertex each
    double lo = -1.5;
    double hi = 1.5;
    double h = 0.5;
    ChainOptions chain{301, 0.02, -1.0, -1.0, 3, 1};
};

struct SweepLevel {
    double rho = 0.0;
    ChainSetResult sets;
    std::vector<int> match;        ///< per component: matched unperturbed component
    std::vector<double> distance;  ///< per component: Hausdorff distance to the match
};

struct SweepResult {
    std::vector<SweepLevel> levels; ///< in the order of rho_list
    double grid_spacing = 0.0;
    double constant = 0.0;          ///< max|u| * max 1/|X'(x*)| over the fixed points of X
    std::size_t reference = 0;      ///< index of the rho = 0 level

    double bound(double rho) const { return 2.0 * (grid_spacing + rho * constant); }

    /// Number of distinct unperturbed components matched at a level.
    std::size_t matched_count(std::size_t level) const
    {
        auto m = levels.at(level).match;
        std::sort(m.begin(), m.end());
        return static_cast<std::size_t>(std::unique(m.begin(), m.end()) - m.begin());
    }
};

inline HybridSystem sweep_system(const VectorField& base, double rho, const SweepOptions& opt)
{
    std::vector<VectorField> fields;
    for (double u : opt.controls) {
        fields.push_back(base.perturbed(rho, u));
    }
    return HybridSystem(DirectedGraph::complete(static_cast<int>(opt.controls.size()), true), std::move(fields),
                        StateSpace::interval(opt.lo, opt.hi), opt.h);
}

/// Chain sets of x' = X(x) + rho*u over a ladder of rho, each matched to the
/// nearest chain set at rho = 0 by Hausdorff distance.
inline SweepResult perturbation_sweep(const VectorField& base, const std::vector<double>& rhos,
                                      const SweepOptions& opt = {})
{
    if (std::find(opt.controls.begin(), opt.controls.end(), 0.0) == opt.controls.end()) {
        throw PreconditionError("perturbation sweep: the control set must contain 0");
    }
    const auto zero_at = std::find(rhos.begin(), rhos.end(), 0.0);
    if (zero_at == rhos.end()) {
        throw PreconditionError("perturbation sweep: the rho list must contain 0");
    }
    for (double r : rhos) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw PreconditionError("perturbation sweep: rho must be non-negative");
        }
    }
    SweepResult out;
    out.reference = static_cast<std::size_t>(zero_at - rhos.begin());
    const StateSpace space = StateSpace::interval(opt.lo, opt.hi);
    double umax = 0.0;
    for (double u : opt.controls) {
        umax = std::max(umax, std::abs(u));
    }
    double inv = 0.0;
    for (double x : fixed_points(base, space)) {
        const double d = std::abs(base.derivative(x));
        if (d > 0.0) {
            inv = std::max(inv, 1.0 / d);
        }
    }
    out.constant = umax * inv;

    std::vector<std::vector<std::vector<double>>> points;
    for (double rho : rhos) {
        const auto sys = sweep_system(base, rho, opt);
        const auto cg = build_chain_graph(sys, opt.chain);
        out.grid_spacing = cg.spacing;
        SweepLevel level;
        level.rho = rho;
        level.sets = chain_sets(cg);
        std::vector<std::vector<double>> pts;
        for (const auto& c : level.sets.components) {
            std::vector<double> p;
            for (int m : c.members) {
                p.push_back(cg.grid[m]);
            }
            pts.push_back(std::move(p));
        }
        points.push_back(std::move(pts));
        out.levels.push_back(std::move(level));
    }
    const auto& ref = points[out.reference];
    for (std::size_t l = 0; l < out.levels.size(); ++l) {
        auto& level = out.levels[l];
        for (const auto& p : points[l]) {
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < ref.size(); ++k) {
                const double d = hausdorff(p, ref[k], space);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(k);
                }
            }
            level.match.push_back(best);
            level.distance.push_back(best_d);
        }
    }
    return out;
}

inline std::string to_dot(const ChainGraph& cg, const ChainSetResult& sets)
{
    std::ostringstream os;
    os << "digraph chains {\n";
    for (std::size_t c = 0; c < sets.components.size(); ++c) {
        os << "  subgraph cluster_" << c << " {\n    label=\"chain set " << c << "\";\n";
        for (int m : sets.components[c].members) {
            os << "    n" << m << ";\n";
        }
        os << "  }\n";
    }
    for (std::size_t i = 0; i < cg.size(); ++i) {
        os << "  n" << i << " [label=\"" << fmt(cg.grid[i]) << "\"];\n";
    }
    for (const auto& e : cg.edges) {
        os << "  n" << e.from << " -> n" << e.to << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace morseflow
