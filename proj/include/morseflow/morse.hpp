#pragma once

// Morse decompositions of the product flow: candidates, the seven checks,
// the order relation, attracting regions, and the self-loop visiting schedule.

#include "morseflow/error.hpp"
#include "morseflow/format.hpp"
#include "morseflow/graph.hpp"
#include "morseflow/hybrid.hpp"
#include "morseflow/limits.hpp"
#include "morseflow/parallel.hpp"
#include "morseflow/scc.hpp"
#include "morseflow/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace morseflow {

/// A finite union of closed intervals of M; a point is a degenerate interval.
struct MPart {
    std::vector<std::pair<double, double>> pieces;

    static MPart point(double p) { return {{{p, p}}}; }
    static MPart interval(double a, double b) { return {{{a, b}}}; }

    bool empty() const { return pieces.empty(); }

    double distance(double x, const StateSpace& space) const
    {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : pieces) {
            if (space.is_circle()) {
                if (space.normalize(x - a) <= b - a) {
                    return 0.0;
                }
                best = std::min({best, space.distance(x, a), space.distance(x, b)});
            } else {
                best = std::min(best, x < a ? a - x : (x > b ? x - b : 0.0));
            }
        }
        return best;
    }

    bool contains(double x, double tol, const StateSpace& space) const { return distance(x, space) <= tol; }

    /// Every point of the estimate's tail lies within tol of this set.
    bool covers(const LimitSetEstimate& est, double tol, const StateSpace& space) const
    {
        const double w = est.width();
        const auto n = static_cast<std::size_t>(std::min(100000.0, std::ceil(w / (0.5 * tol)))) + 1;
        for (std::size_t i = 0; i <= n; ++i) {
            const double y = est.lo + w * static_cast<double>(i) / static_cast<double>(n);
            if (!contains(space.normalize(y), tol, space)) {
                return false;
            }
        }
        return true;
    }

    /// Endpoints and midpoints of every piece.
    std::vector<double> sample_points() const
    {
        std::vector<double> out;
        for (const auto& [a, b] : pieces) {
            out.push_back(a);
            if (b > a) {
                out.push_back(0.5 * (a + b));
                out.push_back(b);
            }
        }
        return out;
    }

    bool intersects(const MPart& other, double tol, const StateSpace& space) const
    {
        for (const auto& [a, b] : pieces) {
            for (const auto& [c, d] : other.pieces) {
                if (space.is_circle()) {
                    if (MPart{{{a, b}}}.contains(c, tol, space) || MPart{{{c, d}}}.contains(a, tol, space)) {
                        return true;
                    }
                } else if (a <= d + tol && c <= b + tol) {
                    return true;
                }
            }
        }
        return false;
    }

    std::string describe() const
    {
        std::ostringstream os;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            os << (i ? " u " : "");
            if (pieces[i].first == pieces[i].second) {
                os << "{" << fmt(pieces[i].first) << "}";
            } else {
                os << "[" << fmt(pieces[i].first) << "," << fmt(pieces[i].second) << "]";
            }
        }
        return os.str();
    }
};

enum class DeltaKind { All, ConstantAt, LiftOf };

/// The signal half of a Morse candidate, described symbolically.
struct DeltaPart {
    DeltaKind kind = DeltaKind::All;
    Vertex vertex = -1;           ///< for ConstantAt
    std::vector<Vertex> members;  ///< for LiftOf, sorted

    static DeltaPart all() { return {}; }
    static DeltaPart constant_at(Vertex v) { return {DeltaKind::ConstantAt, v, {}}; }
    static DeltaPart lift_of(const CommClass& c) { return {DeltaKind::LiftOf, -1, c.members}; }

    bool has(Vertex v) const { return std::binary_search(members.begin(), members.end(), v); }

    /// Membership of an admissible signal.
    bool contains(const SymbolicSignal& s) const
    {
        switch (kind) {
        case DeltaKind::All:
            return true;
        case DeltaKind::ConstantAt:
            return std::all_of(s.word().begin(), s.word().end(), [&](Vertex v) { return v == vertex; });
        case DeltaKind::LiftOf:
            return std::all_of(s.word().begin(), s.word().end(), [&](Vertex v) { return has(v); });
        }
        return false;
    }

    /// The shift-limit of some signal lies in this family.
    bool contains_limit(const SignalLimit& lim) const
    {
        switch (kind) {
        case DeltaKind::All:
            return true;
        case DeltaKind::ConstantAt:
            return lim.constant && lim.vertices.front() == vertex;
        case DeltaKind::LiftOf:
            return std::all_of(lim.vertices.begin(), lim.vertices.end(), [&](Vertex v) { return has(v); });
        }
        return false;
    }

    /// Some signal lies in both families.
    bool intersects(const DeltaPart& o) const
    {
        if (kind == DeltaKind::All || o.kind == DeltaKind::All) {
            return true;
        }
        if (kind == DeltaKind::ConstantAt && o.kind == DeltaKind::ConstantAt) {
            return vertex == o.vertex;
        }
        if (kind == DeltaKind::ConstantAt) {
            return o.has(vertex);
        }
        if (o.kind == DeltaKind::ConstantAt) {
            return has(o.vertex);
        }
        for (Vertex v : members) {
            if (o.has(v)) {
                return true;
            }
        }
        return false;
    }

    std::string describe() const
    {
        switch (kind) {
        case DeltaKind::All:
            return "all admissible signals";
        case DeltaKind::ConstantAt:
            return "constant at vertex " + std::to_string(vertex);
        case DeltaKind::LiftOf: {
            std::ostringstream os;
            os << "lift of class {";
            for (std::size_t i = 0; i < members.size(); ++i) {
                os << (i ? "," : "") << members[i];
            }
            os << "}";
            return os.str();
        }
        }
        return "";
    }
};

struct MorseCandidate {
    std::string name;
    MPart m;
    DeltaPart delta;

    bool contains(double x, const SymbolicSignal& s, double tol, const StateSpace& space) const
    {
        return m.contains(x, tol, space) && delta.contains(s);
    }
};

struct SamplingPlan {
    std::vector<double> x_grid; ///< empty: grid_n evenly spaced points of M
    int grid_n = 21;
    int word_len = 3;
    std::vector<double> taus{0.0};
    std::vector<std::int64_t> anchors{-20, -3, 0, 3, 20};
    double burn = -1.0;               ///< default 200 h
    double horizon = -1.0;            ///< default 400 h
    double limit_tol = 1e-2;
    double invariance_tol = 1e-6;
    double invariance_horizon = -1.0; ///< default 50 h
    double shell_radius = 0.02;
    double escape_horizon = -1.0;     ///< default 100 h
    double membership_tol = 1e-9;
    int threads = 1;
};

inline std::vector<double> uniform_grid(const StateSpace& space, int n)
{
    if (n < 1) {
        throw PreconditionError("grid needs at least one point");
    }
    std::vector<double> out(n);
    if (space.is_circle()) {
        for (int i = 0; i < n; ++i) {
            out[i] = space.period() * i / n;
        }
    } else if (n == 1) {
        out[0] = 0.5 * (space.lo() + space.hi());
    } else {
        for (int i = 0; i < n; ++i) {
            out[i] = space.lo() + (space.hi() - space.lo()) * i / (n - 1);
        }
        out.back() = space.hi();
    }
    return out;
}

struct ConditionResult {
    explicit ConditionResult(std::string n = {}) : name(std::move(n)) {}

    std::string name;
    bool passed = true;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::vector<std::string> witnesses; ///< first few failures

    void fail(std::string witness)
    {
        passed = false;
        ++failures;
        if (witnesses.size() < 5) {
            witnesses.push_back(std::move(witness));
        }
    }
};

/// A sampled product point outside every candidate whose alpha-limit lies in
/// candidate `from` and omega-limit in candidate `to`.
struct OrderEdge {
    int from = -1;
    int to = -1;
    double x = 0.0;
    SymbolicSignal sig;
    std::size_t count = 0; ///< samples realizing this edge
};

struct MorseReport {
    std::vector<std::string> candidate_names;
    std::vector<ConditionResult> conditions;
    std::vector<OrderEdge> order_edges;
    std::size_t samples = 0;

    bool passed() const
    {
        return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.passed; });
    }

    const ConditionResult& condition(const std::string& name) const
    {
        for (const auto& c : conditions) {
            if (c.name == name) {
                return c;
            }
        }
        throw Error("no condition named " + name);
    }

    const OrderEdge* edge(int from, int to) const
    {
        for (const auto& e : order_edges) {
            if (e.from == from && e.to == to) {
                return &e;
            }
        }
        return nullptr;
    }

    /// Reflexive-transitive closure of the order edges: reach[i][k] when M_i
    /// precedes M_k.
    std::vector<std::vector<char>> order_closure() const
    {
        const std::size_t n = candidate_names.size();
        std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
        for (std::size_t i = 0; i < n; ++i) {
            reach[i][i] = 1;
        }
        for (const auto& e : order_edges) {
            reach[e.from][e.to] = 1;
        }
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
                }
            }
        }
        return reach;
    }
};

namespace detail {

inline std::vector<SymbolicSignal> family_for(const DirectedGraph& g, const DeltaPart& d,
                                              const std::vector<SymbolicSignal>& all, double h)
{
    if (d.kind == DeltaKind::ConstantAt) {
        if (!g.has_self_loop(d.vertex)) {
            return {};
        }
        return {SymbolicSignal::constant(d.vertex, h)};
    }
    std::vector<SymbolicSignal> out;
    for (const auto& s : all) {
        if (d.contains(s)) {
            out.push_back(s);
        }
    }
    return out;
}

inline std::string point_text(double x, const SymbolicSignal& s)
{
    return "x=" + fmt(x) + " signal=" + describe(s);
}

inline int match_candidate(const std::vector<MorseCandidate>& cands, const LimitSetEstimate& est,
                           const SignalLimit& lim, double tol, const StateSpace& space)
{
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (cands[i].delta.contains_limit(lim) && cands[i].m.covers(est, tol, space)) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

} // namespace detail

/// Checks the seven defining conditions of a Morse decomposition on finite
/// samples and records the order relation from connecting orbits.
inline MorseReport verify_morse_decomposition(const HybridSystem& sys, const std::vector<MorseCandidate>& cands,
                                              const SamplingPlan& plan = {})
{
    if (cands.empty()) {
        throw PreconditionError("verify_morse_decomposition: no candidates");
    }
    const auto& g = sys.graph();
    const auto& space = sys.space();
    const double h = sys.h();
    const double inv_horizon = plan.invariance_horizon < 0.0 ? 50.0 * h : plan.invariance_horizon;
    const double escape = plan.escape_horizon < 0.0 ? 100.0 * h : plan.escape_horizon;
    const LimitOptions lim_opt{plan.burn, plan.horizon, 1e-3, -1.0};
    const auto grid = plan.x_grid.empty() ? uniform_grid(space, plan.grid_n) : plan.x_grid;
    const auto family = signal_family(g, plan.word_len, h, plan.taus, plan.anchors);

    MorseReport report;
    for (const auto& c : cands) {
        report.candidate_names.push_back(c.name);
    }

    ConditionResult nonvoid{"nonvoid"};
    ConditionResult disjoint{"pairwise_disjoint"};
    ConditionResult invariant{"invariant"};
    ConditionResult isolated{"isolated"};
    ConditionResult compact{"compact"};
    ConditionResult containment{"limit_containment"};
    ConditionResult no_cycles{"no_cycles"};

    const auto classes = communicating_classes(g);
    for (const auto& c : cands) {
        ++nonvoid.checks;
        if (c.m.empty()) {
            nonvoid.fail(c.name + ": empty state-space part");
        }
        if (detail::family_for(g, c.delta, family, h).empty()) {
            nonvoid.fail(c.name + ": no admissible signal is " + c.delta.describe());
        }
        if (c.delta.kind == DeltaKind::LiftOf) {
            const bool is_class = std::any_of(classes.begin(), classes.end(),
                                              [&](const CommClass& k) { return k.members == c.delta.members; });
            if (!is_class) {
                nonvoid.fail(c.name + ": " + c.delta.describe() + " is not a communicating class");
            }
        }
        ++compact.checks;
        for (const auto& [a, b] : c.m.pieces) {
            if (!std::isfinite(a) || !std::isfinite(b) || a > b || !space.contains(a, 1e-12)
                || !space.contains(b, 1e-12)) {
                compact.fail(c.name + ": piece [" + fmt(a) + "," + fmt(b) + "] is not a closed subset of M");
            }
        }
    }

    for (std::size_t i = 0; i < cands.size(); ++i) {
        for (std::size_t k = i + 1; k < cands.size(); ++k) {
            ++disjoint.checks;
            if (cands[i].m.intersects(cands[k].m, plan.membership_tol, space)
                && cands[i].delta.intersects(cands[k].delta)) {
                disjoint.fail(cands[i].name + " and " + cands[k].name + " share points of "
                              + cands[i].m.describe() + " with " + cands[k].delta.describe());
            }
        }
    }

    // Invariance: points of each candidate stay in it under signals of its family.
    struct Task {
        std::size_t cand;
        double x;
        SymbolicSignal sig;
    };
    std::vector<Task> inv_tasks;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        for (double x : cands[i].m.sample_points()) {
            for (const auto& s : detail::family_for(g, cands[i].delta, family, h)) {
                inv_tasks.push_back({i, x, s});
            }
        }
    }
    std::vector<double> inv_excursion(inv_tasks.size(), 0.0);
    parallel_for(inv_tasks.size(), plan.threads, [&](std::size_t t) {
        const auto& task = inv_tasks[t];
        double worst = 0.0;
        for (int dir : {1, -1}) {
            FlowCursor cursor(sys, task.sig, task.x, dir);
            const int n = static_cast<int>(std::ceil(inv_horizon / (h / 8.0)));
            for (int j = 1; j <= n; ++j) {
                cursor.advance_to(dir * std::min(inv_horizon, j * h / 8.0));
                worst = std::max(worst, cands[task.cand].m.distance(cursor.x(), space));
            }
        }
        inv_excursion[t] = worst;
    });
    for (std::size_t t = 0; t < inv_tasks.size(); ++t) {
        ++invariant.checks;
        if (inv_excursion[t] > plan.invariance_tol) {
            invariant.fail(cands[inv_tasks[t].cand].name + ": " + detail::point_text(inv_tasks[t].x, inv_tasks[t].sig)
                           + " drifts " + fmt(inv_excursion[t]) + " away");
        }
    }

    // Isolation: points of a shell (r, 2r) around each candidate leave the
    // 2r-neighbourhood in forward or backward time.
    const double r = plan.shell_radius;
    std::vector<Task> shell_tasks;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        for (const auto& [a, b] : cands[i].m.pieces) {
            for (double frac : {1.25, 1.5, 1.75}) {
                for (double x : {a - frac * r, b + frac * r}) {
                    if (!space.is_circle() && !space.contains(x)) {
                        continue;
                    }
                    const double xn = space.normalize(x);
                    if (cands[i].m.distance(xn, space) <= r) {
                        continue;
                    }
                    bool elsewhere = false;
                    for (std::size_t k = 0; k < cands.size(); ++k) {
                        elsewhere = elsewhere || (k != i && cands[k].m.contains(xn, plan.membership_tol, space));
                    }
                    if (elsewhere) {
                        continue;
                    }
                    for (const auto& s : family) {
                        shell_tasks.push_back({i, xn, s});
                    }
                }
            }
        }
    }
    std::vector<char> escaped(shell_tasks.size(), 0);
    parallel_for(shell_tasks.size(), plan.threads, [&](std::size_t t) {
        const auto& task = shell_tasks[t];
        const int n = static_cast<int>(std::ceil(escape / (h / 8.0)));
        for (int dir : {1, -1}) {
            FlowCursor cursor(sys, task.sig, task.x, dir);
            for (int j = 1; j <= n; ++j) {
                cursor.advance_to(dir * std::min(escape, j * h / 8.0));
                if (cands[task.cand].m.distance(cursor.x(), space) > 2.0 * r) {
                    escaped[t] = 1;
                    return;
                }
            }
        }
    });
    for (std::size_t t = 0; t < shell_tasks.size(); ++t) {
        ++isolated.checks;
        if (!escaped[t]) {
            isolated.fail(cands[shell_tasks[t].cand].name + ": " + detail::point_text(shell_tasks[t].x, shell_tasks[t].sig)
                          + " stays in the isolating shell");
        }
    }

    // Limit containment and connecting orbits.
    struct Outcome {
        int alpha = -1;
        int omega = -1;
        LimitSetEstimate alpha_est;
        LimitSetEstimate omega_est;
    };
    const std::size_t n_samples = grid.size() * family.size();
    std::vector<Outcome> outcomes(n_samples);
    parallel_for(n_samples, plan.threads, [&](std::size_t t) {
        const double x = grid[t / family.size()];
        const auto& s = family[t % family.size()];
        Outcome o;
        o.omega_est = estimate_limit(sys, {x, s}, 1, lim_opt);
        o.alpha_est = estimate_limit(sys, {x, s}, -1, lim_opt);
        o.omega = detail::match_candidate(cands, o.omega_est, signal_omega(s), plan.limit_tol, space);
        o.alpha = detail::match_candidate(cands, o.alpha_est, signal_alpha(s), plan.limit_tol, space);
        outcomes[t] = std::move(o);
    });
    report.samples = n_samples;
    for (std::size_t t = 0; t < n_samples; ++t) {
        const double x = grid[t / family.size()];
        const auto& s = family[t % family.size()];
        const auto& o = outcomes[t];
        containment.checks += 2;
        if (o.omega < 0) {
            containment.fail("omega of " + detail::point_text(x, s) + " is [" + fmt(o.omega_est.lo) + ","
                             + fmt(o.omega_est.hi) + "] with signal limit outside every candidate");
        }
        if (o.alpha < 0) {
            containment.fail("alpha of " + detail::point_text(x, s) + " is [" + fmt(o.alpha_est.lo) + ","
                             + fmt(o.alpha_est.hi) + "] with signal limit outside every candidate");
        }
        if (o.omega < 0 || o.alpha < 0) {
            continue;
        }
        const bool inside = std::any_of(cands.begin(), cands.end(), [&](const MorseCandidate& c) {
            return c.contains(x, s, plan.membership_tol, space);
        });
        if (inside) {
            continue;
        }
        ++no_cycles.checks;
        if (o.alpha == o.omega) {
            no_cycles.fail(detail::point_text(x, s) + " leaves and returns to " + cands[o.alpha].name);
        }
        auto it = std::find_if(report.order_edges.begin(), report.order_edges.end(),
                               [&](const OrderEdge& e) { return e.from == o.alpha && e.to == o.omega; });
        if (it == report.order_edges.end()) {
            report.order_edges.push_back({o.alpha, o.omega, x, s, 1});
        } else {
            ++it->count;
        }
    }
    std::sort(report.order_edges.begin(), report.order_edges.end(),
              [](const OrderEdge& a, const OrderEdge& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); });

    std::vector<std::vector<int>> adj(cands.size());
    for (const auto& e : report.order_edges) {
        if (e.from != e.to) {
            adj[e.from].push_back(e.to);
        }
    }
    for (const auto& comp : strongly_connected_components(adj)) {
        if (comp.size() > 1) {
            std::string names;
            for (auto i : comp) {
                names += (names.empty() ? "" : ", ") + cands[i].name;
            }
            no_cycles.fail("connecting orbits form a cycle through " + names);
        }
    }

    report.conditions = {nonvoid, disjoint, invariant, isolated, compact, containment, no_cycles};
    return report;
}

struct AttractorCheck {
    bool attracting = false;
    double uniform_time = 0.0;       ///< largest sampled entry time into A
    std::optional<std::string> witness;
    std::size_t samples = 0;
};

struct AttractorOptions {
    int grid_n = 41;
    int word_len = 3;
    std::vector<double> taus{0.0};
    std::vector<std::int64_t> anchors{-3, 0, 3};
    double max_time = -1.0;     ///< default 200 h
    double stay_horizon = -1.0; ///< default 50 h
    double tol = 1e-9;
    int threads = 1;
};

/// Samples N and the signal family (constant signals first) and checks that
/// every sampled trajectory enters A and stays there.
inline AttractorCheck attracting_region_check(const HybridSystem& sys, const MPart& a, const MPart& n,
                                              AttractorOptions opt = {})
{
    const double h = sys.h();
    const auto& space = sys.space();
    const double max_time = opt.max_time < 0.0 ? 200.0 * h : opt.max_time;
    const double stay = opt.stay_horizon < 0.0 ? 50.0 * h : opt.stay_horizon;

    std::vector<double> points;
    for (const auto& [lo, hi] : n.pieces) {
        for (int i = 0; i < opt.grid_n; ++i) {
            points.push_back(opt.grid_n == 1 ? lo : lo + (hi - lo) * i / (opt.grid_n - 1));
        }
    }
    std::vector<SymbolicSignal> signals;
    for (Vertex v = 0; v < sys.graph().n_vertices(); ++v) {
        if (sys.graph().has_self_loop(v)) {
            signals.push_back(SymbolicSignal::constant(v, h));
        }
    }
    for (auto& s : signal_family(sys.graph(), opt.word_len, h, opt.taus, opt.anchors)) {
        if (!s.is_constant()) {
            signals.push_back(std::move(s));
        }
    }

    const std::size_t total = signals.size() * points.size();
    std::vector<double> entry(total, -1.0);
    std::vector<char> stayed(total, 0);
    parallel_for(total, opt.threads, [&](std::size_t t) {
        const auto& s = signals[t / points.size()];
        const double x = points[t % points.size()];
        FlowCursor cursor(sys, s, x);
        const double dt = h / 8.0;
        double when = -1.0;
        if (a.contains(x, opt.tol, space)) {
            when = 0.0;
        }
        for (int j = 1; when < 0.0 && j * dt <= max_time + 1e-12; ++j) {
            cursor.advance_to(j * dt);
            if (a.contains(cursor.x(), opt.tol, space)) {
                when = cursor.time();
            }
        }
        entry[t] = when;
        if (when < 0.0) {
            return;
        }
        const int steps = static_cast<int>(std::ceil(stay / dt));
        for (int j = 1; j <= steps; ++j) {
            cursor.advance_to(when + j * dt);
            if (!a.contains(cursor.x(), opt.tol, space)) {
                return;
            }
        }
        stayed[t] = 1;
    });

    AttractorCheck out;
    out.samples = total;
    out.attracting = true;
    for (std::size_t t = 0; t < total; ++t) {
        const auto& s = signals[t / points.size()];
        const double x = points[t % points.size()];
        if (entry[t] < 0.0) {
            out.attracting = false;
            out.witness = detail::point_text(x, s) + " does not enter A within " + fmt(max_time);
            break;
        }
        if (!stayed[t]) {
            out.attracting = false;
            out.witness = detail::point_text(x, s) + " enters A and leaves again";
            break;
        }
        out.uniform_time = std::max(out.uniform_time, entry[t]);
    }
    return out;
}

struct VisitEntry {
    int round = 0;
    Vertex vertex = 0;
    double eps = 0.0;
    double target = 0.0;   ///< fixed point the vertex's own flow is approaching
    double distance = 0.0; ///< distance to it when the dwell ends
    std::int64_t first_interval = 0;
    std::int64_t dwell_intervals = 0;
};

struct VisitSchedule {
    SymbolicSignal prefix; ///< constant-ends signal; entry k is dwell interval k
    std::vector<VisitEntry> log;
    double final_x = 0.0;
};

/// Builds a signal that, round after round, visits every vertex and dwells
/// there until the state is within eps_k of that vertex's own limit point.
///
/// Requires a self-loop at every vertex and a graph forming one class.
inline VisitSchedule selfloop_visit_schedule(const HybridSystem& sys, double x0, const std::vector<double>& eps,
                                             std::int64_t max_dwell = 1000000)
{
    const auto& g = sys.graph();
    for (Vertex v = 0; v < g.n_vertices(); ++v) {
        if (!g.has_self_loop(v)) {
            throw PreconditionError("selfloop_visit_schedule: vertex " + std::to_string(v) + " has no self-loop");
        }
    }
    if (!is_single_class(g)) {
        throw PreconditionError("selfloop_visit_schedule: graph must be one communicating class");
    }
    if (eps.empty()) {
        throw PreconditionError("selfloop_visit_schedule: empty tolerance schedule");
    }
    for (double e : eps) {
        if (!(e > 0.0)) {
            throw PreconditionError("selfloop_visit_schedule: tolerances must be positive");
        }
    }
    const auto& space = sys.space();
    if (!space.contains(x0, 1e-9)) {
        throw PreconditionError("selfloop_visit_schedule: x0 outside the state space");
    }
    std::vector<std::vector<double>> roots;
    for (Vertex v = 0; v < g.n_vertices(); ++v) {
        roots.push_back(fixed_points(sys.field(v), space));
    }

    VisitSchedule out;
    std::vector<Vertex> word;
    double x = space.clamp(x0);
    std::size_t clamps = 0;
    auto dwell = [&](Vertex v) {
        word.push_back(v);
        x = advance_within_dwell(sys, sys.field(v), x, 0.0, sys.h(), clamps);
    };
    for (std::size_t k = 0; k < eps.size(); ++k) {
        for (Vertex v = 0; v < g.n_vertices(); ++v) {
            if (!word.empty() && !g.has_edge(word.back(), v)) {
                const auto path = shortest_path(g, word.back(), v);
                for (std::size_t j = 1; j + 1 < path->size(); ++j) {
                    dwell((*path)[j]);
                }
            }
            VisitEntry e;
            e.round = static_cast<int>(k);
            e.vertex = v;
            e.eps = eps[k];
            e.first_interval = static_cast<std::int64_t>(word.size());
            for (;;) {
                dwell(v);
                ++e.dwell_intervals;
                const auto target = omega_fixed_point(sys.field(v), space, x, roots[v]);
                e.target = target.value_or(x);
                e.distance = target ? space.distance(x, *target) : 0.0;
                if (e.distance <= eps[k]) {
                    break;
                }
                if (e.dwell_intervals >= max_dwell) {
                    throw Error("selfloop_visit_schedule: vertex " + std::to_string(v) + " did not settle within "
                                + std::to_string(max_dwell) + " dwell intervals");
                }
            }
            out.log.push_back(e);
        }
    }
    out.prefix = SymbolicSignal(word, sys.h(), 0.0, 0, Extension::ConstantEnds);
    out.final_x = space.normalize(x);
    return out;
}

} // namespace morseflow
