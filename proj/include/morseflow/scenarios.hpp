#pragma once

// The three worked examples: a flickering system whose limit sets avoid the
// fixed points of both fields, two circle fields whose limit sets always meet
// a fixed point, and a pair of saddle fields with a four-set Morse
// decomposition.

#include "morseflow/error.hpp"
#include "morseflow/field.hpp"
#include "morseflow/format.hpp"
#include "morseflow/hybrid.hpp"
#include "morseflow/integrator.hpp"
#include "morseflow/limits.hpp"
#include "morseflow/morse.hpp"
#include "morseflow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace morseflow {

struct Claim {
    std::string name;
    std::string statement; ///< the proposition clause being checked
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct LabeledTrajectory {
    std::string label;
    std::vector<TrajectorySample> samples;
};

struct ScenarioReport {
    std::string id;
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<Claim> claims;
    std::vector<std::string> notes;
    std::vector<LabeledTrajectory> trajectories;

    bool passed() const
    {
        return std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.passed; });
    }

    const Claim& claim(const std::string& name) const
    {
        for (const auto& c : claims) {
            if (c.name == name) {
                return c;
            }
        }
        throw Error("no claim named " + name);
    }

    double parameter(const std::string& name) const
    {
        for (const auto& [k, v] : parameters) {
            if (k == name) {
                return v;
            }
        }
        throw Error("no parameter named " + name);
    }
};

/// 0.25, 0.5, 1, 2, 4, 8.
inline std::vector<double> h_ladder()
{
    return {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
}

// ---------------------------------------------------------------- flicker

inline VectorField flicker_field_a() { return VectorField::polynomial({-0.5, -1.0, 0.5, 1.0}); }
inline VectorField flicker_field_b() { return VectorField::polynomial({0.5, -1.0, -0.5, 1.0}); }

/// Two vertices joined both ways and without self-loops: every signal alternates.
inline DirectedGraph flicker_graph() { return DirectedGraph(2, {{0, 1}, {1, 0}}); }

inline HybridSystem flicker_system(double h)
{
    return HybridSystem(flicker_graph(), {flicker_field_a(), flicker_field_b()}, StateSpace::interval(-1, 1), h);
}

struct FlickerH {
    double h = 0.0;
    double eps = 0.0; ///< 1/2 - phi_B(h, 0)
};

/// Smallest ladder h with phi_A(h, 1/2) < 0, and the margin eps it implies.
inline FlickerH find_h_flicker(const VectorField& a, const VectorField& b, int steps = default_steps_per_dwell)
{
    for (double h : h_ladder()) {
        if (integrate_segment(a, 0.5, h, h / steps) < 0.0) {
            const double eps = 0.5 - integrate_segment(b, 0.0, h, h / steps);
            if (!(eps > 0.0)) {
                throw Error("find_h_flicker: phi_B(h, 0) reached 1/2; integrator fault");
            }
            return {h, eps};
        }
    }
    throw Error("find_h_flicker: no ladder value moves 1/2 below 0 under the first field");
}

inline FlickerH find_h_flicker() { return find_h_flicker(flicker_field_a(), flicker_field_b()); }

struct FlickerOptions {
    int points = 41;
    int offsets = 8;
    double horizon = -1.0; ///< default 500 h
    double tail_from = -1.0; ///< default horizon / 2
    int threads = 1;
};

/// Omega-limit points of a single field, from starting points spread over M.
inline std::vector<double> single_field_omega(const VectorField& f, const StateSpace& space, int n = 41,
                                              double tol = 1e-3)
{
    const HybridSystem sys(DirectedGraph(1, {{0, 0}}), {f}, space, 1.0);
    std::vector<double> out;
    for (double x0 : uniform_grid(space, n)) {
        const auto est = omega_limit_estimate(sys, {x0, SymbolicSignal::constant(0, 1.0)});
        const double p = 0.5 * (est.lo + est.hi);
        if (est.width() > tol) {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        if (std::none_of(out.begin(), out.end(), [&](double q) { return std::abs(q - p) <= tol; })) {
            out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline bool same_points(const std::vector<double>& got, const std::vector<double>& want, double tol, double& worst)
{
    worst = 0.0;
    if (got.size() != want.size()) {
        worst = std::numeric_limits<double>::infinity();
        return false;
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (!std::isfinite(got[i])) {
            worst = std::numeric_limits<double>::infinity();
            return false;
        }
        worst = std::max(worst, std::abs(got[i] - want[i]));
    }
    return worst <= tol;
}

inline std::string list_text(const std::vector<double>& v)
{
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + fmt(v[i]);
    }
    return s + "}";
}

} // namespace detail

inline ScenarioReport example_flicker(const FlickerOptions& opt = {})
{
    const auto found = find_h_flicker();
    const double h = found.h;
    const auto sys = flicker_system(h);
    const double horizon = opt.horizon < 0.0 ? 500.0 * h : opt.horizon;
    const double tail_from = opt.tail_from < 0.0 ? 0.5 * horizon : opt.tail_from;
    const double dt = h / 16.0;

    ScenarioReport rep;
    rep.id = "flicker";
    rep.parameters = {{"h", h},
                      {"eps", found.eps},
                      {"points", static_cast<double>(opt.points)},
                      {"offsets", static_cast<double>(opt.offsets)},
                      {"horizon", horizon},
                      {"tail_from", tail_from}};

    const SymbolicSignal alternating({0, 1}, h);
    std::vector<SymbolicSignal> signals;
    for (int k = 0; k < opt.offsets; ++k) {
        signals.push_back(alternating.shifted(2.0 * h * k / opt.offsets));
    }
    std::vector<double> starts;
    for (int k = 0; k < opt.points; ++k) {
        starts.push_back(-1.0 + 2.0 * (k + 1) / (opt.points + 1));
    }

    struct Run {
        double entry = -1.0;
        bool left_again = false;
        double margin = std::numeric_limits<double>::infinity();
    };
    const std::size_t total = starts.size() * signals.size();
    std::vector<Run> runs(total);
    parallel_for(total, opt.threads, [&](std::size_t t) {
        const double x0 = starts[t / signals.size()];
        FlowCursor cursor(sys, signals[t % signals.size()], x0);
        Run r;
        auto inside = [](double x) { return x > -0.5 && x < 0.5; };
        if (inside(x0)) {
            r.entry = 0.0;
        }
        const auto n = static_cast<std::int64_t>(std::ceil(horizon / dt - 1e-9));
        for (std::int64_t j = 1; j <= n; ++j) {
            const double time = std::min(horizon, static_cast<double>(j) * dt);
            cursor.advance_to(time);
            const double x = cursor.x();
            if (r.entry < 0.0) {
                if (inside(x)) {
                    r.entry = time;
                }
            } else if (!inside(x)) {
                r.left_again = true;
            }
            if (time >= tail_from) {
                r.margin = std::min(r.margin, std::min(std::abs(x - 0.5), std::abs(x + 0.5)));
            }
        }
        runs[t] = r;
    });

    double worst_entry = 0.0;
    double margin = std::numeric_limits<double>::infinity();
    std::size_t never_entered = 0;
    std::size_t left = 0;
    std::string first_bad;
    for (std::size_t t = 0; t < total; ++t) {
        const auto& r = runs[t];
        if (r.entry < 0.0) {
            ++never_entered;
        } else {
            worst_entry = std::max(worst_entry, r.entry);
        }
        left += r.left_again ? 1 : 0;
        margin = std::min(margin, r.margin);
        if ((r.entry < 0.0 || r.left_again) && first_bad.empty()) {
            first_bad = detail::point_text(starts[t / signals.size()], signals[t % signals.size()]);
        }
    }
    rep.claims.push_back({"enters_band", "every trajectory from (-1,1) enters (-1/2,1/2) in finite time",
                          never_entered == 0, worst_entry, horizon,
                          never_entered == 0 ? "latest entry time " + fmt(worst_entry)
                                             : std::to_string(never_entered) + " runs never entered, e.g. " + first_bad});
    rep.claims.push_back({"never_leaves", "no trajectory that enters (-1/2,1/2) leaves it", left == 0,
                          static_cast<double>(left), 0.0,
                          left == 0 ? "all " + std::to_string(total) + " runs stayed inside"
                                    : std::to_string(left) + " runs left again, e.g. " + first_bad});
    rep.claims.push_back({"tail_margin", "the tail stays a positive distance from -1/2 and 1/2", margin > 0.0, margin,
                          0.0, "min tail distance " + fmt(margin) + " against eps " + fmt(found.eps)});

    // x0 = -1 is fixed by both fields.
    double drift = 0.0;
    for (const auto& s : signals) {
        FlowCursor cursor(sys, s, -1.0);
        for (int j = 1; j <= 64; ++j) {
            cursor.advance_to(j * h);
            drift = std::max(drift, std::abs(cursor.x() + 1.0));
        }
    }
    rep.claims.push_back({"boundary_fixed", "x0 = -1 stays at -1 under every signal", drift == 0.0, drift, 0.0,
                          "max drift " + fmt(drift)});

    const std::vector<double> want_a{-1.0, -0.5, 1.0};
    const std::vector<double> want_b{-1.0, 0.5, 1.0};
    double wa = 0.0;
    double wb = 0.0;
    const auto got_a = single_field_omega(flicker_field_a(), sys.space());
    const auto got_b = single_field_omega(flicker_field_b(), sys.space());
    rep.claims.push_back({"omega_field_a", "the first field alone has omega-limit points {-1,-1/2,1}",
                          detail::same_points(got_a, want_a, 1e-3, wa), wa, 1e-3,
                          "estimated " + detail::list_text(got_a)});
    rep.claims.push_back({"omega_field_b", "the second field alone has omega-limit points {-1,1/2,1}",
                          detail::same_points(got_b, want_b, 1e-3, wb), wb, 1e-3,
                          "estimated " + detail::list_text(got_b)});

    // The switched system's limit sets avoid +-1/2 while each field's include one.
    double excluded = std::numeric_limits<double>::infinity();
    for (double x0 : {-0.9, -0.3, 0.0, 0.4, 0.9}) {
        const auto est = omega_limit_estimate(sys, {x0, alternating});
        excluded = std::min({excluded, est.distance_to(0.5, sys.space()), est.distance_to(-0.5, sys.space())});
    }
    rep.claims.push_back({"new_limit_sets", "omega-limit sets of the switched system exclude -1/2 and 1/2",
                          excluded > 0.0 && excluded >= margin - 1e-9, excluded, margin,
                          "omega estimates stay " + fmt(excluded) + " from +-1/2"});

    for (double x0 : {0.9, 0.0, -0.95}) {
        rep.trajectories.push_back({"x0=" + fmt(x0), trajectory(sys, {x0, alternating}, 40.0 * h, h / 16.0)});
    }
    return rep;
}

// ---------------------------------------------------------------- circle

/// -k (cos(x - c) - cos(w/2)): attractor at c - w/2, repeller at c + w/2.
inline VectorField arc_field(double attractor, double repeller, double k = 1.0)
{
    const double two_pi = 2.0 * std::numbers::pi;
    double w = repeller - attractor;
    w -= two_pi * std::floor(w / two_pi);
    const double c = attractor + 0.5 * w;
    return VectorField::trig({k * std::cos(0.5 * w), -k * std::cos(c)}, {0.0, -k * std::sin(c)}, 1.0);
}

struct CircleConfig {
    VectorField first;
    VectorField second;
};

inline CircleConfig default_circle_config()
{
    const double pi = std::numbers::pi;
    return {arc_field(0.0, 0.5 * pi), arc_field(pi, 1.5 * pi)};
}

struct CircleStructure {
    double a1 = 0.0;
    double r1 = 0.0;
    double a2 = 0.0;
    double r2 = 0.0;
    /// Arcs between consecutive fixed points, counterclockwise from a1:
    /// (a1,r1), (r1,a2), (a2,r2), (r2,a1). Uniform arcs carry the same
    /// rotation under both fields.
    std::vector<std::pair<double, double>> arcs;
    std::vector<int> rotation_first;
    std::vector<int> rotation_second;
};

/// Checks that each field has one attractor and one repeller, that the four
/// points interleave as A1, R1, A2, R2, and that exactly the arcs (R1,A2) and
/// (R2,A1) rotate the same way under both fields.
inline CircleStructure validate_circle_config(const CircleConfig& cfg)
{
    const StateSpace space = StateSpace::circle();
    auto classify = [&](const VectorField& f, const char* which) {
        const auto roots = fixed_points(f, space);
        if (roots.size() != 2) {
            throw PreconditionError(std::string(which) + " circle field needs exactly two fixed points, found "
                                    + std::to_string(roots.size()));
        }
        double a = 0.0;
        double r = 0.0;
        int attractors = 0;
        for (double p : roots) {
            const double d = f.derivative(p);
            if (d < 0.0) {
                a = p;
                ++attractors;
            } else if (d > 0.0) {
                r = p;
            } else {
                throw PreconditionError(std::string(which) + " circle field has a degenerate fixed point");
            }
        }
        if (attractors != 1) {
            throw PreconditionError(std::string(which) + " circle field needs one attractor and one repeller");
        }
        return std::pair(a, r);
    };
    CircleStructure s;
    std::tie(s.a1, s.r1) = classify(cfg.first, "first");
    std::tie(s.a2, s.r2) = classify(cfg.second, "second");
    const double period = space.period();
    auto ccw = [&](double from, double to) { return space.normalize(to - from); };
    const double p1 = ccw(s.a1, s.r1);
    const double p2 = ccw(s.a1, s.a2);
    const double p3 = ccw(s.a1, s.r2);
    if (!(0.0 < p1 && p1 < p2 && p2 < p3 && p3 < period)) {
        throw PreconditionError("circle fixed points must interleave as A1, R1, A2, R2 counterclockwise");
    }
    const std::vector<double> cuts{s.a1, s.r1, s.a2, s.r2};
    for (int i = 0; i < 4; ++i) {
        const double lo = cuts[i];
        const double hi = lo + ccw(lo, cuts[(i + 1) % 4]);
        s.arcs.emplace_back(lo, hi);
        const double mid = space.normalize(0.5 * (lo + hi));
        s.rotation_first.push_back(cfg.first(mid) > 0.0 ? 1 : -1);
        s.rotation_second.push_back(cfg.second(mid) > 0.0 ? 1 : -1);
    }
    for (int i = 0; i < 4; ++i) {
        const bool uniform = s.rotation_first[i] == s.rotation_second[i];
        if (uniform != (i % 2 == 1)) {
            throw PreconditionError("circle fields must rotate together exactly on (R1,A2) and (R2,A1)");
        }
    }
    return s;
}

inline bool in_arc(double x, const std::pair<double, double>& arc, const StateSpace& space)
{
    const double off = space.normalize(x - arc.first);
    return off > 0.0 && off < arc.second - arc.first;
}

/// Smallest ladder h for which one dwell under the first field carries A2
/// into (R2,A1) and one dwell under the second carries A1 into (R1,A2).
inline double find_h_circle(const CircleConfig& cfg, const CircleStructure& s, int steps = default_steps_per_dwell)
{
    const StateSpace space = StateSpace::circle();
    for (double h : h_ladder()) {
        const double x2 = integrate_segment(cfg.first, s.a2, h, h / steps, space);
        const double x1 = integrate_segment(cfg.second, s.a1, h, h / steps, space);
        if (in_arc(x2, s.arcs[3], space) && in_arc(x1, s.arcs[1], space)) {
            return h;
        }
    }
    throw Error("find_h_circle: no ladder value sweeps the attractors out of their arcs");
}

struct CircleOptions {
    int draws = 500;
    std::uint64_t seed = 1;
    double tol = 1e-2;
    int max_word = 6;
    int threads = 1;
};

namespace detail {

inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline SymbolicSignal random_signal(std::mt19937_64& rng, const DirectedGraph& g, double h, int max_word)
{
    for (;;) {
        std::vector<Vertex> word(1 + rng() % static_cast<std::uint64_t>(max_word));
        for (auto& v : word) {
            v = static_cast<Vertex>(rng() % static_cast<std::uint64_t>(g.n_vertices()));
        }
        const auto ext = rng() % 2 == 0 ? Extension::PeriodicWord : Extension::ConstantEnds;
        const double tau = rng() % 4 == 0 ? 0.0 : h * unit_draw(rng);
        const auto anchor = static_cast<std::int64_t>(rng() % 41) - 20;
        SymbolicSignal s(word, h, tau, anchor, ext);
        if (s.is_admissible(g)) {
            return s;
        }
    }
}

} // namespace detail

inline ScenarioReport example_circle(const CircleConfig& cfg = default_circle_config(), const CircleOptions& opt = {})
{
    const auto s = validate_circle_config(cfg);
    const double h = find_h_circle(cfg, s);
    const StateSpace space = StateSpace::circle();
    const HybridSystem sys(DirectedGraph::complete(2, true), {cfg.first, cfg.second}, space, h);
    const std::vector<double> fixed{s.a1, s.r1, s.a2, s.r2};

    ScenarioReport rep;
    rep.id = "circle";
    rep.parameters = {{"h", h},         {"a1", s.a1}, {"r1", s.r1}, {"a2", s.a2}, {"r2", s.r2},
                      {"draws", static_cast<double>(opt.draws)}, {"seed", static_cast<double>(opt.seed)},
                      {"tol", opt.tol}};
    rep.claims.push_back({"region_structure",
                          "each field has one attractor and one repeller, interleaved, with two arcs of common rotation",
                          true, 0.0, 0.0,
                          "arcs rotate " + std::string(s.rotation_first[1] > 0 ? "counterclockwise" : "clockwise")
                              + " on (R1,A2) and "
                              + std::string(s.rotation_first[3] > 0 ? "counterclockwise" : "clockwise")
                              + " on (R2,A1)"});

    std::mt19937_64 rng(opt.seed);
    std::vector<ProductPoint> draws;
    for (int i = 0; i < opt.draws; ++i) {
        const double x = space.period() * detail::unit_draw(rng);
        draws.push_back({x, detail::random_signal(rng, sys.graph(), h, opt.max_word)});
    }
    std::vector<double> gap(draws.size(), 0.0);
    parallel_for(draws.size(), opt.threads, [&](std::size_t i) {
        const auto est = omega_limit_estimate(sys, draws[i]);
        double best = std::numeric_limits<double>::infinity();
        for (double p : fixed) {
            best = std::min(best, est.distance_to(p, space));
        }
        gap[i] = best;
    });
    const auto worst = std::max_element(gap.begin(), gap.end());
    const std::size_t wi = static_cast<std::size_t>(worst - gap.begin());
    rep.claims.push_back({"omega_meets_fixed_points",
                          "every omega-limit set meets the fixed points of the two fields", *worst <= opt.tol, *worst,
                          opt.tol,
                          "largest gap " + fmt(*worst) + " at " + detail::point_text(draws[wi].x, draws[wi].sig)});

    // Points in (R1,A2) move counterclockwise whatever the signal, until they
    // leave through A2 or settle on it.
    const auto& region = s.arcs[1];
    bool all_precess = true;
    std::size_t exits = 0;
    std::size_t settles = 0;
    std::string stuck;
    for (double frac : {0.1, 0.5, 0.9}) {
        const double x0 = region.first + frac * (region.second - region.first);
        for (const auto& sig : signal_family(sys.graph(), 2, h, {0.0}, {0, 1})) {
            FlowCursor cursor(sys, sig, x0);
            double unwrapped = x0;
            double prev = x0;
            bool monotone = true;
            bool exited = false;
            for (int j = 1; j <= 400 && !exited; ++j) {
                cursor.advance_to(j * h / 8.0);
                double d = cursor.x() - prev;
                d -= space.period() * std::round(d / space.period());
                prev = cursor.x();
                unwrapped += d;
                monotone = monotone && d >= 0.0;
                exited = unwrapped > region.second;
            }
            const bool settled = !exited && region.second - unwrapped <= 1e-6;
            exits += exited ? 1 : 0;
            settles += settled ? 1 : 0;
            if (!monotone || !(exited || settled)) {
                all_precess = false;
                stuck = detail::point_text(x0, sig);
            }
        }
    }
    rep.claims.push_back({"region_precession",
                          "flow on the arc (R1,A2) is counterclockwise under both fields",
                          all_precess, static_cast<double>(exits + settles), 0.0,
                          all_precess ? std::to_string(exits) + " trajectories left through A2, " + std::to_string(settles)
                                            + " settled on it"
                                      : "not counterclockwise or stalled: " + stuck});

    const SymbolicSignal first_only = SymbolicSignal::constant(0, h);
    const auto basin = omega_limit_estimate(sys, {s.a1 + 0.3, first_only});
    const double to_a1 = basin.max_distance_to(s.a1, space);
    rep.claims.push_back({"constant_signal_attractor", "under the first field alone the basin of A1 converges to A1",
                          to_a1 <= 1e-3, to_a1, 1e-3, "omega estimate within " + fmt(to_a1) + " of A1"});

    for (double x0 : {0.3, 2.0, 4.0}) {
        rep.trajectories.push_back(
            {"x0=" + fmt(x0), trajectory(sys, {x0, SymbolicSignal({0, 0, 1}, h)}, 40.0 * h, h / 16.0)});
    }
    return rep;
}

// ---------------------------------------------------------------- saddles

inline VectorField saddle_field(int n)
{
    // (1 - x^2)(x - (-1)^n / 2)^2
    return n == 1 ? VectorField::polynomial({0.25, 1.0, 0.75, -1.0, -1.0})
                  : VectorField::polynomial({0.25, -1.0, 0.75, 1.0, -1.0});
}

inline HybridSystem saddle_system(double h = 1.0)
{
    return HybridSystem(DirectedGraph::complete(2, true), {saddle_field(1), saddle_field(2)},
                        StateSpace::interval(-1, 1), h);
}

inline std::vector<MorseCandidate> saddle_candidates()
{
    return {{"M1", MPart::point(-1.0), DeltaPart::all()},
            {"M2", MPart::point(-0.5), DeltaPart::constant_at(0)},
            {"M3", MPart::point(0.5), DeltaPart::constant_at(1)},
            {"M4", MPart::point(1.0), DeltaPart::all()}};
}

/// Connecting orbits the saddle example must exhibit, as (alpha, omega)
/// candidate indices.
inline std::vector<std::pair<int, int>> saddle_catalog()
{
    return {{0, 1}, {0, 3}, {2, 3}, {1, 2}, {1, 3}, {0, 2}};
}

struct SaddleOptions {
    SamplingPlan plan;
    std::vector<double> reduced_grid{-0.9, -0.7, 0.0, 0.7}; ///< for the run without M2
};

inline ScenarioReport example_morse(const SaddleOptions& opt = {}, MorseReport* full = nullptr)
{
    const auto sys = saddle_system(1.0);
    const auto cands = saddle_candidates();
    ScenarioReport rep;
    rep.id = "morse";
    rep.parameters = {{"h", sys.h()},
                      {"grid_n", static_cast<double>(opt.plan.x_grid.empty() ? opt.plan.grid_n : opt.plan.x_grid.size())},
                      {"word_len", static_cast<double>(opt.plan.word_len)},
                      {"limit_tol", opt.plan.limit_tol},
                      {"shell_radius", opt.plan.shell_radius}};

    const double tol = 1e-9;
    auto fixed_kind = [&](int n, double p) {
        const auto f = saddle_field(n);
        return std::pair(f(p), f.derivative(p));
    };
    bool structure = true;
    for (int n : {1, 2}) {
        const double saddle = n == 1 ? -0.5 : 0.5;
        const auto roots = fixed_points(saddle_field(n), sys.space());
        structure = structure && roots.size() == 3 && std::abs(roots[1] - saddle) <= 1e-7;
        structure = structure && fixed_kind(n, -1.0).second > 0.0 && fixed_kind(n, 1.0).second < 0.0;
        structure = structure && std::abs(fixed_kind(n, saddle).second) <= tol;
    }
    rep.claims.push_back({"fixed_point_structure",
                          "each field repels at -1, attracts at 1 and has a saddle at -1/2 or 1/2", structure, 0.0,
                          0.0, "fixed points and derivative signs of both fields"});

    const auto report = verify_morse_decomposition(sys, cands, opt.plan);
    for (const auto& c : report.conditions) {
        rep.claims.push_back({"condition_" + c.name, "M1..M4 satisfy the " + c.name + " condition", c.passed,
                              static_cast<double>(c.failures), 0.0,
                              c.passed ? std::to_string(c.checks) + " checks"
                                       : std::to_string(c.failures) + " failures, e.g. " + c.witnesses.front()});
    }
    for (auto [from, to] : saddle_catalog()) {
        const auto* e = report.edge(from, to);
        rep.claims.push_back({"orbit_" + cands[from].name + "_" + cands[to].name,
                              "some trajectory has alpha-limit in " + cands[from].name + " and omega-limit in "
                                  + cands[to].name,
                              e != nullptr, e ? static_cast<double>(e->count) : 0.0, 1.0,
                              e ? "witness " + detail::point_text(e->x, e->sig) : "no sampled witness"});
    }

    SamplingPlan reduced = opt.plan;
    reduced.x_grid = opt.reduced_grid;
    auto without = cands;
    without.erase(without.begin() + 1);
    const auto broken = verify_morse_decomposition(sys, without, reduced);
    const auto& lc = broken.condition("limit_containment");
    rep.claims.push_back({"removing_M2_breaks_containment",
                          "without M2 some limit set lies outside every remaining set", !lc.passed,
                          static_cast<double>(lc.failures), 1.0,
                          lc.witnesses.empty() ? "no witness" : lc.witnesses.front()});

    // Eventually constant at the first vertex, started left of -1/2.
    const SymbolicSignal settle({1, 0}, 1.0, 0.0, 1, Extension::ConstantEnds);
    const auto to_saddle = omega_limit_estimate(sys, {-0.9, settle}, 4000.0, 8000.0, 1e-3);
    const double d2 = to_saddle.max_distance_to(-0.5, sys.space());
    rep.claims.push_back({"eventually_first_converges_to_M2",
                          "a signal that settles on the first field before -1/2 is passed converges to -1/2",
                          d2 <= 1e-3, d2, 1e-3, "omega estimate within " + fmt(d2) + " of -1/2"});

    const SymbolicSignal alternating({0, 1}, 1.0);
    const auto fwd = omega_limit_estimate(sys, {0.0, alternating});
    const auto bwd = alpha_limit_estimate(sys, {0.0, alternating});
    const double df = fwd.max_distance_to(1.0, sys.space());
    const double db = bwd.max_distance_to(-1.0, sys.space());
    rep.claims.push_back({"alternating_connects_M1_M4",
                          "an alternating signal from 0 has alpha-limit in M1 and omega-limit in M4",
                          df <= 1e-3 && db <= 1e-3, std::max(df, db), 1e-3,
                          "forward within " + fmt(df) + " of 1, backward within " + fmt(db) + " of -1"});

    rep.notes.push_back("the signal parts of M2 and M3 are single constant signals, so projecting a Morse set "
                        "onto the signal space need not give all admissible signals");

    for (const auto& [x0, sig] : std::vector<std::pair<double, SymbolicSignal>>{
             {-0.9, settle}, {-0.9, alternating}, {0.0, SymbolicSignal({0, 1}, 1.0, 0.0, 0, Extension::ConstantEnds)}}) {
        rep.trajectories.push_back({"x0=" + fmt(x0) + " " + describe(sig), trajectory(sys, {x0, sig}, 40.0, 1.0 / 16.0)});
    }
    if (full) {
        *full = report;
    }
    return rep;
}

} // namespace morseflow
