#pragma once

// Numerical omega- and alpha-limit sets of product-flow trajectories.

#include "morseflow/error.hpp"
#include "morseflow/hybrid.hpp"
#include "morseflow/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace morseflow {

/// Tail of a trajectory over [burn, horizon] (or [-horizon, -burn]).
///
/// The tail is connected, so its projection to M is one interval or arc,
/// stored as [lo, hi]; on a circle hi may exceed the period, and a tail that
/// winds all the way round is flagged full_circle.
struct LimitSetEstimate {
    std::vector<double> points; ///< cluster representatives, more than cluster_radius apart
    double cluster_radius = 1e-3;
    double burn_time = 0.0;
    double horizon = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool full_circle = false;
    std::size_t clamp_events = 0;

    double width() const { return hi - lo; }

    /// Distance from y to the nearest point of the tail.
    double distance_to(double y, const StateSpace& space) const
    {
        if (!space.is_circle()) {
            return y < lo ? lo - y : (y > hi ? y - hi : 0.0);
        }
        if (full_circle || space.normalize(y - lo) <= hi - lo) {
            return 0.0;
        }
        return std::min(space.distance(y, lo), space.distance(y, hi));
    }

    /// Distance from y to the farthest point of the tail.
    double max_distance_to(double y, const StateSpace& space) const
    {
        if (!space.is_circle()) {
            return std::max(std::abs(y - lo), std::abs(y - hi));
        }
        if (full_circle || space.normalize(y + 0.5 * space.period() - lo) <= hi - lo) {
            return 0.5 * space.period();
        }
        return std::max(space.distance(y, lo), space.distance(y, hi));
    }

    /// Every tail point lies within tol of y.
    bool near(double y, double tol, const StateSpace& space) const { return max_distance_to(y, space) <= tol; }
};

struct LimitOptions {
    double burn = -1.0;      ///< default 200 h
    double horizon = -1.0;   ///< default 400 h
    double radius = 1e-3;
    double sample_dt = -1.0; ///< default h / 16
};

/// Tail of the trajectory through p, forward (direction +1) or backward (-1).
inline LimitSetEstimate estimate_limit(const HybridSystem& sys, const ProductPoint& p, int direction,
                                       LimitOptions opt = {})
{
    const double h = sys.h();
    const double burn = opt.burn < 0.0 ? 200.0 * h : opt.burn;
    const double horizon = opt.horizon < 0.0 ? 400.0 * h : opt.horizon;
    const double dt = opt.sample_dt <= 0.0 ? h / 16.0 : opt.sample_dt;
    if (!(burn < horizon)) {
        throw PreconditionError("limit estimate: burn must be smaller than horizon");
    }
    if (!(opt.radius > 0.0)) {
        throw PreconditionError("limit estimate: cluster radius must be positive");
    }
    const double sign = direction >= 0 ? 1.0 : -1.0;
    const auto& space = sys.space();

    FlowCursor cursor(sys, p.sig, p.x, direction);
    cursor.advance_to(sign * burn);
    const auto n = static_cast<std::size_t>(std::ceil((horizon - burn) / dt - 1e-9));
    std::vector<double> samples;
    samples.reserve(n + 1);
    samples.push_back(cursor.x());
    for (std::size_t i = 1; i <= n; ++i) {
        cursor.advance_to(sign * std::min(horizon, burn + static_cast<double>(i) * dt));
        samples.push_back(cursor.x());
    }

    LimitSetEstimate est;
    est.cluster_radius = opt.radius;
    est.burn_time = burn;
    est.horizon = horizon;
    est.clamp_events = cursor.clamp_events();
    if (!space.is_circle()) {
        const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
        est.lo = *mn;
        est.hi = *mx;
    } else {
        const double period = space.period();
        double u = samples.front();
        double mn = u;
        double mx = u;
        for (std::size_t i = 1; i < samples.size(); ++i) {
            double d = samples[i] - samples[i - 1];
            d -= period * std::round(d / period);
            u += d;
            mn = std::min(mn, u);
            mx = std::max(mx, u);
        }
        if (mx - mn >= period) {
            est.full_circle = true;
            est.lo = 0.0;
            est.hi = period;
        } else {
            const double shift = space.normalize(mn) - mn;
            est.lo = mn + shift;
            est.hi = mx + shift;
        }
    }

    if (est.width() <= opt.radius) {
        est.points.push_back(space.normalize(0.5 * (est.lo + est.hi)));
    } else {
        std::sort(samples.begin(), samples.end());
        for (double s : samples) {
            if (est.points.empty() || s - est.points.back() > opt.radius) {
                est.points.push_back(s);
            }
        }
        if (est.points.size() > 1 && space.distance(est.points.front(), est.points.back()) <= opt.radius) {
            est.points.pop_back();
        }
    }
    return est;
}

inline LimitSetEstimate omega_limit_estimate(const HybridSystem& sys, const ProductPoint& p, double burn,
                                             double horizon, double r)
{
    return estimate_limit(sys, p, 1, {burn, horizon, r, -1.0});
}

inline LimitSetEstimate omega_limit_estimate(const HybridSystem& sys, const ProductPoint& p)
{
    return estimate_limit(sys, p, 1);
}

inline LimitSetEstimate alpha_limit_estimate(const HybridSystem& sys, const ProductPoint& p, double burn,
                                             double horizon, double r)
{
    return estimate_limit(sys, p, -1, {burn, horizon, r, -1.0});
}

inline LimitSetEstimate alpha_limit_estimate(const HybridSystem& sys, const ProductPoint& p)
{
    return estimate_limit(sys, p, -1);
}

/// The omega- or alpha-limit of a signal under the shift, described by the
/// vertices it uses: a constant-ends signal tends to its end letter, a
/// periodic one returns to its own orbit.
struct SignalLimit {
    std::vector<Vertex> vertices;
    bool constant = false;
};

inline SignalLimit signal_omega(const SymbolicSignal& sig)
{
    if (sig.extension() == Extension::ConstantEnds) {
        return {{sig.word().back()}, true};
    }
    auto vs = sig.vertex_set();
    return {vs, vs.size() == 1};
}

inline SignalLimit signal_alpha(const SymbolicSignal& sig)
{
    if (sig.extension() == Extension::ConstantEnds) {
        return {{sig.word().front()}, true};
    }
    auto vs = sig.vertex_set();
    return {vs, vs.size() == 1};
}

} // namespace morseflow
