#pragma once

#include "morseflow/error.hpp"
#include "morseflow/signal.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace morseflow {

inline constexpr int default_window = 20;

/// Supremum of the signal metric: 1 + 2 * sum_{i>=1} 4^-i.
inline constexpr double metric_diameter = 5.0 / 3.0;

struct MetricResult {
    double value = 0.0;
    double truncation_error_bound = 0.0;
};

/// Conservative bound on the weight dropped by truncating the sum at |i| <= N.
inline double truncation_bound(int window_n)
{
    return (8.0 / 3.0) * std::pow(4.0, -window_n);
}

/// Fraction of [i*h, (i+1)*h) on which x and y differ.
///
/// Inside one unit window each signal has at most one breakpoint, so the
/// window splits into at most three pieces on which both are constant.
inline double disagreement_fraction(const SymbolicSignal& x, const SymbolicSignal& y, std::int64_t i)
{
    const double h = x.h();
    const double start = static_cast<double>(i) * h;
    std::array<double, 4> cuts{0.0, x.tau(), y.tau(), h};
    std::sort(cuts.begin(), cuts.end());
    double differing = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double len = cuts[k + 1] - cuts[k];
        if (len <= 0.0) {
            continue;
        }
        const double mid = start + 0.5 * (cuts[k] + cuts[k + 1]);
        if (x.evaluate(mid) != y.evaluate(mid)) {
            differing += len;
        }
    }
    return differing / h;
}

/// d(x,y) = sum_i 4^-|i| f(x,y,i), truncated to |i| <= window_n.
inline MetricResult distance(const SymbolicSignal& x, const SymbolicSignal& y, int window_n = default_window)
{
    if (x.h() != y.h()) {
        throw PreconditionError("distance: signals have different dwell times");
    }
    if (window_n < 1) {
        throw PreconditionError("distance: window must be at least 1");
    }
    // Sum smallest weights first.
    double value = 0.0;
    for (int a = window_n; a >= 1; --a) {
        const double w = std::pow(4.0, -a);
        value += w * disagreement_fraction(x, y, a);
        value += w * disagreement_fraction(x, y, -a);
    }
    value += disagreement_fraction(x, y, 0);
    return {value, truncation_bound(window_n)};
}

} // namespace morseflow
