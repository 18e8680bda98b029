#pragma once

// Fixed-step classical Runge-Kutta for scalar autonomous fields.

#include "morseflow/error.hpp"
#include "morseflow/field.hpp"

#include <cmath>

namespace morseflow {

template <class F>
double rk4_step(const F& f, double x, double dt)
{
    const double k1 = f(x);
    const double k2 = f(x + 0.5 * dt * k1);
    const double k3 = f(x + 0.5 * dt * k2);
    const double k4 = f(x + dt * k3);
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// One RK4 step together with its derivative with respect to x.
inline double rk4_step_with_slope(const VectorField& f, double x, double dt, double& slope)
{
    const double k1 = f(x);
    const double d1 = f.derivative(x);
    const double y2 = x + 0.5 * dt * k1;
    const double e2 = 1.0 + 0.5 * dt * d1;
    const double k2 = f(y2);
    const double d2 = f.derivative(y2) * e2;
    const double y3 = x + 0.5 * dt * k2;
    const double e3 = 1.0 + 0.5 * dt * d2;
    const double k3 = f(y3);
    const double d3 = f.derivative(y3) * e3;
    const double y4 = x + dt * k3;
    const double e4 = 1.0 + dt * d3;
    const double k4 = f(y4);
    const double d4 = f.derivative(y4) * e4;
    slope = 1.0 + dt / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// The point y with rk4_step(f, y, dt) == x, found by Newton iteration
/// started from a step of the reversed field.
///
/// Using the exact inverse of the forward map makes backward integration
/// undo forward integration to rounding error.
inline double rk4_inverse_step(const VectorField& f, double x, double dt)
{
    double y = rk4_step([&](double z) { return -f(z); }, x, dt);
    for (int iter = 0; iter < 30; ++iter) {
        double slope = 1.0;
        const double residual = rk4_step_with_slope(f, y, dt, slope) - x;
        if (residual == 0.0 || slope == 0.0) {
            break;
        }
        const double delta = residual / slope;
        y -= delta;
        if (std::abs(delta) <= 1e-16 * (1.0 + std::abs(y))) {
            break;
        }
    }
    return y;
}

/// RK4 approximation of the solution at time dt: full steps of `step`, then
/// one shortened final step.
inline double integrate_segment(const VectorField& f, double x0, double dt, double step)
{
    if (!(dt >= 0.0)) {
        throw PreconditionError("integrate_segment: dt must be nonnegative");
    }
    if (!(step > 0.0)) {
        throw PreconditionError("integrate_segment: step must be positive");
    }
    const auto n_full = static_cast<long long>(std::floor(dt / step));
    double x = x0;
    for (long long i = 0; i < n_full; ++i) {
        x = rk4_step(f, x, step);
    }
    const double rest = dt - static_cast<double>(n_full) * step;
    if (rest > 0.0) {
        x = rk4_step(f, x, rest);
    }
    return x;
}

/// integrate_segment followed by the state space's clamp (interval) or
/// normalization (circle).
inline double integrate_segment(const VectorField& f, double x0, double dt, double step, const StateSpace& space)
{
    return space.clamp(integrate_segment(f, x0, dt, step));
}

} // namespace morseflow
