#pragma once

// One-dimensional state spaces and the per-vertex vector fields living on them.

#include "morseflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

namespace morseflow {

class StateSpace {
public:
    enum class Kind { Interval, Circle };

    StateSpace() = default;

    static StateSpace interval(double lo, double hi)
    {
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
            throw PreconditionError("interval state space needs finite lo < hi");
        }
        StateSpace s;
        s.kind_ = Kind::Interval;
        s.lo_ = lo;
        s.hi_ = hi;
        return s;
    }

    static StateSpace circle(double period = 2.0 * std::numbers::pi)
    {
        if (!(period > 0.0) || !std::isfinite(period)) {
            throw PreconditionError("circle period must be positive");
        }
        StateSpace s;
        s.kind_ = Kind::Circle;
        s.lo_ = 0.0;
        s.hi_ = period;
        return s;
    }

    Kind kind() const { return kind_; }
    bool is_circle() const { return kind_ == Kind::Circle; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double period() const { return hi_ - lo_; }
    double width() const { return hi_ - lo_; }

    /// Circle points are reduced to [0, period); interval points pass through.
    double normalize(double x) const
    {
        if (kind_ == Kind::Interval) {
            return x;
        }
        const double p = period();
        double r = std::fmod(x, p);
        if (r < 0.0) {
            r += p;
        }
        if (r >= p) {
            r = 0.0;
        }
        return r;
    }

    /// Interval points are clamped into [lo, hi]; circle points normalized.
    double clamp(double x) const
    {
        if (kind_ == Kind::Circle) {
            return normalize(x);
        }
        return x < lo_ ? lo_ : (x > hi_ ? hi_ : x);
    }

    bool contains(double x, double tol = 0.0) const
    {
        if (kind_ == Kind::Circle) {
            return std::isfinite(x);
        }
        return x >= lo_ - tol && x <= hi_ + tol;
    }

    /// Metric on M: absolute difference, or arc length on the circle.
    double distance(double a, double b) const
    {
        if (kind_ == Kind::Interval) {
            return std::abs(a - b);
        }
        const double p = period();
        double d = std::fmod(std::abs(a - b), p);
        return std::min(d, p - d);
    }

    friend bool operator==(const StateSpace&, const StateSpace&) = default;

private:
    Kind kind_ = Kind::Interval;
    double lo_ = -1.0;
    double hi_ = 1.0;
};

/// X(x) + rho*u, where X is a polynomial or trigonometric polynomial.
///
/// Polynomial: sum_k c[k] x^k.
/// Trigonometric: sum_k a[k] cos(k w x) + b[k] sin(k w x).
class VectorField {
public:
    enum class Kind { Polynomial, TrigPoly };

    VectorField() = default;

    static VectorField polynomial(std::vector<double> coeffs)
    {
        VectorField f;
        f.kind_ = Kind::Polynomial;
        f.a_ = std::move(coeffs);
        f.check_finite();
        return f;
    }

    static VectorField trig(std::vector<double> a, std::vector<double> b, double omega)
    {
        if (!(omega > 0.0) || !std::isfinite(omega)) {
            throw PreconditionError("trigonometric field needs a positive frequency");
        }
        VectorField f;
        f.kind_ = Kind::TrigPoly;
        f.a_ = std::move(a);
        f.b_ = std::move(b);
        f.omega_ = omega;
        f.check_finite();
        return f;
    }

    static VectorField zero() { return polynomial({}); }

    /// Same expression with the perturbation term rho*u.
    VectorField perturbed(double rho, double u) const
    {
        VectorField f = *this;
        f.rho_ = rho;
        f.u_ = u;
        return f;
    }

    Kind kind() const { return kind_; }
    const std::vector<double>& coeffs() const { return a_; }
    const std::vector<double>& cos_coeffs() const { return a_; }
    const std::vector<double>& sin_coeffs() const { return b_; }
    double omega() const { return omega_; }
    double rho() const { return rho_; }
    double u() const { return u_; }

    /// The unperturbed part X(x).
    double base(double x) const
    {
        if (kind_ == Kind::Polynomial) {
            double v = 0.0;
            for (auto it = a_.rbegin(); it != a_.rend(); ++it) {
                v = v * x + *it;
            }
            return v;
        }
        double v = 0.0;
        for (std::size_t k = 0; k < a_.size(); ++k) {
            v += a_[k] * std::cos(static_cast<double>(k) * omega_ * x);
        }
        for (std::size_t k = 1; k < b_.size(); ++k) {
            v += b_[k] * std::sin(static_cast<double>(k) * omega_ * x);
        }
        return v;
    }

    double operator()(double x) const { return base(x) + rho_ * u_; }

    /// dX/dx; the perturbation is constant in x.
    double derivative(double x) const
    {
        if (kind_ == Kind::Polynomial) {
            double v = 0.0;
            for (std::size_t k = a_.size(); k-- > 1;) {
                v = v * x + static_cast<double>(k) * a_[k];
            }
            return v;
        }
        double v = 0.0;
        for (std::size_t k = 1; k < a_.size(); ++k) {
            const double kw = static_cast<double>(k) * omega_;
            v -= a_[k] * kw * std::sin(kw * x);
        }
        for (std::size_t k = 1; k < b_.size(); ++k) {
            const double kw = static_cast<double>(k) * omega_;
            v += b_[k] * kw * std::cos(kw * x);
        }
        return v;
    }

    bool is_zero() const
    {
        for (double c : a_) {
            if (c != 0.0) {
                return false;
            }
        }
        for (std::size_t k = 1; k < b_.size(); ++k) {
            if (b_[k] != 0.0) {
                return false;
            }
        }
        return rho_ * u_ == 0.0;
    }

    friend bool operator==(const VectorField&, const VectorField&) = default;

private:
    void check_finite() const
    {
        for (double c : a_) {
            if (!std::isfinite(c)) {
                throw PreconditionError("vector field coefficient is not finite");
            }
        }
        for (double c : b_) {
            if (!std::isfinite(c)) {
                throw PreconditionError("vector field coefficient is not finite");
            }
        }
    }

    Kind kind_ = Kind::Polynomial;
    std::vector<double> a_;
    std::vector<double> b_;
    double omega_ = 1.0;
    double rho_ = 0.0;
    double u_ = 0.0;
};

/// Throws unless `f` is a legitimate flow generator on `space`: inward or
/// vanishing at interval endpoints, periodic with the circle's period.
inline void validate_field_on(const VectorField& f, const StateSpace& space, int vertex, double tol = 1e-12)
{
    std::ostringstream where;
    where << "field of vertex " << vertex;
    if (space.is_circle()) {
        if (f.kind() == VectorField::Kind::Polynomial) {
            if (f.coeffs().size() > 1) {
                for (std::size_t k = 1; k < f.coeffs().size(); ++k) {
                    if (f.coeffs()[k] != 0.0) {
                        throw PreconditionError(where.str() + ": non-constant polynomial is not periodic on the circle");
                    }
                }
            }
            return;
        }
        const double turns = f.omega() * space.period() / (2.0 * std::numbers::pi);
        if (std::abs(turns - std::round(turns)) > 1e-9 || std::round(turns) < 1.0) {
            throw PreconditionError(where.str() + ": frequency incompatible with the circle period");
        }
        return;
    }
    if (f(space.lo()) < -tol) {
        throw PreconditionError(where.str() + ": points outward at the lower endpoint");
    }
    if (f(space.hi()) > tol) {
        throw PreconditionError(where.str() + ": points outward at the upper endpoint");
    }
}

/// Zeros of `f` on the state space, ascending and deduplicated.
///
/// Sign changes on a uniform scan are refined by bisection; zeros where the
/// field touches zero without changing sign (double roots) are found as
/// local minima of |f| refined by ternary search.
inline std::vector<double> fixed_points(const VectorField& f, const StateSpace& space, int scan = 4096)
{
    const double lo = space.lo();
    const double hi = space.hi();
    const int n = space.is_circle() ? scan : scan + 1;
    const double dx = (hi - lo) / scan;
    std::vector<double> xs(n), fs(n);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        xs[i] = lo + i * dx;
        fs[i] = f(xs[i]);
        scale = std::max(scale, std::abs(fs[i]));
    }
    const double zero_tol = 1e-10 * std::max(1.0, scale);
    std::vector<double> roots;
    auto cell = [&](int i) { return space.is_circle() ? (i + 1) % n : i + 1; };
    const int cells = space.is_circle() ? n : n - 1;
    for (int i = 0; i < n; ++i) {
        if (fs[i] == 0.0) {
            roots.push_back(xs[i]);
        }
    }
    for (int i = 0; i < cells; ++i) {
        const int j = cell(i);
        if (fs[i] == 0.0 || fs[j] == 0.0 || (fs[i] > 0.0) == (fs[j] > 0.0)) {
            continue;
        }
        double a = xs[i];
        double b = a + dx;
        double fa = fs[i];
        for (int iter = 0; iter < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++iter) {
            const double m = 0.5 * (a + b);
            const double fm = f(m);
            if (fm == 0.0) {
                a = b = m;
                break;
            }
            if ((fm > 0.0) == (fa > 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        roots.push_back(space.normalize(0.5 * (a + b)));
    }
    for (int i = 0; i < n; ++i) {
        const bool has_prev = space.is_circle() || i > 0;
        const bool has_next = space.is_circle() || i + 1 < n;
        if (!has_prev || !has_next) {
            continue;
        }
        const int p = (i - 1 + n) % n;
        const int q = (i + 1) % n;
        const double ai = std::abs(fs[i]);
        if (ai == 0.0 || ai > std::abs(fs[p]) || ai > std::abs(fs[q])) {
            continue;
        }
        if ((fs[p] > 0.0) != (fs[i] > 0.0) || (fs[q] > 0.0) != (fs[i] > 0.0)) {
            continue;
        }
        double a = xs[i] - dx;
        double b = xs[i] + dx;
        for (int iter = 0; iter < 200; ++iter) {
            const double m1 = a + (b - a) / 3.0;
            const double m2 = b - (b - a) / 3.0;
            if (std::abs(f(m1)) < std::abs(f(m2))) {
                b = m2;
            } else {
                a = m1;
            }
        }
        const double m = 0.5 * (a + b);
        if (std::abs(f(m)) <= zero_tol) {
            roots.push_back(space.normalize(m));
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots) {
        if (out.empty() || space.distance(out.back(), r) > 1e-7) {
            out.push_back(r);
        }
    }
    if (space.is_circle() && out.size() > 1 && space.distance(out.front(), out.back()) <= 1e-7) {
        out.pop_back();
    }
    return out;
}

/// The fixed point that the single-field flow from x converges to, or
/// nothing when the flow never settles (a circle field without zeros).
inline std::optional<double> omega_fixed_point(const VectorField& f, const StateSpace& space, double x,
                                               const std::vector<double>& roots)
{
    if (roots.empty()) {
        return std::nullopt;
    }
    for (double r : roots) {
        if (space.distance(r, x) <= 1e-12) {
            return r;
        }
    }
    const double v = f(x);
    if (v == 0.0) {
        return x;
    }
    if (!space.is_circle()) {
        if (v > 0.0) {
            for (double r : roots) {
                if (r > x) {
                    return r;
                }
            }
            return space.hi();
        }
        for (auto it = roots.rbegin(); it != roots.rend(); ++it) {
            if (*it < x) {
                return *it;
            }
        }
        return space.lo();
    }
    const double p = space.period();
    const double xn = space.normalize(x);
    double best = 0.0;
    double best_gap = p + 1.0;
    for (double r : roots) {
        double gap = v > 0.0 ? r - xn : xn - r;
        if (gap <= 0.0) {
            gap += p;
        }
        if (gap < best_gap) {
            best_gap = gap;
            best = r;
        }
    }
    return best;
}

} // namespace morseflow
