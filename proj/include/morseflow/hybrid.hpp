#pragma once

// Hybrid flow: per-vertex ODE flows composed along a switching signal, and
// the product flow pairing it with the shift.

#include "morseflow/error.hpp"
#include "morseflow/field.hpp"
#include "morseflow/graph.hpp"
#include "morseflow/integrator.hpp"
#include "morseflow/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace morseflow {

inline constexpr int default_steps_per_dwell = 128;

class HybridSystem {
public:
    HybridSystem() = default;

    HybridSystem(DirectedGraph graph, std::vector<VectorField> fields, StateSpace space, double h,
                 int steps_per_dwell = default_steps_per_dwell)
        : graph_(std::move(graph)), fields_(std::move(fields)), space_(space), h_(h), steps_(steps_per_dwell)
    {
        require_n_graph(graph_);
        if (static_cast<int>(fields_.size()) != graph_.n_vertices()) {
            throw PreconditionError("hybrid system needs exactly one field per vertex");
        }
        if (!(h_ > 0.0) || !std::isfinite(h_)) {
            throw PreconditionError("dwell time h must be positive");
        }
        if (steps_ < 1) {
            throw PreconditionError("steps per dwell interval must be at least 1");
        }
        for (int v = 0; v < graph_.n_vertices(); ++v) {
            validate_field_on(fields_[v], space_, v);
        }
    }

    const DirectedGraph& graph() const { return graph_; }
    const std::vector<VectorField>& fields() const { return fields_; }
    const VectorField& field(Vertex v) const { return fields_.at(v); }
    const StateSpace& space() const { return space_; }
    double h() const { return h_; }
    int steps_per_dwell() const { return steps_; }
    double step() const { return h_ / steps_; }

    /// Same system with dwell time h (fields and graph unchanged).
    HybridSystem with_h(double h) const { return HybridSystem(graph_, fields_, space_, h, steps_); }

private:
    DirectedGraph graph_;
    std::vector<VectorField> fields_;
    StateSpace space_;
    double h_ = 1.0;
    int steps_ = default_steps_per_dwell;
};

struct ProductPoint {
    double x = 0.0;
    SymbolicSignal sig;
};

/// Integrates field f across local times o -> e of one dwell interval (local
/// coordinates run over [0, h]); e < o runs backward. Substeps sit on the
/// lattice j*h/steps, and backward substeps invert forward ones exactly.
inline double advance_within_dwell(const HybridSystem& sys, const VectorField& f, double x, double o, double e,
                                   std::size_t& clamps)
{
    const double step = sys.step();
    const double tiny = 1e-12 * sys.h();
    const auto& space = sys.space();
    auto keep_inside = [&] {
        if (!space.is_circle() && (x < space.lo() || x > space.hi())) {
            x = space.clamp(x);
            ++clamps;
        }
    };
    double cur = o;
    if (e >= o) {
        while (cur < e - tiny) {
            const double q = cur / step;
            const double qr = std::round(q);
            const double j = std::abs(q - qr) < 1e-9 ? qr : std::floor(q);
            double nxt = (j + 1.0) * step;
            if (nxt >= e - tiny) {
                nxt = e;
            }
            x = rk4_step(f, x, nxt - cur);
            keep_inside();
            cur = nxt;
        }
        return x;
    }
    while (cur > e + tiny) {
        const double q = cur / step;
        const double qr = std::round(q);
        const double j = std::abs(q - qr) < 1e-9 ? qr : std::ceil(q);
        double nxt = (j - 1.0) * step;
        if (nxt <= e + tiny) {
            nxt = e;
        }
        x = rk4_inverse_step(f, x, cur - nxt);
        keep_inside();
        cur = nxt;
    }
    return x;
}

/// Walks one trajectory forward (direction +1) or backward (-1) in time.
///
/// RK4 substeps sit on a lattice of spacing h/steps anchored at each dwell
/// interval's start, so splitting a run at any time reproduces the unsplit
/// run up to the one step containing the split. Backward steps invert the
/// forward RK4 map exactly.
class FlowCursor {
public:
    FlowCursor(const HybridSystem& sys, SymbolicSignal sig, double x0, int direction = 1)
        : sys_(&sys), sig_(std::move(sig)), x_(x0), dir_(direction >= 0 ? 1 : -1)
    {
        if (std::abs(sig_.h() - sys.h()) > 1e-12 * sys.h()) {
            throw PreconditionError("signal dwell time differs from the system's");
        }
        if (!std::isfinite(x0) || !sys.space().contains(x0, 1e-9)) {
            throw PreconditionError("initial point lies outside the state space");
        }
        x_ = sys.space().is_circle() ? x0 : sys.space().clamp(x0);
    }

    double time() const { return t_; }
    double x() const { return sys_->space().normalize(x_); }
    Vertex vertex() const { return sig_.evaluate(t_); }
    std::size_t clamp_events() const { return clamps_; }
    const SymbolicSignal& signal() const { return sig_; }

    void advance_to(double target)
    {
        const double h = sys_->h();
        const double tiny = 1e-12 * h;
        if (dir_ > 0) {
            if (target < t_) {
                throw PreconditionError("forward cursor cannot move back in time");
            }
            while (t_ < target) {
                std::int64_t k = sig_.interval_index(t_);
                double start = sig_.interval_start(k);
                if (t_ - start >= h - tiny) {
                    ++k;
                    start = sig_.interval_start(k);
                }
                const double o = std::max(0.0, t_ - start);
                const double seg_end = std::min(start + h, target);
                const double e = std::min(h, seg_end - start);
                run_local(sys_->field(sig_.entry(k)), o, e);
                t_ = seg_end;
            }
        } else {
            if (target > t_) {
                throw PreconditionError("backward cursor cannot move forward in time");
            }
            while (t_ > target) {
                std::int64_t k = sig_.interval_index(t_);
                double start = sig_.interval_start(k);
                if (t_ - start <= tiny) {
                    --k;
                    start = sig_.interval_start(k);
                }
                const double o = std::min(h, t_ - start);
                const double seg_end = std::max(start, target);
                const double e = std::max(0.0, seg_end - start);
                run_local(sys_->field(sig_.entry(k)), o, e);
                t_ = seg_end;
            }
        }
    }

private:
    void run_local(const VectorField& f, double o, double e) { x_ = advance_within_dwell(*sys_, f, x_, o, e, clamps_); }

    const HybridSystem* sys_;
    SymbolicSignal sig_;
    double x_ = 0.0;
    double t_ = 0.0;
    int dir_ = 1;
    std::size_t clamps_ = 0;
};

/// phi(t, x0, sig); negative t runs the fields backward.
inline double hybrid_flow(const HybridSystem& sys, double t, double x0, const SymbolicSignal& sig)
{
    FlowCursor cursor(sys, sig, x0, t >= 0.0 ? 1 : -1);
    cursor.advance_to(t);
    return cursor.x();
}

/// Phi_t(x, f) = (phi(t, x, f), psi_t f).
inline ProductPoint product_flow(const HybridSystem& sys, double t, const ProductPoint& p)
{
    return {hybrid_flow(sys, t, p.x, p.sig), p.sig.shifted(t)};
}

struct TrajectorySample {
    double t = 0.0;
    double x = 0.0;
    Vertex vertex = 0;
};

/// Samples at times 0, dt, 2 dt, ... up to t_end, integrating once along the way.
inline std::vector<TrajectorySample> trajectory(const HybridSystem& sys, const ProductPoint& p, double t_end,
                                                double sample_dt)
{
    if (!(sample_dt > 0.0)) {
        throw PreconditionError("trajectory: sample_dt must be positive");
    }
    if (!(t_end >= 0.0)) {
        throw PreconditionError("trajectory: t_end must be nonnegative");
    }
    const auto n = static_cast<std::size_t>(std::floor(t_end / sample_dt + 1e-9)) + 1;
    std::vector<TrajectorySample> out;
    out.reserve(n);
    FlowCursor cursor(sys, p.sig, p.x);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * sample_dt;
        cursor.advance_to(t);
        out.push_back({t, cursor.x(), cursor.vertex()});
    }
    return out;
}

} // namespace morseflow
