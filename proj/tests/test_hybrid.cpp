#include "morseflow/hybrid.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace morseflow;

namespace {

// (1-x)(1+x)(-1/2-x) and (1-x)(1+x)(1/2-x)
const VectorField field_a = VectorField::polynomial({-0.5, -1.0, 0.5, 1.0});
const VectorField field_b = VectorField::polynomial({0.5, -1.0, -0.5, 1.0});

// (1-x^2)(x+1/2)^2 and (1-x^2)(x-1/2)^2
const VectorField saddle_1 = VectorField::polynomial({0.25, 1.0, 0.75, -1.0, -1.0});
const VectorField saddle_2 = VectorField::polynomial({0.25, -1.0, 0.75, 1.0, -1.0});

HybridSystem flicker_system(double h)
{
    return HybridSystem(DirectedGraph(2, {{0, 1}, {1, 0}}), {field_a, field_b}, StateSpace::interval(-1, 1), h);
}

HybridSystem morse_system(double h)
{
    return HybridSystem(DirectedGraph::complete(2, true), {saddle_1, saddle_2}, StateSpace::interval(-1, 1), h);
}

bool rel_close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

SymbolicSignal random_signal(std::mt19937_64& rng, const DirectedGraph& g, double h)
{
    std::uniform_real_distribution<double> tau_dist(0.0, h);
    for (;;) {
        std::vector<Vertex> word(1 + rng() % 5);
        for (auto& v : word) {
            v = static_cast<Vertex>(rng() % g.n_vertices());
        }
        const auto ext = (rng() % 2 == 0) ? Extension::PeriodicWord : Extension::ConstantEnds;
        SymbolicSignal s(word, h, rng() % 3 == 0 ? 0.0 : tau_dist(rng), static_cast<int>(rng() % 9) - 4, ext);
        if (s.is_admissible(g)) {
            return s;
        }
    }
}

} // namespace

TEST(Field, PolynomialValuesAndDerivative)
{
    EXPECT_DOUBLE_EQ(field_a(0.5), -0.75);
    EXPECT_DOUBLE_EQ(field_a(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(field_a(-0.5), 0.0);
    EXPECT_DOUBLE_EQ(field_b(0.5), 0.0);
    EXPECT_DOUBLE_EQ(saddle_1(-0.5), 0.0);
    EXPECT_DOUBLE_EQ(saddle_1(0.0), 0.25);
    EXPECT_DOUBLE_EQ(saddle_2(0.0), 0.25);
    for (double x : {-0.9, -0.2, 0.3, 0.8}) {
        const double fd = (saddle_1(x + 1e-6) - saddle_1(x - 1e-6)) / 2e-6;
        EXPECT_NEAR(saddle_1.derivative(x), fd, 1e-8);
    }
    const auto t = VectorField::trig({0.2, -1.0}, {0.0, 0.5}, 2.0);
    const double fd = (t(0.7 + 1e-6) - t(0.7 - 1e-6)) / 2e-6;
    EXPECT_NEAR(t.derivative(0.7), fd, 1e-8);
}

TEST(Field, SystemValidation)
{
    const auto g = DirectedGraph::complete(1, true);
    EXPECT_THROW(HybridSystem(g, {VectorField::polynomial({1.0})}, StateSpace::interval(-1, 1), 1.0),
                 PreconditionError);
    EXPECT_THROW(HybridSystem(g, {field_a, field_b}, StateSpace::interval(-1, 1), 1.0), PreconditionError);
    EXPECT_THROW(HybridSystem(g, {field_a}, StateSpace::interval(-1, 1), 0.0), PreconditionError);
    EXPECT_THROW(HybridSystem(g, {VectorField::trig({0, 1}, {0, 0}, 1.5)}, StateSpace::circle(), 1.0),
                 PreconditionError);
    EXPECT_NO_THROW(HybridSystem(g, {VectorField::trig({0, 1}, {0, 0}, 1.0)}, StateSpace::circle(), 1.0));
    EXPECT_THROW(HybridSystem(DirectedGraph(2, {{0, 1}}), {field_a, field_b}, StateSpace::interval(-1, 1), 1.0),
                 PreconditionError);
}

TEST(Integrator, ZeroField)
{
    for (double dt : {0.0, 0.3, 7.0}) {
        EXPECT_EQ(integrate_segment(VectorField::zero(), 0.3, dt, 0.01), 0.3);
    }
}

TEST(Integrator, FixedPointStaysPut)
{
    EXPECT_EQ(integrate_segment(field_a, -1.0, 5.0, 1.0 / 64), -1.0);
}

TEST(Integrator, ApproachesSaddleOfFieldA)
{
    const double x = integrate_segment(field_a, 0.4, 40.0, 1.0 / 64);
    EXPECT_NEAR(x, -0.5, 1e-6);
    EXPECT_NEAR(x, oracle::rkf45([](double z) { return field_a(z); }, 0.4, 40.0), 1e-6);
}

TEST(Integrator, MatchesAdaptiveOracle)
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> xd(-1.0, 1.0);
    std::uniform_real_distribution<double> td(0.0, 50.0);
    for (const auto* f : {&field_a, &field_b, &saddle_1, &saddle_2}) {
        for (int k = 0; k < 20; ++k) {
            const double x0 = xd(rng);
            const double t = td(rng);
            EXPECT_NEAR(integrate_segment(*f, x0, t, 1.0 / 64),
                        oracle::rkf45([&](double z) { return (*f)(z); }, x0, t), 1e-6);
        }
    }
}

TEST(Integrator, FinalStepIsShortened)
{
    const auto f = VectorField::polynomial({1.0});
    EXPECT_NEAR(integrate_segment(f, 0.0, 0.37, 0.1), 0.37, 1e-15);
}

TEST(Integrator, InverseStepUndoesForwardStep)
{
    for (double x : {-0.99, -0.5, 0.0, 0.49, 0.9}) {
        const double y = rk4_step(saddle_1, x, 1.0 / 64);
        EXPECT_NEAR(rk4_inverse_step(saddle_1, y, 1.0 / 64), x, 1e-15);
    }
}

TEST(Hybrid, TimeZeroIsIdentity)
{
    const auto sys = flicker_system(1.0);
    EXPECT_EQ(hybrid_flow(sys, 0.0, 0.3, SymbolicSignal({0, 1}, 1.0, 0.4)), 0.3);
}

TEST(Hybrid, ConstantSignalMatchesSingleField)
{
    const auto sys = morse_system(0.5);
    const auto sig = SymbolicSignal::constant(1, 0.5);
    for (double t : {0.1, 1.0, 3.3}) {
        EXPECT_NEAR(hybrid_flow(sys, t, 0.2, sig), integrate_segment(saddle_2, 0.2, t, sys.step()), 1e-12);
    }
}

TEST(Hybrid, CompositionLaw)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> td(-5.0, 5.0);
    std::uniform_real_distribution<double> xd(-1.0, 1.0);
    for (const auto& sys : {flicker_system(1.25), morse_system(1.0), morse_system(0.7)}) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto sig = random_signal(rng, sys.graph(), sys.h());
            const double x = xd(rng);
            const double s = td(rng);
            const double t = td(rng);
            const double direct = hybrid_flow(sys, t + s, x, sig);
            const double split = hybrid_flow(sys, t, hybrid_flow(sys, s, x, sig), sig.shifted(s));
            EXPECT_TRUE(rel_close(direct, split, 1e-9)) << direct << " vs " << split << " s=" << s << " t=" << t;
        }
    }
}

TEST(Hybrid, MatchesAdaptiveOracle)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> td(-8.0, 8.0);
    std::uniform_real_distribution<double> xd(-0.95, 0.95);
    for (const auto& sys : {flicker_system(1.25), morse_system(1.0)}) {
        for (int trial = 0; trial < 30; ++trial) {
            const auto sig = random_signal(rng, sys.graph(), sys.h());
            const double x = xd(rng);
            const double t = td(rng);
            EXPECT_NEAR(hybrid_flow(sys, t, x, sig), oracle::hybrid_flow(sys, t, x, sig), 1e-6);
        }
    }
}

TEST(Hybrid, ProductFlowPairsShift)
{
    const auto sys = morse_system(1.0);
    const ProductPoint p{0.1, SymbolicSignal({0, 1}, 1.0, 0.3)};
    const auto q = product_flow(sys, 2.6, p);
    EXPECT_EQ(q.x, hybrid_flow(sys, 2.6, 0.1, p.sig));
    EXPECT_EQ(q.sig, p.sig.shifted(2.6));
}

TEST(Hybrid, TrajectoryStaysInIntervalAndCountsSamples)
{
    const auto sys = flicker_system(1.25);
    const auto traj = trajectory(sys, {0.0, SymbolicSignal({0, 1}, 1.25)}, 50.0, 0.3);
    EXPECT_EQ(traj.size(), static_cast<std::size_t>(std::floor(50.0 / 0.3)) + 1);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        EXPECT_GT(traj[i].x, -0.5);
        EXPECT_LT(traj[i].x, 0.5);
        if (i > 0) {
            EXPECT_GT(traj[i].t, traj[i - 1].t);
        }
    }
}

TEST(Hybrid, TrajectoryMatchesDirectFlow)
{
    const auto sys = morse_system(1.0);
    const ProductPoint p{-0.8, SymbolicSignal({0, 0, 1}, 1.0, 0.25)};
    const auto traj = trajectory(sys, p, 10.0, 0.5);
    for (const auto& s : traj) {
        EXPECT_NEAR(s.x, hybrid_flow(sys, s.t, p.x, p.sig), 1e-9);
        EXPECT_EQ(s.vertex, p.sig.evaluate(s.t));
    }
}

TEST(Hybrid, ZeroFieldTrajectoryIsConstant)
{
    const HybridSystem sys(DirectedGraph::complete(2, true), {VectorField::zero(), VectorField::zero()},
                           StateSpace::interval(-1, 1), 1.0);
    for (const auto& s : trajectory(sys, {0.42, SymbolicSignal({0, 1}, 1.0)}, 5.0, 0.25)) {
        EXPECT_EQ(s.x, 0.42);
    }
}

TEST(Hybrid, IntervalInvariance)
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> xd(-1.0, 1.0);
    for (const auto& sys : {flicker_system(1.25), morse_system(1.0)}) {
        for (int trial = 0; trial < 30; ++trial) {
            const auto sig = random_signal(rng, sys.graph(), sys.h());
            for (double t : {-40.0, 40.0}) {
                const double y = hybrid_flow(sys, t, xd(rng), sig);
                EXPECT_GE(y, -1.0 - 1e-9);
                EXPECT_LE(y, 1.0 + 1e-9);
            }
        }
    }
}

TEST(Hybrid, CirclePointsModuloPeriodFlowAlike)
{
    const auto f1 = VectorField::trig({0.3, -1.0}, {0.0, 0.2}, 1.0);
    const auto f2 = VectorField::trig({-0.1, 0.4}, {0.0, -1.0}, 1.0);
    const HybridSystem sys(DirectedGraph::complete(2, true), {f1, f2}, StateSpace::circle(), 0.8);
    const double p = 2.0 * std::numbers::pi;
    const SymbolicSignal sig({0, 1, 1}, 0.8, 0.1);
    for (double x : {0.1, 2.0, 5.5}) {
        EXPECT_NEAR(f1(x), f1(x + p), 1e-12);
        for (double t : {-3.0, 2.5, 9.0}) {
            const double a = hybrid_flow(sys, t, x, sig);
            const double b = hybrid_flow(sys, t, x + p, sig);
            EXPECT_LT(sys.space().distance(a, b), 1e-9);
            EXPECT_GE(a, 0.0);
            EXPECT_LT(a, p);
        }
    }
}
