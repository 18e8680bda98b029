#include "morseflow/limits.hpp"
#include "oracles.hpp"
#include "systems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace morseflow;
using namespace testsys;

namespace {

HybridSystem single(const VectorField& f, StateSpace space = StateSpace::interval(-1, 1), double h = 1.0)
{
    return HybridSystem(DirectedGraph(1, {{0, 0}}), {f}, space, h);
}

} // namespace

TEST(Limits, SingleFieldOmegaMatchesFixedPoints)
{
    const auto sys = single(field_a);
    const auto sig = SymbolicSignal::constant(0, 1.0);
    for (double x0 : {-0.9, -0.6, -0.3, 0.2, 0.9}) {
        const auto est = omega_limit_estimate(sys, {x0, sig});
        EXPECT_TRUE(est.near(-0.5, 1e-9, sys.space())) << x0;
        ASSERT_EQ(est.points.size(), 1u);
    }
    EXPECT_TRUE(omega_limit_estimate(sys, {1.0, sig}).near(1.0, 0.0, sys.space()));
    EXPECT_TRUE(omega_limit_estimate(sys, {-1.0, sig}).near(-1.0, 0.0, sys.space()));
}

TEST(Limits, SingleFieldAlphaGoesToRepellers)
{
    const auto sys = single(field_a);
    const auto sig = SymbolicSignal::constant(0, 1.0);
    EXPECT_TRUE(alpha_limit_estimate(sys, {-0.7, sig}).near(-1.0, 1e-9, sys.space()));
    EXPECT_TRUE(alpha_limit_estimate(sys, {0.3, sig}).near(1.0, 1e-9, sys.space()));
}

TEST(Limits, TailAgreesWithIndependentIntegrator)
{
    const auto sys = single(field_b, StateSpace::interval(-1, 1), 0.5);
    const auto sig = SymbolicSignal::constant(0, 0.5);
    const double x0 = -0.2;
    const auto est = estimate_limit(sys, {x0, sig}, 1, {2.0, 6.0, 1e-3, -1.0});
    const double lo = oracle::rkf45([](double x) { return field_b(x); }, x0, 2.0);
    const double hi = oracle::rkf45([](double x) { return field_b(x); }, x0, 6.0);
    EXPECT_NEAR(est.lo, lo, 1e-9);
    EXPECT_NEAR(est.hi, hi, 1e-9);
    EXPECT_GT(est.points.size(), 1u);
}

TEST(Limits, RepresentativesAreSeparatedAndCoverTail)
{
    const auto sys = flicker_system(4.0);
    const SymbolicSignal sig({0, 1}, 4.0);
    const auto est = omega_limit_estimate(sys, {0.0, sig});
    ASSERT_GT(est.width(), 0.5);
    for (std::size_t i = 1; i < est.points.size(); ++i) {
        EXPECT_GT(est.points[i] - est.points[i - 1], est.cluster_radius);
    }
    EXPECT_LE(est.points.front() - est.lo, 1e-12);
    EXPECT_LE(est.hi - est.points.back(), est.cluster_radius);
}

TEST(Limits, CircleRotationFillsTheCircle)
{
    const auto sys = single(VectorField::polynomial({1.0}), StateSpace::circle(), 1.0);
    const auto est = omega_limit_estimate(sys, {0.3, SymbolicSignal::constant(0, 1.0)});
    EXPECT_TRUE(est.full_circle);
    EXPECT_EQ(est.distance_to(5.0, sys.space()), 0.0);
    EXPECT_NEAR(est.max_distance_to(1.0, sys.space()), std::numbers::pi, 1e-12);
}

TEST(Limits, CircleArcAcrossTheSeam)
{
    // x' = -sin(x) attracts to 0, approached from both sides of the seam.
    const auto sys = single(VectorField::trig({0.0}, {0.0, -1.0}, 1.0), StateSpace::circle(), 1.0);
    const auto sig = SymbolicSignal::constant(0, 1.0);
    for (double x0 : {0.5, 2 * std::numbers::pi - 0.5}) {
        const auto est = omega_limit_estimate(sys, {x0, sig});
        EXPECT_FALSE(est.full_circle);
        EXPECT_TRUE(est.near(0.0, 1e-9, sys.space())) << x0;
        EXPECT_TRUE(est.near(2 * std::numbers::pi, 1e-9, sys.space())) << x0;
    }
}

TEST(Limits, SignalDescriptors)
{
    const SymbolicSignal eventually({0, 1}, 1.0, 0.0, 0, Extension::ConstantEnds);
    EXPECT_EQ(signal_omega(eventually).vertices, (std::vector<Vertex>{1}));
    EXPECT_TRUE(signal_omega(eventually).constant);
    EXPECT_EQ(signal_alpha(eventually).vertices, (std::vector<Vertex>{0}));
    const SymbolicSignal periodic({0, 1, 1}, 1.0);
    EXPECT_EQ(signal_omega(periodic).vertices, (std::vector<Vertex>{0, 1}));
    EXPECT_FALSE(signal_omega(periodic).constant);
    EXPECT_TRUE(signal_alpha(SymbolicSignal::constant(1, 1.0)).constant);
}

TEST(Limits, Preconditions)
{
    const auto sys = single(field_a);
    const ProductPoint p{0.0, SymbolicSignal::constant(0, 1.0)};
    EXPECT_THROW(estimate_limit(sys, p, 1, {5.0, 5.0, 1e-3, -1.0}), PreconditionError);
    EXPECT_THROW(estimate_limit(sys, p, 1, {1.0, 5.0, 0.0, -1.0}), PreconditionError);
}
