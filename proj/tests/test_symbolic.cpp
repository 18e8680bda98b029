#include "morseflow/symbolic.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace morseflow;

TEST(Symbolic, SelfLoopClassGivesConstantWitness)
{
    const DirectedGraph g(1, {{0, 0}});
    const auto w = transitive_witness(g, communicating_classes(g).front(), 3);
    EXPECT_EQ(w.word(), (std::vector<Vertex>{0}));
    EXPECT_EQ(w.extension(), Extension::PeriodicWord);
}

TEST(Symbolic, TwoCycleWitnessContainsBothWords)
{
    const DirectedGraph g(2, {{0, 1}, {1, 0}});
    const auto w = transitive_witness(g, communicating_classes(g).front(), 2);
    EXPECT_TRUE(w.is_admissible(g));
    EXPECT_TRUE(cyclic_contains(w.word(), {0, 1}));
    EXPECT_TRUE(cyclic_contains(w.word(), {1, 0}));
}

TEST(Symbolic, WitnessCoversEveryWordAndStaysInClass)
{
    const DirectedGraph g(4, {{0, 0}, {0, 1}, {1, 2}, {2, 0}, {2, 1}, {2, 3}, {3, 3}});
    const auto classes = communicating_classes(g);
    ASSERT_EQ(classes.size(), 2u);
    for (const auto& c : classes) {
        for (int L = 1; L <= 4; ++L) {
            const auto w = transitive_witness(g, c, L);
            EXPECT_TRUE(w.is_admissible(g));
            EXPECT_TRUE(lift_membership(w, c));
            for (int len = 1; len <= L; ++len) {
                for (const auto& word : admissible_words(g, c, len)) {
                    EXPECT_TRUE(cyclic_contains(w.word(), word));
                }
            }
        }
    }
}

TEST(Symbolic, WitnessShiftsApproachRandomTargets)
{
    const auto g = DirectedGraph::complete(2, true);
    const auto c = communicating_classes(g).front();
    const int L = 7;
    const auto w = transitive_witness(g, c, L);
    std::mt19937_64 rng(31);
    const int center = L / 2;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Vertex> target(L);
        for (auto& v : target) {
            v = static_cast<Vertex>(rng() % 2);
        }
        // Any continuation works; use a constant-ends extension.
        const SymbolicSignal y(target, 1.0, 0.0, center, Extension::ConstantEnds);
        const auto t = witness_shift_for(w, target, center);
        ASSERT_TRUE(t.has_value());
        const auto shifted = w.shifted(*t);
        for (int k = -center; k < L - center; ++k) {
            EXPECT_EQ(shifted.entry(k), y.entry(k));
        }
        // Matching on |i| <= r leaves only the tail 2 * sum_{i>r} 4^-i.
        const int r = L - 1 - center;
        EXPECT_LE(distance(shifted, y).value, (2.0 / 3.0) * std::pow(4.0, -r) + 1e-15);
    }
}

TEST(Symbolic, SensitivePairOnCompleteGraph)
{
    const auto g = DirectedGraph::complete(2, true);
    for (double eps : {0.1, 0.01, 1e-4}) {
        for (const auto& x : {SymbolicSignal::constant(0, 1.0), SymbolicSignal({0, 1, 1}, 1.0, 0.4, 2),
                              SymbolicSignal({1, 0}, 1.0, 0.0, -7, Extension::ConstantEnds)}) {
            const auto pair = sensitive_pair(g, x, eps);
            EXPECT_TRUE(pair.y.is_admissible(g));
            EXPECT_LT(distance(x, pair.y).value, eps);
            EXPECT_GE(distance(x.shifted(pair.divergence_time), pair.y.shifted(pair.divergence_time)).value, 1.0);
            EXPECT_GT(pair.divergence_time, pair.agreement_n * x.h() - 1e-12);
        }
    }
}

TEST(Symbolic, SensitivePairWhenBranchVertexIsNeverRevisited)
{
    // Vertex 2 is the only branch; x sits on 1 forever after its prefix.
    const DirectedGraph g(3, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 0}, {2, 1}});
    const SymbolicSignal x({0, 1}, 1.0, 0.0, 0, Extension::ConstantEnds);
    const auto pair = sensitive_pair(g, x, 0.05);
    EXPECT_TRUE(pair.y.is_admissible(g));
    EXPECT_LT(distance(x, pair.y).value, 0.05);
    EXPECT_GE(distance(x.shifted(pair.divergence_time), pair.y.shifted(pair.divergence_time)).value, 1.0);
}

TEST(Symbolic, SensitivePairPreconditions)
{
    EXPECT_THROW(sensitive_pair(DirectedGraph(1, {{0, 0}}), SymbolicSignal::constant(0, 1.0), 0.1),
                 PreconditionError);
    EXPECT_THROW(sensitive_pair(DirectedGraph(2, {{0, 0}, {0, 1}, {1, 1}}), SymbolicSignal::constant(0, 1.0), 0.1),
                 PreconditionError);
    const auto g = DirectedGraph::complete(2, true);
    EXPECT_THROW(sensitive_pair(g, SymbolicSignal::constant(0, 1.0), 0.0), PreconditionError);
    EXPECT_THROW(sensitive_pair(g, SymbolicSignal::constant(3, 1.0), 0.1), PreconditionError);
}

TEST(Symbolic, ChaosCertificateOnCompleteGraph)
{
    const auto g = DirectedGraph::complete(2, true);
    const auto cert = chaos_certificate(g, 4, SymbolicSignal({0, 1}, 1.0), 0.05);
    EXPECT_EQ(cert.words_total, 2u + 4u + 8u + 16u);
    EXPECT_TRUE(cert.transitive());
    EXPECT_TRUE(cert.sensitive());
    EXPECT_TRUE(cert.passed());
}

TEST(Symbolic, SignalsLeavingAClassAreIsolatedFromItsLift)
{
    // Any signal that visits a vertex outside C, shifted so that visit covers
    // [0,h), differs from every lift signal on a full unit window.
    const DirectedGraph g(3, {{0, 0}, {0, 1}, {1, 0}, {1, 2}, {2, 2}});
    const auto classes = communicating_classes(g);
    const auto& c = classes.front();
    ASSERT_EQ(c.members, (std::vector<Vertex>{0, 1}));
    const auto lift = signal_family(DirectedGraph(2, {{0, 0}, {0, 1}, {1, 0}}), 3, 1.0, {0.0, 0.5},
                                    {-1, 0, 1});
    for (const auto& x : signal_family(g, 4, 1.0, {0.0, 0.3}, {-2, 0, 2})) {
        const auto t = exit_time(x, c);
        if (!t) {
            EXPECT_TRUE(lift_membership(x, c));
            continue;
        }
        const auto shifted = x.shifted(*t);
        for (const auto& y : lift) {
            EXPECT_GT(distance(shifted, y).value, 0.25);
        }
    }
}
