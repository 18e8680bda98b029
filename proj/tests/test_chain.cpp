#include "morseflow/chain.hpp"
#include "morseflow/limits.hpp"
#include "oracles.hpp"
#include "systems.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace morseflow;
using namespace testsys;

namespace {

std::vector<std::vector<int>> members_of(const ChainSetResult& r)
{
    std::vector<std::vector<int>> out;
    for (const auto& c : r.components) {
        out.push_back(c.members);
    }
    return out;
}

ChainOptions small(int n, double eps, double T, double T_max)
{
    ChainOptions o;
    o.grid_n = n;
    o.eps = eps;
    o.T = T;
    o.T_max = T_max;
    return o;
}

HybridSystem single(const VectorField& f, double h = 0.5)
{
    return HybridSystem(DirectedGraph(1, {{0, 0}}), {f}, StateSpace::interval(-1, 1), h);
}

} // namespace

TEST(ChainGraph, ZeroFieldEdgesStayInsideEpsBalls)
{
    const HybridSystem sys(DirectedGraph::complete(2, true), {VectorField::zero(), VectorField::zero()},
                           StateSpace::interval(-1, 1), 1.0);
    const auto cg = build_chain_graph(sys, small(11, 0.15, 2.0, 4.0));
    for (std::size_t i = 0; i < cg.size(); ++i) {
        EXPECT_TRUE(cg.has_edge(static_cast<int>(i), static_cast<int>(i)));
        for (int j : cg.successors[i]) {
            EXPECT_LE(std::abs(cg.grid[i] - cg.grid[j]), 0.15);
        }
    }
    // eps below the spacing: every node is its own chain set.
    const auto fine = chain_sets(build_chain_graph(sys, small(11, 0.05, 2.0, 4.0)));
    ASSERT_EQ(fine.components.size(), 11u);
    for (const auto& c : fine.components) {
        EXPECT_EQ(c.members.size(), 1u);
    }
}

TEST(ChainGraph, ContractionPointsEveryEdgeInward)
{
    const auto sys = single(VectorField::polynomial({0.0, -1.0}));
    const auto cg = build_chain_graph(sys, small(21, 0.05, 2.5, 5.0));
    for (const auto& e : cg.edges) {
        EXPECT_TRUE(std::abs(cg.grid[e.to]) < std::abs(cg.grid[e.from]) || std::abs(cg.grid[e.to]) <= 0.05 + 1e-12)
            << e.from << "->" << e.to;
    }
    const auto sets = chain_sets(cg);
    ASSERT_EQ(sets.components.size(), 1u);
    EXPECT_EQ(sets.components.front().members, (std::vector<int>{10}));
}

TEST(ChainGraph, Preconditions)
{
    const auto sys = single(VectorField::zero());
    EXPECT_THROW(build_chain_graph(sys, small(1, 0.1, 1.0, 2.0)), PreconditionError);
    EXPECT_THROW(build_chain_graph(sys, small(5, 0.0, 1.0, 2.0)), PreconditionError);
    EXPECT_THROW(build_chain_graph(sys, small(5, 0.1, 2.0, 1.0)), PreconditionError);
}

TEST(ChainGraph, TimesFollowTheDwellLattice)
{
    EXPECT_EQ(chain_times(1.0, 2.0, 0.5), (std::vector<double>{1.0, 1.5, 2.0}));
    EXPECT_EQ(chain_times(1.0, 1.0, 0.5), (std::vector<double>{1.0}));
}

TEST(ChainSets, MatchBruteForceChains)
{
    struct Case {
        HybridSystem sys;
        int n;
        double eps;
        int word_len;
    };
    const std::vector<Case> cases{
        {flicker_system(0.25), 21, 0.13, 3},
        {flicker_system(1.0), 17, 0.14, 2},
        {morse_system(0.5), 21, 0.13, 3},
        {HybridSystem(DirectedGraph::complete(2, true), {field_a, field_b}, StateSpace::interval(-1, 1), 0.5), 25,
         0.11, 3},
        {single(VectorField::polynomial({0.0, 1.0, 0.0, -1.0})), 25, 0.1, 1},
    };
    for (const auto& c : cases) {
        auto opt = small(c.n, c.eps, 5.0 * c.sys.h(), 7.0 * c.sys.h());
        opt.word_len = c.word_len;
        const auto cg = build_chain_graph(c.sys, opt);
        const auto expected
            = oracle::chain_classes(c.sys, cg.grid, c.eps, chain_times(cg.T, cg.T_max, c.sys.h()), c.word_len);
        EXPECT_EQ(members_of(chain_sets(cg)), expected) << "n=" << c.n << " eps=" << c.eps;
    }
}

TEST(ChainSets, EnlargingEpsOnlyMerges)
{
    const auto sys = flicker_system(0.25);
    std::vector<ChainSetResult> ladder;
    std::vector<double> eps{0.02, 0.04, 0.06, 0.1, 0.15};
    for (double e : eps) {
        ladder.push_back(chain_sets(build_chain_graph(sys, small(41, e, 1.25, 2.5))));
    }
    for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
        for (const auto& c : ladder[k].components) {
            const auto big = ladder[k + 1].component_of(c.members.front());
            ASSERT_TRUE(big.has_value()) << "eps " << eps[k];
            for (int m : c.members) {
                EXPECT_EQ(ladder[k + 1].component_of(m), big) << "eps " << eps[k];
            }
        }
    }
}

TEST(ChainSets, FlickerSystemComponents)
{
    const auto sys = flicker_system(0.25);
    const auto cg = build_chain_graph(sys, small(201, 0.02, -1.0, -1.0));
    const auto sets = chain_sets(sys, cg);
    int bands = 0;
    for (const auto& c : sets.components) {
        if (c.lo == -1.0 || c.hi == 1.0) {
            EXPECT_EQ(c.members.size(), 1u);
            continue;
        }
        EXPECT_GE(c.lo, -0.5 - cg.eps);
        EXPECT_LE(c.hi, 0.5 + cg.eps);
        if (c.members.size() > 1) {
            ++bands;
            EXPECT_TRUE(c.witness_signal.has_value());
            EXPECT_TRUE(lift_projection_check(sys, cg, c.members).passed());
            // Half of the band is not a chain set.
            const std::vector<int> half(c.members.begin(), c.members.begin() + c.members.size() / 2);
            const auto split = lift_projection_check(sys, cg, half);
            EXPECT_FALSE(split.passed());
            EXPECT_FALSE(split.diagnostics.empty());
        }
    }
    EXPECT_EQ(bands, 1);
    ASSERT_TRUE(sets.component_of(0).has_value());
    ASSERT_TRUE(sets.component_of(200).has_value());
    EXPECT_TRUE(lift_projection_check(sys, cg, {0}).passed());
}

TEST(ChainSets, LimitPointsLieInChainSets)
{
    const auto sys = morse_system(0.5);
    const auto cg = build_chain_graph(sys, small(81, 0.03, -1.0, -1.0));
    const auto sets = chain_sets(cg);
    for (const auto& s : signal_family(sys.graph(), 2, sys.h())) {
        for (double x0 : {-0.95, -0.6, -0.3, 0.1, 0.6, 0.95}) {
            for (int dir : {1, -1}) {
                const auto est = estimate_limit(sys, {x0, s}, dir, {2000.0, 2100.0, 1e-3, -1.0});
                for (double p : est.points) {
                    bool inside = false;
                    for (const auto& c : sets.components) {
                        for (int m : c.members) {
                            inside = inside || std::abs(cg.grid[m] - p) <= cg.eps + cg.spacing;
                        }
                    }
                    EXPECT_TRUE(inside) << "x0=" << x0 << " dir=" << dir << " p=" << p;
                }
            }
        }
    }
}

TEST(ChainGraph, EdgesIndependentOfThreads)
{
    const auto sys = morse_system(0.5);
    auto opt = small(61, 0.03, 2.5, 5.0);
    const auto a = build_chain_graph(sys, opt);
    opt.threads = 3;
    const auto b = build_chain_graph(sys, opt);
    ASSERT_EQ(a.edges.size(), b.edges.size());
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        EXPECT_EQ(a.edges[i].from, b.edges[i].from);
        EXPECT_EQ(a.edges[i].to, b.edges[i].to);
        EXPECT_EQ(a.edges[i].signal, b.edges[i].signal);
        EXPECT_EQ(a.edges[i].t, b.edges[i].t);
    }
}

TEST(Sweep, ComponentsTrackTheUnperturbedFixedPoints)
{
    SweepOptions opt;
    opt.chain.grid_n = 121;
    opt.chain.eps = 0.05;
    const auto sweep = perturbation_sweep(VectorField::polynomial({0.0, 1.0, 0.0, -1.0}), {0.2, 0.1, 0.0}, opt);
    EXPECT_DOUBLE_EQ(sweep.constant, 1.0);
    ASSERT_EQ(sweep.levels.size(), 3u);
    const auto& ref = sweep.levels[sweep.reference].sets.components;
    ASSERT_EQ(ref.size(), 3u);
    EXPECT_NEAR(ref[0].lo, -1.0, opt.chain.eps + 1e-9);
    EXPECT_LE(std::abs(ref[1].lo), opt.chain.eps + 1e-9);
    EXPECT_NEAR(ref[2].hi, 1.0, opt.chain.eps + 1e-9);
    for (std::size_t l = 0; l < sweep.levels.size(); ++l) {
        EXPECT_EQ(sweep.matched_count(l), 3u);
        EXPECT_EQ(sweep.levels[l].sets.components.size(), 3u);
        for (double d : sweep.levels[l].distance) {
            EXPECT_LE(d, sweep.bound(sweep.levels[l].rho));
        }
    }
}

TEST(Sweep, Preconditions)
{
    const auto base = VectorField::polynomial({0.0, 1.0, 0.0, -1.0});
    EXPECT_THROW(perturbation_sweep(base, {0.2, 0.1}), PreconditionError);
    SweepOptions opt;
    opt.controls = {-1.0, 1.0};
    EXPECT_THROW(perturbation_sweep(base, {0.1, 0.0}, opt), PreconditionError);
}

TEST(Hausdorff, FinitePointSets)
{
    const auto line = StateSpace::interval(-2, 2);
    EXPECT_DOUBLE_EQ(hausdorff({0.0, 1.0}, {0.0}, line), 1.0);
    EXPECT_DOUBLE_EQ(hausdorff({0.5}, {0.0, 1.0}, line), 0.5);
    EXPECT_EQ(hausdorff({0.3}, {0.3}, line), 0.0);
}
