#pragma once

// Independent reference implementations used only by the tests.

#include "morseflow/field.hpp"
#include "morseflow/graph.hpp"
#include "morseflow/hybrid.hpp"
#include "morseflow/signal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using morseflow::Edge;
using morseflow::Vertex;

using BoolMatrix = std::vector<std::vector<char>>;

inline BoolMatrix adjacency_matrix(int n, const std::vector<Edge>& edges)
{
    BoolMatrix a(n, std::vector<char>(n, 0));
    for (auto [x, y] : edges) {
        a[x][y] = 1;
    }
    return a;
}

inline BoolMatrix multiply(const BoolMatrix& a, const BoolMatrix& b)
{
    const std::size_t n = a.size();
    BoolMatrix c(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!a[i][k]) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                c[i][j] = c[i][j] || b[k][j];
            }
        }
    }
    return c;
}

/// R = A + A^2 + ... + A^n: paths with at least one edge.
inline BoolMatrix reachability(int n, const std::vector<Edge>& edges)
{
    const BoolMatrix a = adjacency_matrix(n, edges);
    BoolMatrix power = a;
    BoolMatrix reach = a;
    for (int k = 2; k <= n; ++k) {
        power = multiply(power, a);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                reach[i][j] = reach[i][j] || power[i][j];
            }
        }
    }
    return reach;
}

struct OracleClass {
    std::vector<Vertex> members;
    bool invariant = false;
    friend auto operator<=>(const OracleClass&, const OracleClass&) = default;
};

inline std::vector<OracleClass> classes(int n, const std::vector<Edge>& edges)
{
    const auto r = reachability(n, edges);
    const auto a = adjacency_matrix(n, edges);
    std::set<OracleClass> out;
    for (int v = 0; v < n; ++v) {
        if (!r[v][v]) {
            continue;
        }
        OracleClass c;
        for (int w = 0; w < n; ++w) {
            if (r[v][w] && r[w][v]) {
                c.members.push_back(w);
            }
        }
        c.invariant = true;
        for (Vertex m : c.members) {
            for (int w = 0; w < n; ++w) {
                if (a[m][w] && !std::binary_search(c.members.begin(), c.members.end(), w)) {
                    c.invariant = false;
                }
            }
        }
        out.insert(c);
    }
    return {out.begin(), out.end()};
}

/// Random graph on n vertices, each ordered pair an edge with probability p.
inline std::vector<Edge> random_edges(int n, double p, std::mt19937_64& rng)
{
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (coin(rng)) {
                edges.emplace_back(a, b);
            }
        }
    }
    return edges;
}

inline bool is_n_graph(int n, const std::vector<Edge>& edges)
{
    std::vector<int> out(n, 0), in(n, 0);
    for (auto [a, b] : edges) {
        ++out[a];
        ++in[b];
    }
    for (int v = 0; v < n; ++v) {
        if (out[v] == 0 || in[v] == 0) {
            return false;
        }
    }
    return true;
}

/// Adaptive Runge-Kutta-Fehlberg 4(5) with tight error control.
inline double rkf45(const std::function<double(double)>& f, double x0, double t, double tol = 1e-13)
{
    if (t == 0.0) {
        return x0;
    }
    const double dir = t > 0.0 ? 1.0 : -1.0;
    const double total = std::abs(t);
    double x = x0;
    double done = 0.0;
    double dt = std::min(total, 1e-3);
    while (done < total) {
        if (done + dt > total) {
            dt = total - done;
        }
        const double s = dir * dt;
        const double k1 = s * f(x);
        const double k2 = s * f(x + k1 / 4.0);
        const double k3 = s * f(x + 3.0 / 32.0 * k1 + 9.0 / 32.0 * k2);
        const double k4 = s * f(x + 1932.0 / 2197.0 * k1 - 7200.0 / 2197.0 * k2 + 7296.0 / 2197.0 * k3);
        const double k5 = s * f(x + 439.0 / 216.0 * k1 - 8.0 * k2 + 3680.0 / 513.0 * k3 - 845.0 / 4104.0 * k4);
        const double k6 = s * f(x - 8.0 / 27.0 * k1 + 2.0 * k2 - 3544.0 / 2565.0 * k3 + 1859.0 / 4104.0 * k4
                                - 11.0 / 40.0 * k5);
        const double x4 = x + 25.0 / 216.0 * k1 + 1408.0 / 2565.0 * k3 + 2197.0 / 4104.0 * k4 - k5 / 5.0;
        const double x5 = x + 16.0 / 135.0 * k1 + 6656.0 / 12825.0 * k3 + 28561.0 / 56430.0 * k4
            - 9.0 / 50.0 * k5 + 2.0 / 55.0 * k6;
        const double err = std::abs(x5 - x4);
        const double scale = tol * (1.0 + std::abs(x));
        if (err <= scale || dt < 1e-10) {
            x = x5;
            done += dt;
        }
        const double factor = err == 0.0 ? 4.0 : 0.9 * std::pow(scale / err, 0.2);
        dt *= std::clamp(factor, 0.1, 4.0);
        dt = std::min(dt, 0.05);
    }
    return x;
}

/// Hybrid flow assembled segment by segment from the adaptive integrator.
inline double hybrid_flow(const morseflow::HybridSystem& sys, double t, double x0, const morseflow::SymbolicSignal& sig)
{
    double x = x0;
    if (t >= 0.0) {
        double now = 0.0;
        while (now < t) {
            const auto k = sig.interval_index(now);
            double end = sig.interval_start(k) + sig.h();
            if (end <= now) {
                end = sig.interval_start(k + 1) + sig.h();
            }
            const double stop = std::min(end, t);
            const auto& field = sys.field(sig.entry(sig.interval_index(0.5 * (now + stop))));
            x = rkf45([&](double z) { return field(z); }, x, stop - now);
            now = stop;
        }
    } else {
        double now = 0.0;
        while (now > t) {
            const auto k = sig.interval_index(now);
            double start = sig.interval_start(k);
            if (start >= now) {
                start -= sig.h();
            }
            const double stop = std::max(start, t);
            const auto& field = sys.field(sig.entry(sig.interval_index(0.5 * (now + stop))));
            x = rkf45([&](double z) { return field(z); }, x, stop - now);
            now = stop;
        }
    }
    return sys.space().normalize(x);
}

/// f(x,y,i) estimated by dense midpoint sampling of [ih, (i+1)h).
inline double sampled_fraction(const morseflow::SymbolicSignal& x, const morseflow::SymbolicSignal& y, long long i,
                               int samples)
{
    const double h = x.h();
    int differ = 0;
    for (int s = 0; s < samples; ++s) {
        const double t = (static_cast<double>(i) + (s + 0.5) / samples) * h;
        differ += x.evaluate(t) != y.evaluate(t) ? 1 : 0;
    }
    return static_cast<double>(differ) / samples;
}

/// Every admissible signal built from a word of length at most max_len, in
/// both extensions, found by enumerating all vertex sequences.
inline std::vector<morseflow::SymbolicSignal> all_short_signals(const morseflow::DirectedGraph& g, int max_len,
                                                                double h)
{
    std::vector<morseflow::SymbolicSignal> out;
    const int n = g.n_vertices();
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Vertex> word(len, 0);
        for (;;) {
            for (auto ext : {morseflow::Extension::PeriodicWord, morseflow::Extension::ConstantEnds}) {
                morseflow::SymbolicSignal s(word, h, 0.0, 0, ext);
                if (s.is_admissible(g)) {
                    out.push_back(s);
                }
            }
            int k = len - 1;
            while (k >= 0 && ++word[k] == n) {
                word[k--] = 0;
            }
            if (k < 0) {
                break;
            }
        }
    }
    return out;
}

/// Chain-recurrent classes of a grid, found by enumerating (eps,T)-chains of
/// at most max_steps steps with flows from the adaptive integrator.
inline std::vector<std::vector<int>> chain_classes(const morseflow::HybridSystem& sys,
                                                   const std::vector<double>& grid, double eps,
                                                   const std::vector<double>& times, int word_len,
                                                   int max_steps = 6)
{
    const int n = static_cast<int>(grid.size());
    const auto signals = all_short_signals(sys.graph(), word_len, sys.h());
    BoolMatrix step(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
        for (const auto& s : signals) {
            for (double t : times) {
                const double y = oracle::hybrid_flow(sys, t, grid[i], s);
                for (int j = 0; j < n; ++j) {
                    if (sys.space().distance(y, grid[j]) <= eps) {
                        step[i][j] = 1;
                    }
                }
            }
        }
    }
    BoolMatrix reach = step;
    BoolMatrix power = step;
    for (int k = 2; k <= max_steps; ++k) {
        power = multiply(power, step);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                reach[i][j] = reach[i][j] || power[i][j];
            }
        }
    }
    std::vector<std::vector<int>> out;
    std::vector<char> used(n, 0);
    for (int i = 0; i < n; ++i) {
        if (used[i] || !reach[i][i]) {
            continue;
        }
        std::vector<int> cls;
        for (int j = i; j < n; ++j) {
            if (reach[j][j] && reach[i][j] && reach[j][i]) {
                cls.push_back(j);
                used[j] = 1;
            }
        }
        out.push_back(cls);
    }
    return out;
}

} // namespace oracle
