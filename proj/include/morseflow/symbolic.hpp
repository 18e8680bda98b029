#pragma once

// Constructive witnesses for the shift flow: a transitive orbit on the lift
// of a communicating class, and a sensitive-dependence pair.

#include "morseflow/error.hpp"
#include "morseflow/graph.hpp"
#include "morseflow/metric.hpp"
#include "morseflow/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <vector>

namespace morseflow {

/// Position in `word` where `sub` starts, read cyclically.
inline std::optional<std::size_t> cyclic_find(const std::vector<Vertex>& word, const std::vector<Vertex>& sub)
{
    const std::size_t n = word.size();
    for (std::size_t start = 0; start < n; ++start) {
        bool ok = true;
        for (std::size_t j = 0; j < sub.size() && ok; ++j) {
            ok = word[(start + j) % n] == sub[j];
        }
        if (ok) {
            return start;
        }
    }
    return std::nullopt;
}

/// True if `sub` occurs in the periodic word `word`, wrapping around.
inline bool cyclic_contains(const std::vector<Vertex>& word, const std::vector<Vertex>& sub)
{
    if (word.empty()) {
        return sub.empty();
    }
    return cyclic_find(word, sub).has_value();
}

/// Shortest prefix p with word == p repeated.
inline std::vector<Vertex> minimal_period(const std::vector<Vertex>& word)
{
    const std::size_t n = word.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p != 0) {
            continue;
        }
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i) {
            periodic = word[i] == word[i - p];
        }
        if (periodic) {
            return {word.begin(), word.begin() + static_cast<std::ptrdiff_t>(p)};
        }
    }
    return word;
}

/// A periodic admissible signal on the lift of `c` whose word contains, read
/// cyclically, every admissible word of length <= L over `c`. Its orbit comes
/// within the truncation tail of every signal in the lift once L is large.
inline SymbolicSignal transitive_witness(const DirectedGraph& g, const CommClass& c, int L, double h = 1.0)
{
    if (L < 1) {
        throw PreconditionError("transitive_witness: L must be at least 1");
    }
    if (c.members.empty()) {
        throw PreconditionError("transitive_witness: empty class");
    }
    auto inside = [&](Vertex v) { return c.contains(v); };
    // Words shorter than L extend to length L inside a class, so covering the
    // length-L words covers everything.
    const auto words = admissible_words(g, c, L);
    if (words.empty()) {
        throw PreconditionError("transitive_witness: class carries no admissible word");
    }

    std::vector<Vertex> seq = words.front();
    auto contains_linear = [&](const std::vector<Vertex>& w) {
        return std::search(seq.begin(), seq.end(), w.begin(), w.end()) != seq.end();
    };
    auto connect = [&](Vertex from, Vertex to) {
        const auto path = shortest_path(g, from, to, inside);
        if (!path) {
            throw PreconditionError("transitive_witness: vertices of the class are not mutually reachable");
        }
        seq.insert(seq.end(), path->begin() + 1, path->end() - 1);
    };

    for (std::size_t k = 1; k < words.size(); ++k) {
        const auto& w = words[k];
        if (contains_linear(w)) {
            continue;
        }
        // Longest suffix of seq that is a proper prefix of w.
        std::size_t overlap = 0;
        for (std::size_t len = std::min(seq.size(), w.size() - 1); len > 0; --len) {
            if (std::equal(seq.end() - static_cast<std::ptrdiff_t>(len), seq.end(), w.begin())) {
                overlap = len;
                break;
            }
        }
        if (overlap == 0 && !g.has_edge(seq.back(), w.front())) {
            connect(seq.back(), w.front());
        }
        seq.insert(seq.end(), w.begin() + static_cast<std::ptrdiff_t>(overlap), w.end());
    }
    if (!g.has_edge(seq.back(), seq.front())) {
        connect(seq.back(), seq.front());
    }
    return SymbolicSignal(minimal_period(seq), h, 0.0, 0, Extension::PeriodicWord);
}

/// Shift time that places `target` on the witness's entries -center .. -center+|target|-1.
inline std::optional<double> witness_shift_for(const SymbolicSignal& witness, const std::vector<Vertex>& target,
                                               int center)
{
    const auto pos = cyclic_find(witness.word(), target);
    if (!pos) {
        return std::nullopt;
    }
    const std::int64_t first = static_cast<std::int64_t>(*pos) - witness.anchor();
    return witness.interval_start(first + center);
}

struct SensitivePair {
    SymbolicSignal y;
    double divergence_time = 0.0; ///< start of a dwell interval on which x and y differ
    int agreement_n = 0;          ///< x and y agree on [-N h, N h]
};

/// Builds y close to x (distance < eps) whose shift by `divergence_time`
/// differs from the matching shift of x on a full dwell interval at time 0,
/// giving distance >= 1 there.
///
/// Requires g to be one communicating class with a vertex of out-degree >= 2.
inline SensitivePair sensitive_pair(const DirectedGraph& g, const SymbolicSignal& x, double eps)
{
    if (!(eps > 0.0)) {
        throw PreconditionError("sensitive_pair: eps must be positive");
    }
    if (!is_single_class(g)) {
        throw PreconditionError("sensitive_pair: graph must be a single communicating class");
    }
    Vertex branch = -1;
    for (Vertex v = 0; v < g.n_vertices(); ++v) {
        if (g.successors(v).size() >= 2) {
            branch = v;
            break;
        }
    }
    if (branch < 0) {
        throw PreconditionError("sensitive_pair: every vertex has out-degree 1");
    }
    if (!x.is_admissible(g)) {
        throw PreconditionError("sensitive_pair: x is not admissible for the graph");
    }

    int n_agree = 1;
    while (truncation_bound(n_agree) >= eps) {
        ++n_agree;
    }
    const double h = x.h();
    const std::int64_t first = x.interval_index(-n_agree * h);
    const std::int64_t last_agree = x.interval_index(n_agree * h);

    std::vector<Vertex> yword;
    for (std::int64_t k = first; k <= last_agree; ++k) {
        yword.push_back(x.entry(k));
    }

    const std::int64_t span = static_cast<std::int64_t>(x.word().size()) + std::abs(x.anchor())
        + g.n_vertices() + 2;
    std::optional<std::int64_t> hit;
    for (std::int64_t k = last_agree; k <= last_agree + span; ++k) {
        if (x.entry(k) == branch) {
            hit = k;
            break;
        }
    }

    std::int64_t diverge = 0;
    if (hit) {
        // x visits the branching vertex; y copies x up to it, then takes the
        // other exit.
        for (std::int64_t k = last_agree + 1; k <= *hit; ++k) {
            yword.push_back(x.entry(k));
        }
        const Vertex follow = x.entry(*hit + 1);
        Vertex other = -1;
        for (Vertex w : g.successors(branch)) {
            if (w != follow) {
                other = w;
                break;
            }
        }
        yword.push_back(other);
        diverge = *hit + 1;
    } else {
        // x never returns to the branching vertex; y walks there instead.
        const auto path = shortest_path(g, yword.back(), branch);
        yword.insert(yword.end(), path->begin() + 1, path->end());
        diverge = last_agree + static_cast<std::int64_t>(path->size()) - 1;
    }
    const auto back = shortest_path(g, yword.back(), yword.front());
    yword.insert(yword.end(), back->begin() + 1, back->end() - 1);

    SensitivePair out{SymbolicSignal(yword, h, x.tau(), -first, Extension::PeriodicWord),
                      x.interval_start(diverge), n_agree};
    return out;
}

/// Start time of the first dwell interval (searching outward from 0) whose
/// vertex lies outside `c`, if any.
inline std::optional<double> exit_time(const SymbolicSignal& sig, const CommClass& c)
{
    const std::int64_t span = static_cast<std::int64_t>(sig.word().size()) + std::abs(sig.anchor()) + 1;
    for (std::int64_t r = 0; r <= span; ++r) {
        for (std::int64_t k : {r, -r}) {
            if (!c.contains(sig.entry(k))) {
                return sig.interval_start(k);
            }
        }
    }
    return std::nullopt;
}

struct ChaosCertificate {
    SymbolicSignal witness;
    int word_length = 0;
    std::size_t words_total = 0;
    std::size_t words_covered = 0;
    SymbolicSignal base;
    SensitivePair pair;
    double eps = 0.0;
    double initial_distance = 0.0;
    double separated_distance = 0.0;

    bool transitive() const { return words_total > 0 && words_covered == words_total; }
    bool sensitive() const { return initial_distance < eps && separated_distance >= 1.0; }
    bool passed() const { return transitive() && sensitive(); }
};

/// Runs both constructive halves of the chaos statement on a graph that is a
/// single communicating class with a branching vertex.
inline ChaosCertificate chaos_certificate(const DirectedGraph& g, int L, const SymbolicSignal& x, double eps,
                                          int window_n = default_window)
{
    if (!is_single_class(g)) {
        throw PreconditionError("chaos_certificate: graph must be a single communicating class");
    }
    ChaosCertificate cert;
    const CommClass all = communicating_classes(g).front();
    cert.witness = transitive_witness(g, all, L, x.h());
    cert.word_length = L;
    for (int len = 1; len <= L; ++len) {
        for (const auto& w : admissible_words(g, all, len)) {
            ++cert.words_total;
            if (cyclic_contains(cert.witness.word(), w)) {
                ++cert.words_covered;
            }
        }
    }
    cert.base = x;
    cert.eps = eps;
    cert.pair = sensitive_pair(g, x, eps);
    cert.initial_distance = distance(x, cert.pair.y, window_n).value;
    cert.separated_distance = distance(x.shifted(cert.pair.divergence_time),
                                       cert.pair.y.shifted(cert.pair.divergence_time), window_n)
                                  .value;
    return cert;
}

} // namespace morseflow
