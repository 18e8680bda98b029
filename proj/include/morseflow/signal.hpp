#pragma once

// Piecewise-constant switching signals with a fixed dwell time.
//
// A signal is a finite word of vertices plus an extension rule that makes it
// bi-infinite. Its breakpoints sit at tau + k*h. Entry index 0 is the dwell
// interval containing time 0 and maps to word position `anchor`.

#include "morseflow/error.hpp"
#include "morseflow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace morseflow {

enum class Extension {
    PeriodicWord, ///< the word repeats forever in both directions
    ConstantEnds  ///< the first and last letters extend to -inf and +inf
};

inline const char* to_string(Extension e)
{
    return e == Extension::PeriodicWord ? "periodic" : "constant-ends";
}

inline Extension extension_from_string(const std::string& s)
{
    if (s == "periodic") {
        return Extension::PeriodicWord;
    }
    if (s == "constant-ends") {
        return Extension::ConstantEnds;
    }
    throw ConfigError("unknown signal extension '" + s + "' (expected periodic or constant-ends)");
}

class SymbolicSignal {
public:
    SymbolicSignal() = default;

    SymbolicSignal(std::vector<Vertex> word, double h, double tau = 0.0, std::int64_t anchor = 0,
                   Extension extension = Extension::PeriodicWord)
        : word_(std::move(word)), h_(h), tau_(tau), anchor_(anchor), extension_(extension)
    {
        if (word_.empty()) {
            throw PreconditionError("signal word must be nonempty");
        }
        if (!(h_ > 0.0) || !std::isfinite(h_)) {
            throw PreconditionError("signal dwell time h must be positive");
        }
        if (!(tau_ >= 0.0 && tau_ < h_)) {
            throw PreconditionError("signal offset tau must lie in [0, h)");
        }
        normalize_anchor();
    }

    static SymbolicSignal constant(Vertex v, double h)
    {
        return SymbolicSignal({v}, h, 0.0, 0, Extension::PeriodicWord);
    }

    const std::vector<Vertex>& word() const { return word_; }
    double h() const { return h_; }
    double tau() const { return tau_; }
    std::int64_t anchor() const { return anchor_; }
    Extension extension() const { return extension_; }

    /// Vertex held on dwell interval k (k = 0 contains time 0).
    Vertex entry(std::int64_t k) const
    {
        const std::int64_t len = static_cast<std::int64_t>(word_.size());
        std::int64_t pos = anchor_ + k;
        if (extension_ == Extension::PeriodicWord) {
            pos %= len;
            if (pos < 0) {
                pos += len;
            }
        } else {
            pos = std::clamp<std::int64_t>(pos, 0, len - 1);
        }
        return word_[static_cast<std::size_t>(pos)];
    }

    /// Start time of dwell interval k.
    double interval_start(std::int64_t k) const
    {
        return tau_ + static_cast<double>(k + base_offset()) * h_;
    }

    /// Index of the dwell interval containing time t.
    std::int64_t interval_index(double t) const
    {
        return static_cast<std::int64_t>(std::floor((t - tau_) / h_)) - base_offset();
    }

    /// Distance from the start of interval 0 to time 0, in [0, h).
    double phase_at_zero() const { return tau_ == 0.0 ? 0.0 : h_ - tau_; }

    /// The vertex active at time t.
    Vertex evaluate(double t) const { return entry(interval_index(t)); }

    /// psi_t: the signal s -> x(s + t).
    SymbolicSignal shifted(double t) const
    {
        // Interval m (raw lattice numbering) contains t at position r within it.
        const double u = (t - tau_) / h_;
        std::int64_t m = static_cast<std::int64_t>(std::floor(u));
        double r = (t - tau_) - static_cast<double>(m) * h_;
        if (r < 0.0) {
            r += h_;
            --m;
        }
        if (r >= h_) {
            r -= h_;
            ++m;
        }
        SymbolicSignal out = *this;
        out.tau_ = r == 0.0 ? 0.0 : h_ - r;
        if (out.tau_ >= h_) {
            out.tau_ = 0.0;
        }
        // `m` counts from the raw lattice origin; convert to this signal's entry index.
        out.anchor_ = anchor_ + m - base_offset();
        out.normalize_anchor();
        return out;
    }

    /// Vertices appearing anywhere in the bi-infinite signal.
    std::vector<Vertex> vertex_set() const
    {
        std::set<Vertex> s(word_.begin(), word_.end());
        return {s.begin(), s.end()};
    }

    /// Admissible for g: the signal lies in the graph's shift space, not just
    /// in the unconstrained one.
    bool is_admissible(const DirectedGraph& g) const
    {
        for (Vertex v : word_) {
            if (!g.has_vertex(v)) {
                return false;
            }
        }
        for (std::size_t i = 0; i + 1 < word_.size(); ++i) {
            if (!g.has_edge(word_[i], word_[i + 1])) {
                return false;
            }
        }
        if (extension_ == Extension::PeriodicWord) {
            return g.has_edge(word_.back(), word_.front());
        }
        return g.has_self_loop(word_.front()) && g.has_self_loop(word_.back());
    }

    bool is_constant() const
    {
        return std::all_of(word_.begin(), word_.end(), [&](Vertex v) { return v == word_.front(); });
    }

    friend bool operator==(const SymbolicSignal&, const SymbolicSignal&) = default;

private:
    // Raw lattice interval floor((t - tau)/h) is offset from entry numbering by
    // floor(-tau/h), i.e. -1 when tau > 0.
    std::int64_t base_offset() const { return tau_ > 0.0 ? -1 : 0; }

    void normalize_anchor()
    {
        if (extension_ == Extension::PeriodicWord) {
            const std::int64_t len = static_cast<std::int64_t>(word_.size());
            anchor_ %= len;
            if (anchor_ < 0) {
                anchor_ += len;
            }
        }
    }

    std::vector<Vertex> word_;
    double h_ = 1.0;
    double tau_ = 0.0;
    std::int64_t anchor_ = 0;
    Extension extension_ = Extension::PeriodicWord;
};

inline Vertex evaluate(const SymbolicSignal& sig, double t) { return sig.evaluate(t); }

inline SymbolicSignal shift(const SymbolicSignal& sig, double t) { return sig.shifted(t); }

/// The signal takes values in C at every time.
inline bool lift_membership(const SymbolicSignal& sig, const CommClass& c)
{
    return std::all_of(sig.word().begin(), sig.word().end(), [&](Vertex v) { return c.contains(v); });
}

/// Every admissible word with exactly `length` letters, lexicographic.
inline std::vector<std::vector<Vertex>> admissible_words(const DirectedGraph& g, int length)
{
    std::vector<std::vector<Vertex>> out;
    if (length < 1) {
        return out;
    }
    std::vector<Vertex> current;
    auto recurse = [&](auto&& self) -> void {
        if (static_cast<int>(current.size()) == length) {
            out.push_back(current);
            return;
        }
        if (current.empty()) {
            for (Vertex v = 0; v < g.n_vertices(); ++v) {
                current.push_back(v);
                self(self);
                current.pop_back();
            }
            return;
        }
        for (Vertex w : g.successors(current.back())) {
            current.push_back(w);
            self(self);
            current.pop_back();
        }
    };
    recurse(recurse);
    return out;
}

/// Same as admissible_words but restricted to vertices of `c`.
inline std::vector<std::vector<Vertex>> admissible_words(const DirectedGraph& g, const CommClass& c, int length)
{
    auto all = admissible_words(g, length);
    std::erase_if(all, [&](const auto& w) {
        return !std::all_of(w.begin(), w.end(), [&](Vertex v) { return c.contains(v); });
    });
    return all;
}

/// Admissible signals built from every word of length 1..max_len, with each
/// extension rule where the graph permits it, at the given offsets and
/// anchors. Duplicates (the same bi-infinite function) are dropped.
inline std::vector<SymbolicSignal> signal_family(const DirectedGraph& g, int max_len, double h,
                                                 const std::vector<double>& taus = {0.0},
                                                 const std::vector<std::int64_t>& anchors = {0})
{
    std::vector<SymbolicSignal> out;
    auto same_function = [](const SymbolicSignal& a, const SymbolicSignal& b) {
        if (a.h() != b.h() || a.tau() != b.tau()) {
            return false;
        }
        // Two signals agree everywhere iff they agree on a window covering both
        // words' transients and two full periods.
        const std::int64_t span = static_cast<std::int64_t>(a.word().size() + b.word().size())
            + std::abs(a.anchor()) + std::abs(b.anchor()) + 2;
        for (std::int64_t k = -2 * span; k <= 2 * span; ++k) {
            if (a.entry(k) != b.entry(k)) {
                return false;
            }
        }
        return true;
    };
    auto add = [&](SymbolicSignal s) {
        for (const auto& existing : out) {
            if (same_function(existing, s)) {
                return;
            }
        }
        out.push_back(std::move(s));
    };
    for (int len = 1; len <= max_len; ++len) {
        for (const auto& w : admissible_words(g, len)) {
            for (Extension ext : {Extension::PeriodicWord, Extension::ConstantEnds}) {
                for (double tau : taus) {
                    for (std::int64_t anchor : anchors) {
                        SymbolicSignal s(w, h, tau, anchor, ext);
                        if (s.is_admissible(g)) {
                            add(std::move(s));
                        }
                    }
                }
            }
        }
    }
    return out;
}

} // namespace morseflow
