#pragma once

// Finite directed graphs constraining which switches a hybrid system may make.

#include "morseflow/error.hpp"
#include "morseflow/scc.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace morseflow {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;
using Path = std::vector<Vertex>;

/// Vertices are 0..n-1; edges are unique ordered pairs.
class DirectedGraph {
public:
    DirectedGraph() = default;

    DirectedGraph(int n_vertices, std::vector<Edge> edges)
        : n_(n_vertices), edges_(std::move(edges)), succ_(n_vertices > 0 ? n_vertices : 0)
    {
        if (n_ <= 0) {
            throw PreconditionError("graph must have at least one vertex");
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
            throw PreconditionError("graph has duplicate edges");
        }
        for (const auto& [a, b] : edges_) {
            if (a < 0 || a >= n_ || b < 0 || b >= n_) {
                std::ostringstream os;
                os << "edge (" << a << "," << b << ") references a vertex outside 0.." << n_ - 1;
                throw PreconditionError(os.str());
            }
            succ_[a].push_back(b);
        }
    }

    /// The complete graph on n vertices, optionally with self-loops.
    static DirectedGraph complete(int n, bool self_loops)
    {
        std::vector<Edge> edges;
        for (Vertex a = 0; a < n; ++a) {
            for (Vertex b = 0; b < n; ++b) {
                if (a != b || self_loops) {
                    edges.emplace_back(a, b);
                }
            }
        }
        return DirectedGraph(n, std::move(edges));
    }

    int n_vertices() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Vertex>& successors(Vertex v) const { return succ_.at(v); }
    const std::vector<std::vector<Vertex>>& adjacency() const { return succ_; }

    bool has_vertex(Vertex v) const { return v >= 0 && v < n_; }

    bool has_edge(Vertex a, Vertex b) const
    {
        return std::binary_search(edges_.begin(), edges_.end(), Edge{a, b});
    }

    bool has_self_loop(Vertex v) const { return has_edge(v, v); }

    friend bool operator==(const DirectedGraph& a, const DirectedGraph& b)
    {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> succ_;
};

struct DegreeReport {
    std::vector<int> out_degrees;
    std::vector<int> in_degrees;
    bool is_n_graph = false;
};

enum class ClassKind { Variant, Invariant };

inline const char* to_string(ClassKind kind)
{
    return kind == ClassKind::Invariant ? "invariant" : "variant";
}

/// A maximal set of mutually reachable vertices.
struct CommClass {
    std::vector<Vertex> members; // sorted ascending
    ClassKind kind = ClassKind::Variant;

    bool contains(Vertex v) const { return std::binary_search(members.begin(), members.end(), v); }

    friend bool operator==(const CommClass&, const CommClass&) = default;
};

/// Counts out- and in-degrees; an N-graph has every degree at least one.
inline DegreeReport validate_n_graph(const DirectedGraph& g)
{
    if (g.n_vertices() <= 0) {
        throw PreconditionError("graph has an empty vertex set");
    }
    DegreeReport report;
    report.out_degrees.assign(g.n_vertices(), 0);
    report.in_degrees.assign(g.n_vertices(), 0);
    for (const auto& [a, b] : g.edges()) {
        ++report.out_degrees[a];
        ++report.in_degrees[b];
    }
    report.is_n_graph = std::all_of(report.out_degrees.begin(), report.out_degrees.end(),
                                    [](int d) { return d >= 1; })
        && std::all_of(report.in_degrees.begin(), report.in_degrees.end(), [](int d) { return d >= 1; });
    return report;
}

inline void require_n_graph(const DirectedGraph& g)
{
    if (!validate_n_graph(g).is_n_graph) {
        throw PreconditionError("graph is not an N-graph (some vertex has in- or out-degree 0)");
    }
}

/// Communicating classes of an N-graph, sorted by smallest member.
///
/// A vertex that lies on no cycle communicates with nothing, itself included,
/// and belongs to no class.
inline std::vector<CommClass> communicating_classes(const DirectedGraph& g)
{
    require_n_graph(g);
    const auto& adj = g.adjacency();
    std::vector<CommClass> classes;
    for (const auto& component : strongly_connected_components(adj)) {
        if (!component_has_cycle(adj, component)) {
            continue;
        }
        CommClass c;
        c.members.assign(component.begin(), component.end());
        bool leaves = false;
        for (Vertex v : c.members) {
            for (Vertex w : g.successors(v)) {
                leaves = leaves || !c.contains(w);
            }
        }
        c.kind = leaves ? ClassKind::Variant : ClassKind::Invariant;
        classes.push_back(std::move(c));
    }
    return classes;
}

/// Returns an invariant communicating class. Every N-graph has one.
inline CommClass invariant_class_exists(const DirectedGraph& g)
{
    for (auto& c : communicating_classes(g)) {
        if (c.kind == ClassKind::Invariant) {
            return c;
        }
    }
    throw Error("internal error: N-graph without an invariant communicating class");
}

/// True when the graph is one communicating class covering every vertex.
inline bool is_single_class(const DirectedGraph& g)
{
    if (!validate_n_graph(g).is_n_graph) {
        return false;
    }
    const auto classes = communicating_classes(g);
    return classes.size() == 1 && static_cast<int>(classes.front().members.size()) == g.n_vertices();
}

/// All admissible paths from `from` to `to` using between 1 and `max_len`
/// edges, in lexicographic order. The trivial zero-edge path is excluded.
inline std::vector<Path> admissible_paths(const DirectedGraph& g, Vertex from, Vertex to, int max_len)
{
    if (!g.has_vertex(from) || !g.has_vertex(to)) {
        throw PreconditionError("admissible_paths: vertex index out of range");
    }
    if (max_len < 1) {
        throw PreconditionError("admissible_paths: max_len must be at least 1");
    }
    std::vector<Path> out;
    Path current{from};
    // Depth-first over successor lists, which are sorted, so output is lexicographic.
    auto recurse = [&](auto&& self) -> void {
        const Vertex last = current.back();
        for (Vertex w : g.successors(last)) {
            current.push_back(w);
            if (w == to) {
                out.push_back(current);
            }
            if (static_cast<int>(current.size()) - 1 < max_len) {
                self(self);
            }
            current.pop_back();
        }
    };
    recurse(recurse);
    std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

/// Shortest path with at least one edge from `from` to `to` whose vertices
/// all satisfy `allowed`. Returns the full vertex sequence, endpoints included.
template <class Allowed>
std::optional<Path> shortest_path(const DirectedGraph& g, Vertex from, Vertex to, Allowed allowed)
{
    std::vector<Vertex> parent(g.n_vertices(), -1);
    std::vector<char> seen(g.n_vertices(), 0);
    std::deque<Vertex> queue;
    for (Vertex w : g.successors(from)) {
        if (!allowed(w) || seen[w]) {
            continue;
        }
        seen[w] = 1;
        parent[w] = from;
        queue.push_back(w);
    }
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        if (v == to) {
            Path path{to};
            Vertex cur = to;
            // parent chain terminates at `from`; a cycle back to `from` is handled
            // by stopping after the first hop when to == from.
            do {
                cur = parent[cur];
                path.push_back(cur);
            } while (cur != from);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (Vertex w : g.successors(v)) {
            if (!allowed(w) || seen[w]) {
                continue;
            }
            seen[w] = 1;
            parent[w] = v;
            queue.push_back(w);
        }
    }
    return std::nullopt;
}

inline std::optional<Path> shortest_path(const DirectedGraph& g, Vertex from, Vertex to)
{
    return shortest_path(g, from, to, [](Vertex) { return true; });
}

/// Graphviz rendering; classes become clusters, invariant ones drawn bold.
inline std::string to_dot(const DirectedGraph& g, const std::vector<CommClass>& classes)
{
    std::ostringstream os;
    os << "digraph G {\n";
    std::vector<char> placed(g.n_vertices(), 0);
    for (std::size_t k = 0; k < classes.size(); ++k) {
        const auto& c = classes[k];
        os << "  subgraph cluster_" << k << " {\n";
        os << "    label=\"class " << k << " (" << to_string(c.kind) << ")\";\n";
        if (c.kind == ClassKind::Invariant) {
            os << "    style=bold; color=blue;\n";
        } else {
            os << "    style=dashed;\n";
        }
        for (Vertex v : c.members) {
            os << "    " << v << ";\n";
            placed[v] = 1;
        }
        os << "  }\n";
    }
    for (Vertex v = 0; v < g.n_vertices(); ++v) {
        if (!placed[v]) {
            os << "  " << v << ";\n";
        }
    }
    for (const auto& [a, b] : g.edges()) {
        os << "  " << a << " -> " << b << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace morseflow
