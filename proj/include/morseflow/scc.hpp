#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace morseflow {

/// Strongly connected components of a digraph given as adjacency lists.
///
/// Iterative Tarjan, so deep chain graphs do not exhaust the call stack.
/// Components come back with members sorted ascending, and the component
/// list is sorted by smallest member, which makes the output independent of
/// traversal order.
template <class Adjacency>
std::vector<std::vector<std::size_t>> strongly_connected_components(const Adjacency& adj)
{
    const std::size_t n = adj.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);

    std::vector<std::size_t> index(n, unvisited);
    std::vector<std::size_t> lowlink(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;

    struct Frame {
        std::size_t node;
        std::size_t next_edge;
    };
    std::vector<Frame> call_stack;
    std::size_t counter = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) {
            continue;
        }
        call_stack.push_back({root, 0});
        index[root] = lowlink[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;

        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            const std::size_t v = frame.node;
            const auto& succ = adj[v];
            if (frame.next_edge < succ.size()) {
                const std::size_t w = static_cast<std::size_t>(succ[frame.next_edge++]);
                if (index[w] == unvisited) {
                    index[w] = lowlink[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call_stack.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
                continue;
            }

            if (lowlink[v] == index[v]) {
                std::vector<std::size_t> component;
                std::size_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    component.push_back(w);
                } while (w != v);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
            call_stack.pop_back();
            if (!call_stack.empty()) {
                const std::size_t parent = call_stack.back().node;
                lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
            }
        }
    }

    std::sort(components.begin(), components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return components;
}

/// True when the component carries at least one edge-cycle: more than one
/// member, or a single member with a self-loop.
template <class Adjacency, class Component>
bool component_has_cycle(const Adjacency& adj, const Component& component)
{
    if (component.size() > 1) {
        return true;
    }
    const auto v = component.front();
    for (auto w : adj[v]) {
        if (static_cast<std::size_t>(w) == static_cast<std::size_t>(v)) {
            return true;
        }
    }
    return false;
}

} // namespace morseflow
