#pragma once

// Shared fixtures and independent brute-force checks used by the test
// suites. Everything here is deliberately naive; the library must agree
// with it.

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "cbn/digraph.hpp"

namespace testutil {

inline cbn::Digraph make_digraph(int n, const std::vector<std::pair<int, int>>& arcs) {
    cbn::Digraph d(n);
    for (auto [u, v] : arcs) d.add_arc(u, v);
    return d;
}

// All simple cycle lengths, by DFS over paths. Exponential; fine below ~10
// vertices.
inline std::vector<int> enumerate_cycle_lengths(const cbn::Digraph& d) {
    std::vector<int> lengths;
    const int n = d.order();
    std::vector<int> path;
    std::vector<bool> on_path(n + 1, false);

    // Only cycles whose minimum vertex is the start are recorded, so each
    // simple cycle is found exactly once.
    std::function<void(int, int)> dfs = [&](int start, int u) {
        for (int v : d.out_neighbors(u)) {
            if (v == start) {
                lengths.push_back(static_cast<int>(path.size()));
                continue;
            }
            if (v < start || on_path[v]) continue;
            on_path[v] = true;
            path.push_back(v);
            dfs(start, v);
            path.pop_back();
            on_path[v] = false;
        }
    };
    for (int s = 1; s <= n; ++s) {
        path = {s};
        std::fill(on_path.begin(), on_path.end(), false);
        on_path[s] = true;
        dfs(s, s);
    }
    std::sort(lengths.begin(), lengths.end());
    return lengths;
}

inline long long gcd_of_all(const std::vector<int>& xs) {
    long long g = 0;
    for (int x : xs) g = std::gcd(g, static_cast<long long>(x));
    return g;
}

// Deterministic random digraphs. Loops excluded unless loop_prob > 0.
inline cbn::Digraph random_digraph(std::mt19937& rng, int n, double arc_prob,
                                   double loop_prob = 0.0) {
    cbn::Digraph d(n);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v) {
            if (u == v) {
                if (loop_prob > 0 && coin(rng) < loop_prob) d.add_arc(u, u);
            } else if (coin(rng) < arc_prob) {
                d.add_arc(u, v);
            }
        }
    return d;
}

// Strongly connected: a random Hamiltonian cycle plus random extra arcs.
inline cbn::Digraph random_strongly_connected(std::mt19937& rng, int n, double extra_prob,
                                              double loop_prob = 0.0) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    cbn::Digraph d(n);
    for (int i = 0; i < n; ++i) d.add_arc(perm[i], perm[(i + 1) % n]);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v) {
            if (u == v) {
                if (loop_prob > 0 && coin(rng) < loop_prob) d.add_arc(u, u);
            } else if (coin(rng) < extra_prob) {
                d.add_arc(u, v);
            }
        }
    return d;
}

// Strongly connected and cyclically c-partite by construction: vertices are
// spread over c classes and arcs only step class i -> i+1 mod c.
inline cbn::Digraph random_cyclic_partite(std::mt19937& rng, int n, int c, double extra_prob) {
    std::vector<std::vector<int>> classes(c);
    for (int v = 1; v <= n; ++v) classes[(v - 1) % c].push_back(v);
    cbn::Digraph d(n);
    // A closed tour through the classes touching every vertex keeps it
    // strongly connected.
    std::vector<int> tour;
    size_t longest = 0;
    for (auto& cl : classes) longest = std::max(longest, cl.size());
    for (size_t round = 0; round < longest; ++round)
        for (int i = 0; i < c; ++i) tour.push_back(classes[i][round % classes[i].size()]);
    for (size_t i = 0; i < tour.size(); ++i) d.add_arc(tour[i], tour[(i + 1) % tour.size()]);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int i = 0; i < c; ++i)
        for (int u : classes[i])
            for (int v : classes[(i + 1) % c])
                if (coin(rng) < extra_prob) d.add_arc(u, v);
    return d;
}

// Symmetric strongly connected digraph from a random connected undirected
// graph (random spanning tree plus extra edges).
inline cbn::Digraph random_symmetric_connected(std::mt19937& rng, int n, double extra_prob,
                                               bool bipartite = false) {
    std::vector<int> side(n + 1, 0);
    if (bipartite)
        for (int v = 1; v <= n; ++v) side[v] = std::uniform_int_distribution<int>(0, 1)(rng);
    auto allowed = [&](int u, int v) { return !bipartite || side[u] != side[v]; };
    cbn::Digraph d(n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    if (bipartite) {
        // Make sure both sides are inhabited so tree edges exist.
        side[order[0]] = 0;
        side[order[1]] = 1;
    }
    for (int i = 1; i < n; ++i) {
        int u = order[i];
        // Attach to some earlier vertex on the other side if needed.
        std::vector<int> candidates;
        for (int j = 0; j < i; ++j)
            if (allowed(u, order[j])) candidates.push_back(order[j]);
        int v = candidates[std::uniform_int_distribution<size_t>(0, candidates.size() - 1)(rng)];
        d.add_arc(u, v);
        d.add_arc(v, u);
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int u = 1; u <= n; ++u)
        for (int v = u + 1; v <= n; ++v)
            if (allowed(u, v) && coin(rng) < extra_prob) {
                d.add_arc(u, v);
                d.add_arc(v, u);
            }
    return d;
}

// Figure fixtures used across suites.

// Loop on 1 plus a cycle 2,3,4 reachable both ways from 1.
inline cbn::Digraph fig_loop_and_cycle() {
    return make_digraph(4, {{1, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 2}, {4, 1}});
}

// Triangle 1,2,3 plus the two-cycle 1,4.
inline cbn::Digraph fig_triangle_and_twocycle() {
    return make_digraph(4, {{1, 2}, {2, 3}, {3, 1}, {1, 4}, {4, 1}});
}

// Five vertices, cycle lengths 3, 4 and 5.
inline cbn::Digraph fig_five_vertex() {
    return make_digraph(5, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {1, 5}, {5, 2}, {3, 5}, {5, 4}});
}

// Two disjoint directed cycles of the given lengths, optionally joined by
// one arc from the first cycle to the second.
inline cbn::Digraph cycles_pair(int a, int b, bool join) {
    cbn::Digraph d(a + b);
    for (int i = 1; i <= a; ++i) d.add_arc(i, i % a + 1);
    for (int i = 1; i <= b; ++i) d.add_arc(a + i, a + i % b + 1);
    if (join) d.add_arc(1, a + 1);
    return d;
}

}  // namespace testutil
