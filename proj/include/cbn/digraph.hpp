#pragma once

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "cbn/common.hpp"

namespace cbn {

using Bits = boost::dynamic_bitset<>;

// Simple digraph on vertices 1..n. Loops allowed, parallel arcs not
// representable. Rows are stored as bitsets so that relational products
// and closures are word-parallel.
class Digraph {
public:
    Digraph() = default;

    explicit Digraph(int n) : n_(n), out_(n, Bits(n)), in_(n, Bits(n)) {
        if (n < 1) throw precondition_error("digraph order must be at least 1");
    }

    int order() const { return n_; }
    int arc_count() const { return arcs_; }

    bool has_arc(int u, int v) const {
        check_vertex(u);
        check_vertex(v);
        return out_[u - 1].test(v - 1);
    }

    // Returns false when the arc was already present.
    bool add_arc(int u, int v) {
        check_vertex(u);
        check_vertex(v);
        if (out_[u - 1].test(v - 1)) return false;
        out_[u - 1].set(v - 1);
        in_[v - 1].set(u - 1);
        ++arcs_;
        return true;
    }

    // Bit v-1 of out_mask(u) is set iff (u,v) is an arc.
    const Bits& out_mask(int u) const {
        check_vertex(u);
        return out_[u - 1];
    }
    const Bits& in_mask(int v) const {
        check_vertex(v);
        return in_[v - 1];
    }

    std::vector<int> out_neighbors(int u) const { return unpack(out_mask(u)); }
    std::vector<int> in_neighbors(int v) const { return unpack(in_mask(v)); }

    // Arcs in lexicographic order.
    std::vector<std::pair<int, int>> arcs() const {
        std::vector<std::pair<int, int>> a;
        a.reserve(arcs_);
        for (int u = 1; u <= n_; ++u)
            for (int v : out_neighbors(u)) a.emplace_back(u, v);
        return a;
    }

    friend bool operator==(const Digraph& a, const Digraph& b) {
        return a.n_ == b.n_ && a.out_ == b.out_;
    }

    // Text format: '#' starts a comment, the first payload line is
    // "n <order>", every further payload line is an arc "u v" (1-based).
    // A repeated arc line is an error.
    static Digraph parse(std::string_view text);
    std::string format() const;

    void check_vertex(int v) const {
        if (v < 1 || v > n_)
            throw precondition_error("vertex " + std::to_string(v) + " out of range 1.." +
                                     std::to_string(n_));
    }

private:
    static std::vector<int> unpack(const Bits& row) {
        std::vector<int> vs;
        for (auto i = row.find_first(); i != Bits::npos; i = row.find_next(i))
            vs.push_back(static_cast<int>(i) + 1);
        return vs;
    }

    int n_ = 0;
    std::vector<Bits> out_, in_;
    int arcs_ = 0;
};

inline Digraph Digraph::parse(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    std::optional<Digraph> d;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        auto reject_trailing = [&] {
            std::string extra;
            if (ls >> extra)
                throw format_error("line " + std::to_string(lineno) + ": trailing tokens");
        };
        if (!d) {
            long n;
            if (head != "n" || !(ls >> n))
                throw format_error("line " + std::to_string(lineno) +
                                   ": expected header \"n <order>\"");
            reject_trailing();
            if (n < 1) throw format_error("digraph order must be at least 1");
            d.emplace(static_cast<int>(n));
            continue;
        }
        int u, v;
        try {
            u = std::stoi(head);
        } catch (const std::exception&) {
            throw format_error("line " + std::to_string(lineno) + ": expected arc \"u v\"");
        }
        if (!(ls >> v)) throw format_error("line " + std::to_string(lineno) + ": expected arc \"u v\"");
        reject_trailing();
        if (u < 1 || u > d->order() || v < 1 || v > d->order())
            throw format_error("line " + std::to_string(lineno) + ": vertex out of range");
        if (!d->add_arc(u, v))
            throw format_error("line " + std::to_string(lineno) + ": duplicate arc");
    }
    if (!d) throw format_error("missing \"n <order>\" header");
    return *d;
}

inline std::string Digraph::format() const {
    std::ostringstream os;
    os << "n " << n_ << "\n";
    for (auto [u, v] : arcs()) os << u << " " << v << "\n";
    return os.str();
}

// Strongly connected components plus the condensation's topological order:
// every arc between distinct components goes from an earlier component to a
// later one. A component is nontrivial when it carries at least one arc,
// i.e. it has two or more vertices or a loop vertex.
struct SccDecomposition {
    std::vector<int> component_of;              // index v-1 -> component id
    std::vector<std::vector<int>> components;   // id -> sorted members, topological order
    std::vector<bool> nontrivial;

    int count() const { return static_cast<int>(components.size()); }
    int id_of(int v) const { return component_of[v - 1]; }

    std::vector<int> nontrivial_ids() const {
        std::vector<int> ids;
        for (int i = 0; i < count(); ++i)
            if (nontrivial[i]) ids.push_back(i);
        return ids;
    }
};

inline SccDecomposition scc_decompose(const Digraph& d) {
    const int n = d.order();
    // Iterative Tarjan. Components come out in reverse topological order.
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<int> stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::vector<int>> comps;
    int next_index = 0;

    struct Frame {
        int v;
        size_t next;
        std::vector<int> succ;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, 0, {}});
        while (!call.empty()) {
            Frame& f = call.back();
            int v = f.v;
            if (f.next == 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = true;
                for (int w : d.out_neighbors(v + 1)) f.succ.push_back(w - 1);
            }
            bool descended = false;
            while (f.next < f.succ.size()) {
                int w = f.succ[f.next++];
                if (index[w] == -1) {
                    call.push_back({w, 0, {}});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                std::vector<int> members;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = static_cast<int>(comps.size());
                    members.push_back(w + 1);
                } while (w != v);
                std::sort(members.begin(), members.end());
                comps.push_back(std::move(members));
            }
            call.pop_back();
            if (!call.empty()) {
                int p = call.back().v;
                low[p] = std::min(low[p], low[v]);
            }
        }
    }

    SccDecomposition s;
    const int m = static_cast<int>(comps.size());
    s.components.resize(m);
    s.component_of.resize(n);
    s.nontrivial.assign(m, false);
    // Reverse to topological order and remap ids.
    for (int i = 0; i < m; ++i) s.components[m - 1 - i] = std::move(comps[i]);
    for (int i = 0; i < m; ++i)
        for (int v : s.components[i]) s.component_of[v - 1] = i;
    for (int i = 0; i < m; ++i) {
        const auto& c = s.components[i];
        s.nontrivial[i] = c.size() > 1 || d.has_arc(c[0], c[0]);
    }
    return s;
}

inline bool is_strongly_connected(const Digraph& d) {
    return scc_decompose(d).count() == 1;
}

namespace detail {

// Verifies H is exactly the nontrivial strongly connected component of its
// vertices and returns the decomposition id.
inline int require_nontrivial_scc(const Digraph& d, const std::vector<int>& h) {
    if (h.empty()) throw precondition_error("component set is empty");
    for (int v : h) d.check_vertex(v);
    auto scc = scc_decompose(d);
    int id = scc.id_of(h[0]);
    std::vector<int> sorted = h;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != scc.components[id])
        throw precondition_error("vertex set is not a strongly connected component");
    if (!scc.nontrivial[id])
        throw precondition_error("component is trivial (no arc)");
    return id;
}

}  // namespace detail

// gcd of the lengths of all cycles lying inside the nontrivial strongly
// connected component H. Computed from one spanning search: for arcs (u,v)
// inside H, every value depth(u)+1-depth(v) is a multiple of the gcd, and
// their own gcd equals it.
inline int index_of_cyclicity_component(const Digraph& d, const std::vector<int>& h) {
    detail::require_nontrivial_scc(d, h);
    Bits in_h(d.order());
    for (int v : h) in_h.set(v - 1);
    std::vector<int> depth(d.order(), -1);
    std::deque<int> queue;
    int root = *std::min_element(h.begin(), h.end());
    depth[root - 1] = 0;
    queue.push_back(root);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : d.out_neighbors(u)) {
            if (!in_h.test(v - 1) || depth[v - 1] != -1) continue;
            depth[v - 1] = depth[u - 1] + 1;
            queue.push_back(v);
        }
    }
    long long g = 0;
    for (int u : h)
        for (int v : d.out_neighbors(u)) {
            if (!in_h.test(v - 1)) continue;
            long long delta = depth[u - 1] + 1 - depth[v - 1];
            g = std::gcd(g, delta);
        }
    return static_cast<int>(g);
}

// lcm of the component indices over all nontrivial strongly connected
// components; 1 when the digraph is acyclic.
inline Int index_of_cyclicity(const Digraph& d) {
    auto scc = scc_decompose(d);
    Int c = 1;
    for (int id : scc.nontrivial_ids())
        c = big_lcm(c, index_of_cyclicity_component(d, scc.components[id]));
    return c;
}

// Length of a shortest cycle; empty when the digraph is acyclic.
inline std::optional<int> girth(const Digraph& d) {
    const int n = d.order();
    std::optional<int> best;
    std::vector<int> dist(n);
    for (int s = 1; s <= n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<int> queue;
        dist[s - 1] = 0;
        queue.push_back(s);
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            if (best && dist[u - 1] + 1 >= *best) continue;
            for (int v : d.out_neighbors(u)) {
                if (v == s) {
                    int len = dist[u - 1] + 1;
                    if (!best || len < *best) best = len;
                    continue;
                }
                if (dist[v - 1] == -1) {
                    dist[v - 1] = dist[u - 1] + 1;
                    queue.push_back(v);
                }
            }
        }
        if (best && *best == 1) break;
    }
    return best;
}

// Partition of a nontrivial strongly connected component into classes
// V_0..V_{k-1} such that every arc inside the component steps from V_i to
// V_{(i+1) mod k}. Exists exactly when k divides the component index.
struct CyclicPartition {
    int k = 0;
    std::vector<std::vector<int>> parts;  // sorted members

    int part_of(int v) const {
        for (int i = 0; i < k; ++i)
            if (std::binary_search(parts[i].begin(), parts[i].end(), v)) return i;
        return -1;
    }
};

inline CyclicPartition cyclic_partition(const Digraph& d, const std::vector<int>& h, int k) {
    if (k < 1) throw precondition_error("partition width must be at least 1");
    detail::require_nontrivial_scc(d, h);
    int c = index_of_cyclicity_component(d, h);
    if (c % k != 0)
        throw precondition_error("component is not cyclically " + std::to_string(k) +
                                 "-partite (index " + std::to_string(c) + ")");
    Bits in_h(d.order());
    for (int v : h) in_h.set(v - 1);
    std::vector<int> depth(d.order(), -1);
    std::deque<int> queue;
    int root = *std::min_element(h.begin(), h.end());
    depth[root - 1] = 0;
    queue.push_back(root);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : d.out_neighbors(u)) {
            if (!in_h.test(v - 1) || depth[v - 1] != -1) continue;
            depth[v - 1] = depth[u - 1] + 1;
            queue.push_back(v);
        }
    }
    CyclicPartition p;
    p.k = k;
    p.parts.assign(k, {});
    for (int v : h) p.parts[depth[v - 1] % k].push_back(v);
    for (auto& part : p.parts) std::sort(part.begin(), part.end());
    for (int u : h)
        for (int v : d.out_neighbors(u))
            if (in_h.test(v - 1) && (depth[u - 1] + 1 - depth[v - 1]) % k != 0)
                throw precondition_error("component is not cyclically " + std::to_string(k) +
                                         "-partite");
    return p;
}

inline bool is_symmetric(const Digraph& d) {
    for (int u = 1; u <= d.order(); ++u)
        for (int v : d.out_neighbors(u))
            if (!d.has_arc(v, u)) return false;
    return true;
}

// For symmetric digraphs only. A loop makes the digraph non-bipartite.
inline bool is_bipartite_symmetric(const Digraph& d) {
    if (!is_symmetric(d)) throw precondition_error("digraph is not symmetric");
    const int n = d.order();
    std::vector<int> color(n, -1);
    for (int s = 1; s <= n; ++s) {
        if (color[s - 1] != -1) continue;
        color[s - 1] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int v : d.out_neighbors(u)) {
                if (v == u) return false;
                if (color[v - 1] == -1) {
                    color[v - 1] = color[u - 1] ^ 1;
                    queue.push_back(v);
                } else if (color[v - 1] == color[u - 1]) {
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace cbn
