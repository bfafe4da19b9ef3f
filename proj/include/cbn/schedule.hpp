#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cbn/network.hpp"

namespace cbn {

// An ordered partition (B_1, ..., B_p) of {1..n}; block 1 updates first.
// block_of(v) is the 1-based index of the block containing v.
class UpdateSchedule {
public:
    UpdateSchedule(int n, std::vector<std::vector<int>> blocks)
        : n_(n), blocks_(std::move(blocks)) {
        if (n < 1) throw precondition_error("schedule order must be at least 1");
        block_of_.assign(n, 0);
        for (size_t b = 0; b < blocks_.size(); ++b) {
            if (blocks_[b].empty()) throw precondition_error("schedule block is empty");
            for (int v : blocks_[b]) {
                if (v < 1 || v > n)
                    throw precondition_error("schedule vertex " + std::to_string(v) +
                                             " out of range 1.." + std::to_string(n));
                if (block_of_[v - 1] != 0)
                    throw precondition_error("schedule repeats vertex " + std::to_string(v));
                block_of_[v - 1] = static_cast<int>(b) + 1;
            }
            std::sort(blocks_[b].begin(), blocks_[b].end());
        }
        for (int v = 1; v <= n; ++v)
            if (block_of_[v - 1] == 0)
                throw precondition_error("schedule misses vertex " + std::to_string(v));
    }

    static UpdateSchedule parallel(int n) {
        std::vector<int> all(n);
        for (int v = 1; v <= n; ++v) all[v - 1] = v;
        return UpdateSchedule(n, {all});
    }

    int order() const { return n_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    int block_of(int v) const {
        if (v < 1 || v > n_) throw precondition_error("vertex out of range");
        return block_of_[v - 1];
    }

    bool is_parallel() const { return blocks_.size() == 1; }
    bool is_sequential() const {
        return static_cast<int>(blocks_.size()) == n_;
    }

    // Text form "1 3; 2; 4": blocks separated by ';', members by spaces.
    static UpdateSchedule parse(std::string_view text, int n) {
        std::vector<std::vector<int>> blocks;
        std::string part;
        std::istringstream is{std::string(text)};
        bool saw_any = false;
        while (std::getline(is, part, ';')) {
            saw_any = true;
            std::istringstream ps(part);
            std::vector<int> block;
            std::string tok;
            while (ps >> tok) {
                try {
                    size_t used = 0;
                    int v = std::stoi(tok, &used);
                    if (used != tok.size()) throw format_error("");
                    block.push_back(v);
                } catch (const std::exception&) {
                    throw format_error("bad schedule token \"" + tok + "\"");
                }
            }
            if (block.empty()) throw format_error("empty schedule block");
            blocks.push_back(std::move(block));
        }
        if (!saw_any) throw format_error("empty schedule");
        try {
            return UpdateSchedule(n, std::move(blocks));
        } catch (const precondition_error& e) {
            throw format_error(e.what());
        }
    }

    std::string format() const {
        std::ostringstream os;
        for (size_t b = 0; b < blocks_.size(); ++b) {
            if (b) os << "; ";
            for (size_t i = 0; i < blocks_[b].size(); ++i) {
                if (i) os << " ";
                os << blocks_[b][i];
            }
        }
        return os.str();
    }

    friend bool operator==(const UpdateSchedule& a, const UpdateSchedule& b) {
        return a.n_ == b.n_ && a.blocks_ == b.blocks_;
    }

private:
    int n_ = 0;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
};

// A digraph with every arc labeled positive or negative.
class LabeledDigraph {
public:
    LabeledDigraph() = default;
    explicit LabeledDigraph(Digraph d)
        : d_(std::move(d)), plus_(d_.order(), Bits(d_.order())) {}

    const Digraph& digraph() const { return d_; }
    int order() const { return d_.order(); }

    void set_plus(int u, int v, bool plus) {
        require_arc(u, v);
        plus_[u - 1].set(v - 1, plus);
    }
    bool is_plus(int u, int v) const {
        require_arc(u, v);
        return plus_[u - 1].test(v - 1);
    }

    const Bits& plus_mask(int u) const { return plus_[u - 1]; }
    Bits minus_mask(int u) const { return d_.out_mask(u) & ~plus_[u - 1]; }

    // Same line format as Digraph plus a sign column: "u v +" / "u v -".
    static LabeledDigraph parse(std::string_view text) {
        std::istringstream is{std::string(text)};
        std::string line;
        std::optional<LabeledDigraph> l;
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
            if (!l) {
                long long n = 0;
                if (head != "n" || !(ls >> n))
                    throw format_error("line " + std::to_string(lineno) +
                                       ": expected \"n <order>\" header");
                reject_trailing();
                if (n < 1) throw format_error("digraph order must be at least 1");
                l.emplace(Digraph(static_cast<int>(n)));
                continue;
            }
            int u = 0, v = 0;
            std::string sign;
            try {
                size_t used = 0;
                u = std::stoi(head, &used);
                if (used != head.size()) throw format_error("");
            } catch (const std::exception&) {
                throw format_error("line " + std::to_string(lineno) +
                                   ": expected arc \"u v +|-\"");
            }
            if (!(ls >> v >> sign) || (sign != "+" && sign != "-"))
                throw format_error("line " + std::to_string(lineno) +
                                   ": expected arc \"u v +|-\"");
            reject_trailing();
            if (u < 1 || u > l->order() || v < 1 || v > l->order())
                throw format_error("line " + std::to_string(lineno) + ": vertex out of range");
            if (!l->d_.add_arc(u, v))
                throw format_error("line " + std::to_string(lineno) + ": duplicate arc");
            l->plus_[u - 1].set(v - 1, sign == "+");
        }
        if (!l) throw format_error("missing \"n <order>\" header");
        return *l;
    }

    std::string format() const {
        std::ostringstream os;
        os << "n " << order() << "\n";
        for (auto [u, v] : d_.arcs())
            os << u << " " << v << " " << (is_plus(u, v) ? "+" : "-") << "\n";
        return os.str();
    }

    friend bool operator==(const LabeledDigraph& a, const LabeledDigraph& b) {
        return a.d_ == b.d_ && a.plus_ == b.plus_;
    }

private:
    void require_arc(int u, int v) const {
        if (!d_.has_arc(u, v))
            throw precondition_error("no arc " + std::to_string(u) + " -> " + std::to_string(v));
    }

    Digraph d_;
    std::vector<Bits> plus_;
};

// Arc (u,v) is positive exactly when u is updated no earlier than v, i.e.
// v reads the old value of u. Loops are always positive.
inline LabeledDigraph label_from_schedule(const Digraph& d, const UpdateSchedule& s) {
    if (s.order() != d.order()) throw precondition_error("schedule order mismatch");
    LabeledDigraph l(d);
    for (auto [u, v] : d.arcs()) l.set_plus(u, v, s.block_of(u) >= s.block_of(v));
    return l;
}

// One full sweep of the schedule: update block 1, then block 2 on the
// result, and so on. Vertices outside the active block keep their value.
inline ConjunctiveNetwork apply_schedule(const ConjunctiveNetwork& f, const UpdateSchedule& s) {
    const Digraph& d = f.digraph();
    if (s.order() != d.order()) throw precondition_error("schedule order mismatch");
    const int n = d.order();
    std::optional<ConjunctiveNetwork> acc;
    for (const auto& block : s.blocks()) {
        Digraph step(n);
        Bits active(n);
        for (int v : block) active.set(v - 1);
        for (int v = 1; v <= n; ++v) {
            if (active.test(v - 1)) {
                for (int u : d.in_neighbors(v)) step.add_arc(u, v);
            } else {
                step.add_arc(v, v);
            }
        }
        ConjunctiveNetwork g(std::move(step));
        acc = acc ? compose(*acc, g) : g;
    }
    return *acc;
}

// Arcs made of one positive arc followed by any number of negative arcs:
// (u,v) present iff some positive arc (u,w) starts a negative path w ->* v
// (possibly empty). This is the interaction digraph of the scheduled map.
inline Digraph parallel_digraph(const LabeledDigraph& l) {
    const int n = l.order();
    // minus_reach[v] = vertices reachable from v along negative arcs, v included.
    std::vector<Bits> minus_reach(n);
    for (int v = 1; v <= n; ++v) {
        Bits seen(n);
        seen.set(v - 1);
        std::deque<int> queue{v};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            Bits next = l.minus_mask(u) & ~seen;
            for (auto w = next.find_first(); w != Bits::npos; w = next.find_next(w)) {
                seen.set(w);
                queue.push_back(static_cast<int>(w) + 1);
            }
        }
        minus_reach[v - 1] = std::move(seen);
    }
    Digraph p(n);
    for (int u = 1; u <= n; ++u) {
        Bits row(n);
        const Bits& plus = l.plus_mask(u);
        for (auto w = plus.find_first(); w != Bits::npos; w = plus.find_next(w))
            row |= minus_reach[w];
        for (auto v = row.find_first(); v != Bits::npos; v = row.find_next(v))
            p.add_arc(u, static_cast<int>(v) + 1);
    }
    return p;
}

// Constraint digraph of a labeling. An arc (u,v) here reads "u is updated
// no earlier than v", strict when negative:
//   negative (u,v) of l  ->  negative (v,u)   (v strictly before u)
//   positive (u,v) of l  ->  positive (u,v), unless a negative copy of the
//                            same arc is already present (strict wins).
inline LabeledDigraph reverse_digraph(const LabeledDigraph& l) {
    const int n = l.order();
    Digraph rd(n);
    std::vector<std::pair<int, int>> minus_arcs, plus_arcs;
    for (auto [u, v] : l.digraph().arcs())
        (l.is_plus(u, v) ? plus_arcs : minus_arcs).emplace_back(u, v);
    LabeledDigraph r = [&] {
        Digraph d(n);
        for (auto [u, v] : minus_arcs) d.add_arc(v, u);
        for (auto [u, v] : plus_arcs) d.add_arc(u, v);
        return LabeledDigraph(std::move(d));
    }();
    for (auto [u, v] : plus_arcs)
        if (!(std::find(minus_arcs.begin(), minus_arcs.end(), std::make_pair(v, u)) !=
              minus_arcs.end()))
            r.set_plus(u, v, true);
    return r;
}

// A labeling comes from some schedule iff its constraint digraph has no
// cycle through a strict (negative) constraint.
inline bool is_update_digraph(const LabeledDigraph& l) {
    LabeledDigraph r = reverse_digraph(l);
    auto scc = scc_decompose(r.digraph());
    for (auto [u, v] : r.digraph().arcs())
        if (!r.is_plus(u, v) && scc.id_of(u) == scc.id_of(v)) return false;
    return true;
}

// A labeling comes from a schedule with singleton blocks iff the constraint
// digraph is acyclic apart from positive loops.
inline bool is_sequential_update_digraph(const LabeledDigraph& l) {
    LabeledDigraph r = reverse_digraph(l);
    const int n = r.order();
    Digraph stripped(n);
    for (auto [u, v] : r.digraph().arcs()) {
        if (u == v) {
            if (!r.is_plus(u, v)) return false;
            continue;
        }
        stripped.add_arc(u, v);
    }
    auto scc = scc_decompose(stripped);
    return scc.count() == n;
}

// Recovers a schedule whose labeling is l. Blocks are the coarsest ones
// compatible with the constraints; when l admits a singleton-block schedule
// the result is refined to one.
inline UpdateSchedule schedule_from_labeling(const LabeledDigraph& l) {
    const int n = l.order();
    LabeledDigraph r = reverse_digraph(l);
    auto scc = scc_decompose(r.digraph());
    for (auto [u, v] : r.digraph().arcs())
        if (!r.is_plus(u, v) && scc.id_of(u) == scc.id_of(v))
            throw precondition_error("forbidden cycle through negative arc " +
                                     std::to_string(v) + " -> " + std::to_string(u));

    if (is_sequential_update_digraph(l)) {
        // Kahn's algorithm on the loop-stripped constraint digraph, smallest
        // vertex first; sources are updated last.
        Digraph stripped(n);
        for (auto [u, v] : r.digraph().arcs())
            if (u != v) stripped.add_arc(u, v);
        std::vector<int> indeg(n, 0);
        for (auto [u, v] : stripped.arcs()) ++indeg[v - 1];
        std::vector<int> ready;
        for (int v = 1; v <= n; ++v)
            if (indeg[v - 1] == 0) ready.push_back(v);
        std::vector<std::vector<int>> blocks(n);
        for (int i = 0; i < n; ++i) {
            auto it = std::min_element(ready.begin(), ready.end());
            int u = *it;
            ready.erase(it);
            blocks[n - 1 - i] = {u};
            for (int v : stripped.out_neighbors(u))
                if (--indeg[v - 1] == 0) ready.push_back(v);
        }
        return UpdateSchedule(n, std::move(blocks));
    }

    // Component level = 1 + the longest chain of strict constraints below it.
    std::vector<int> level(scc.count(), 1);
    for (int c = scc.count() - 1; c >= 0; --c)
        for (int u : scc.components[c])
            for (int v : r.digraph().out_neighbors(u)) {
                int cv = scc.id_of(v);
                if (cv == c) continue;
                int need = level[cv] + (r.is_plus(u, v) ? 0 : 1);
                level[c] = std::max(level[c], need);
            }
    int top = *std::max_element(level.begin(), level.end());
    std::vector<std::vector<int>> blocks(top);
    for (int c = 0; c < scc.count(); ++c)
        for (int v : scc.components[c]) blocks[level[c] - 1].push_back(v);
    return UpdateSchedule(n, std::move(blocks));
}

// True when around every cycle the number of positive arcs is a multiple of
// k. Checked with a potential per strongly connected component: h(v) must
// equal h(u) + 1 (mod k) across positive arcs and h(u) across negative ones.
// For k above the order, residues are replaced by exact integers.
inline bool is_k_labeling(const LabeledDigraph& l, const Int& k) {
    if (k < 1) throw precondition_error("labeling width must be at least 1");
    const int n = l.order();
    const long long mod = k > n ? 0 : static_cast<long long>(k);
    auto scc = scc_decompose(l.digraph());
    std::vector<long long> h(n, 0);
    std::vector<bool> done(n, false);
    for (int c = 0; c < scc.count(); ++c) {
        const auto& members = scc.components[c];
        int root = members.front();
        h[root - 1] = 0;
        done[root - 1] = true;
        std::deque<int> queue{root};
        auto visit = [&](int from, int to, long long value) {
            (void)from;
            if (done[to - 1]) return;
            h[to - 1] = value;
            done[to - 1] = true;
            queue.push_back(to);
        };
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int v : l.digraph().out_neighbors(u)) {
                if (scc.id_of(v) != c) continue;
                long long w = l.is_plus(u, v) ? 1 : 0;
                visit(u, v, mod ? (h[u - 1] + w) % mod : h[u - 1] + w);
            }
            for (int v : l.digraph().in_neighbors(u)) {
                if (scc.id_of(v) != c) continue;
                long long w = l.is_plus(v, u) ? 1 : 0;
                visit(u, v, mod ? ((h[u - 1] - w) % mod + mod) % mod : h[u - 1] - w);
            }
        }
        for (int u : members)
            for (int v : l.digraph().out_neighbors(u)) {
                if (scc.id_of(v) != c) continue;
                long long w = l.is_plus(u, v) ? 1 : 0;
                long long want = mod ? (h[u - 1] + w) % mod : h[u - 1] + w;
                if (h[v - 1] != want) return false;
            }
    }
    return true;
}

// Labeling induced by a potential h: V -> {0..k-1}: an arc may only keep the
// potential (negative) or raise it by one mod k (positive).
inline LabeledDigraph labeling_from_potential(const Digraph& d, const std::vector<int>& h,
                                              long long k) {
    if (k < 2) throw precondition_error("potential modulus must be at least 2");
    if (static_cast<int>(h.size()) != d.order())
        throw precondition_error("potential size mismatch");
    LabeledDigraph l(d);
    for (auto [u, v] : d.arcs()) {
        long long delta = ((h[v - 1] - h[u - 1]) % k + k) % k;
        if (delta == 1) l.set_plus(u, v, true);
        else if (delta != 0)
            throw precondition_error("potential steps by " + std::to_string(delta) +
                                     " across arc " + std::to_string(u) + " -> " +
                                     std::to_string(v));
    }
    return l;
}

// Moves the last block to the front; the labeling changes but the number of
// states on cycles of any given length does not.
inline UpdateSchedule rotate_schedule(const UpdateSchedule& s) {
    auto blocks = s.blocks();
    std::rotate(blocks.begin(), blocks.end() - 1, blocks.end());
    return UpdateSchedule(s.order(), std::move(blocks));
}

}  // namespace cbn
