#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "cbn/digraph.hpp"

namespace cbn {

// A point of {0,1}^n, component v at string position v-1 ("vertex 1 is the
// leftmost character").
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(int n, int fill = 0) : bits_(n, static_cast<uint8_t>(fill)) {}

    static Configuration parse(std::string_view s) {
        Configuration x(static_cast<int>(s.size()));
        if (s.empty()) throw format_error("empty configuration");
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '0') continue;
            if (s[i] == '1') x.bits_[i] = 1;
            else throw format_error("configuration characters must be 0 or 1");
        }
        return x;
    }

    int size() const { return static_cast<int>(bits_.size()); }
    int get(int v) const { return bits_[v - 1]; }
    void set(int v, int value) { bits_[v - 1] = static_cast<uint8_t>(value != 0); }

    std::string to_string() const {
        std::string s(bits_.size(), '0');
        for (size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) s[i] = '1';
        return s;
    }

    Bits packed() const {
        Bits b(bits_.size());
        for (size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) b.set(i);
        return b;
    }

    static Configuration from_packed(const Bits& b) {
        Configuration x(static_cast<int>(b.size()));
        for (auto i = b.find_first(); i != Bits::npos; i = b.find_next(i))
            x.bits_[i] = 1;
        return x;
    }

    friend bool operator==(const Configuration&, const Configuration&) = default;
    friend auto operator<=>(const Configuration&, const Configuration&) = default;

private:
    std::vector<uint8_t> bits_;
};

// The network f with f_v(x) = AND of x over the in-neighbors of v; a vertex
// with no in-arc is the constant 1. A conjunctive network is fully
// determined by its interaction digraph.
class ConjunctiveNetwork {
public:
    ConjunctiveNetwork() = default;
    explicit ConjunctiveNetwork(Digraph d) : d_(std::move(d)) {}

    static ConjunctiveNetwork identity(int n) {
        Digraph d(n);
        for (int v = 1; v <= n; ++v) d.add_arc(v, v);
        return ConjunctiveNetwork(std::move(d));
    }

    const Digraph& digraph() const { return d_; }
    int order() const { return d_.order(); }

private:
    Digraph d_;
};

inline Configuration evaluate(const ConjunctiveNetwork& f, const Configuration& x) {
    const Digraph& d = f.digraph();
    if (x.size() != d.order()) throw precondition_error("configuration size mismatch");
    Bits packed = x.packed();
    Configuration y(d.order());
    for (int v = 1; v <= d.order(); ++v)
        y.set(v, d.in_mask(v).is_subset_of(packed));
    return y;
}

// The conjunctive network of g after f: evaluate(compose(f,g), x) equals
// evaluate(g, evaluate(f, x)). On digraphs this is the relational product,
// (u,v) present iff some w has (u,w) in D^f and (w,v) in D^g.
inline ConjunctiveNetwork compose(const ConjunctiveNetwork& f, const ConjunctiveNetwork& g) {
    const Digraph& df = f.digraph();
    const Digraph& dg = g.digraph();
    if (df.order() != dg.order()) throw precondition_error("network order mismatch");
    const int n = df.order();
    Digraph d(n);
    for (int u = 1; u <= n; ++u) {
        Bits row(n);
        const Bits& step = df.out_mask(u);
        for (auto w = step.find_first(); w != Bits::npos; w = step.find_next(w))
            row |= dg.out_mask(static_cast<int>(w) + 1);
        for (auto v = row.find_first(); v != Bits::npos; v = row.find_next(v))
            d.add_arc(u, static_cast<int>(v) + 1);
    }
    return ConjunctiveNetwork(std::move(d));
}

// f^k by repeated squaring over the binary digits of k. k must be positive.
inline ConjunctiveNetwork power(const ConjunctiveNetwork& f, const Int& k) {
    if (k < 1) throw precondition_error("power exponent must be positive");
    ConjunctiveNetwork base = f;
    std::optional<ConjunctiveNetwork> acc;
    Int e = k;
    while (e > 0) {
        if ((e & 1) != 0) acc = acc ? compose(*acc, base) : base;
        e >>= 1;
        if (e > 0) base = compose(base, base);
    }
    return *acc;
}

// Periodic word observed on a vertex set. Each symbol is the restriction of
// a configuration to the observed vertices, packed little-end first in the
// order the vertices were given.
struct Trace {
    int width = 0;
    std::vector<uint64_t> word;

    int length() const { return static_cast<int>(word.size()); }

    // For single-vertex traces.
    std::string bit_string() const {
        std::string s;
        for (uint64_t w : word) s += (w & 1) ? '1' : '0';
        return s;
    }

    friend bool operator==(const Trace&, const Trace&) = default;
};

// Circular right shift by t (negative t shifts left).
inline Trace shift(const Trace& tr, long long t) {
    Trace out = tr;
    const long long m = tr.length();
    if (m == 0) return out;
    long long s = ((t % m) + m) % m;
    for (long long i = 0; i < m; ++i) out.word[(i + s) % m] = tr.word[i];
    return out;
}

namespace detail {

inline uint64_t restrict_config(const Configuration& x, const std::vector<int>& s) {
    uint64_t w = 0;
    for (size_t i = 0; i < s.size(); ++i)
        if (x.get(s[i])) w |= (uint64_t{1} << i);
    return w;
}

// Smallest period of each nontrivial strongly connected component along the
// orbit of x, or nothing if some component fails to recur within its size.
// On an attractor every component recurs within |H| steps.
inline std::optional<std::vector<std::pair<int, int>>> component_periods(
    const ConjunctiveNetwork& f, const Configuration& x, const SccDecomposition& scc) {
    std::vector<std::pair<int, int>> result;  // (component id, period)
    auto ids = scc.nontrivial_ids();
    if (ids.empty()) return result;
    int horizon = 0;
    for (int id : ids) horizon = std::max(horizon, static_cast<int>(scc.components[id].size()));
    std::vector<int> pending(ids.begin(), ids.end());
    std::vector<int> period(scc.count(), 0);
    Configuration y = x;
    for (int t = 1; t <= horizon && !pending.empty(); ++t) {
        y = evaluate(f, y);
        for (auto it = pending.begin(); it != pending.end();) {
            const auto& h = scc.components[*it];
            bool match = std::all_of(h.begin(), h.end(),
                                     [&](int v) { return y.get(v) == x.get(v); });
            if (match) {
                period[*it] = t;
                it = pending.erase(it);
            } else {
                ++it;
            }
        }
    }
    if (!pending.empty()) return std::nullopt;
    for (int id : ids) result.emplace_back(id, period[id]);
    return result;
}

}  // namespace detail

// Observes the orbit of x restricted to the vertex set s and returns the
// word of one minimal period. x must lie on an attractor: the local periods
// of all nontrivial components are measured, their lcm P is certified with
// f^P(x) = x, and the window of length P is then cut down to the smallest
// divisor d whose d-prefix generates it.
inline Trace periodic_trace(const ConjunctiveNetwork& f, const Configuration& x,
                            const std::vector<int>& s) {
    if (s.empty() || s.size() > 64) throw precondition_error("observed set must have 1..64 vertices");
    for (int v : s) f.digraph().check_vertex(v);
    auto scc = scc_decompose(f.digraph());
    auto periods = detail::component_periods(f, x, scc);
    if (!periods) throw precondition_error("configuration is not on an attractor");
    Int p = 1;
    for (auto [id, t] : *periods) p = big_lcm(p, t);
    if (p > (1 << 22)) throw capacity_error("attractor period too large to observe");
    const long long window = p.convert_to<long long>();
    if (evaluate(power(f, p), x) != x)
        throw precondition_error("configuration is not on an attractor");
    std::vector<uint64_t> word;
    word.reserve(window);
    Configuration y = x;
    for (long long t = 0; t < window; ++t) {
        word.push_back(detail::restrict_config(y, s));
        if (t + 1 < window) y = evaluate(f, y);
    }
    for (long long d = 1; d <= window; ++d) {
        if (window % d != 0) continue;
        bool ok = true;
        for (long long i = d; i < window && ok; ++i) ok = word[i] == word[i % d];
        if (ok) {
            word.resize(d);
            break;
        }
    }
    return Trace{static_cast<int>(s.size()), std::move(word)};
}

// Membership of x in the set of configurations lying on a limit cycle of
// length exactly k: f^k(x) = x and k is the lcm of the local periods of the
// nontrivial strongly connected components.
inline bool is_in_phi_k(const ConjunctiveNetwork& f, const Configuration& x, const Int& k) {
    if (k < 2) throw precondition_error("cycle length must be at least 2");
    if (x.size() != f.order()) throw precondition_error("configuration size mismatch");
    Configuration y = evaluate(power(f, k), x);
    if (!(y == x)) return false;
    auto scc = scc_decompose(f.digraph());
    auto periods = detail::component_periods(f, x, scc);
    if (!periods) return false;
    Int l = 1;
    for (auto [id, t] : *periods) l = big_lcm(l, t);
    return l == k;
}

}  // namespace cbn
