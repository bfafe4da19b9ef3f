#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/miller_rabin.hpp>

#include "cbn/oracle.hpp"
#include "cbn/schedule.hpp"

namespace cbn {

// Outcome of a decision procedure. A yes always carries a witness that was
// re-verified before returning; a no never carries one; unknown only comes
// from the general composite-width path with the oracle unavailable.
struct Decision {
    enum class Answer { yes, no, unknown };

    Answer answer = Answer::unknown;
    std::string method;
    std::optional<UpdateSchedule> schedule;
    std::optional<Configuration> witness;

    bool is_yes() const { return answer == Answer::yes; }
    bool is_no() const { return answer == Answer::no; }
    bool is_unknown() const { return answer == Answer::unknown; }

    std::string to_string() const {
        std::ostringstream os;
        os << "answer: "
           << (answer == Answer::yes ? "yes" : answer == Answer::no ? "no" : "unknown") << "\n";
        os << "method: " << method << "\n";
        if (schedule) os << "schedule: " << schedule->format() << "\n";
        if (witness) os << "witness: " << witness->to_string() << "\n";
        return os.str();
    }
};

namespace detail {

inline Decision yes_decision(std::string method, Configuration witness,
                             std::optional<UpdateSchedule> schedule = std::nullopt) {
    Decision d;
    d.answer = Decision::Answer::yes;
    d.method = std::move(method);
    d.witness = std::move(witness);
    d.schedule = std::move(schedule);
    return d;
}

inline Decision no_decision(std::string method) {
    Decision d;
    d.answer = Decision::Answer::no;
    d.method = std::move(method);
    return d;
}

inline Decision unknown_decision(std::string method) {
    Decision d;
    d.answer = Decision::Answer::unknown;
    d.method = std::move(method);
    return d;
}

inline Int iroot(const Int& k, int e) {
    if (e == 1) return k;
    Int lo = 1, hi = Int(1) << (msb(k) / e + 1);
    while (lo < hi) {
        Int mid = (lo + hi + 1) / 2;
        if (pow(mid, e) <= k) lo = mid;
        else hi = mid - 1;
    }
    return lo;
}

// The unique base-and-exponent form with maximal exponent; empty when k is
// not a power of a prime.
inline std::optional<std::pair<Int, int>> prime_power_form(const Int& k) {
    if (k < 2) return std::nullopt;
    for (int e = static_cast<int>(msb(k)) + 1; e >= 1; --e) {
        Int r = iroot(k, e);
        if (pow(r, e) == k) {
            if (!boost::multiprecision::miller_rabin_test(r, 32)) return std::nullopt;
            return std::make_pair(r, e);
        }
    }
    return std::nullopt;
}

inline std::vector<int> divisors_of(int m) {
    std::vector<int> ds;
    for (int d = 1; d * d <= m; ++d)
        if (m % d == 0) {
            ds.push_back(d);
            if (d != m / d) ds.push_back(m / d);
        }
    std::sort(ds.begin(), ds.end());
    return ds;
}

// reach[i] has bit j set when component i reaches component j (reflexive).
inline std::vector<Bits> component_reachability(const Digraph& d, const SccDecomposition& scc) {
    const int m = scc.count();
    std::vector<Bits> reach(m, Bits(m));
    for (int i = m - 1; i >= 0; --i) {
        reach[i].set(i);
        for (int u : scc.components[i])
            for (int v : d.out_neighbors(u)) {
                int j = scc.id_of(v);
                if (j != i) reach[i] |= reach[j];
            }
    }
    return reach;
}

// Vertices with a path to the target set, target excluded.
inline Bits strict_ancestors(const Digraph& d, const Bits& target) {
    Bits seen = target;
    std::deque<int> queue;
    for (auto i = target.find_first(); i != Bits::npos; i = target.find_next(i))
        queue.push_back(static_cast<int>(i) + 1);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        Bits next = d.in_mask(v) & ~seen;
        for (auto i = next.find_first(); i != Bits::npos; i = next.find_next(i)) {
            seen.set(i);
            queue.push_back(static_cast<int>(i) + 1);
        }
    }
    return seen & ~target;
}

// Starting point that rotates each chosen component with its own width:
// ones on class 0 of every chosen component, ones on everything that feeds
// a chosen component, zeros elsewhere. Only the transient of vertices
// outside the chosen components needs washing afterwards.
inline Configuration rotating_start(const Digraph& d,
                                    const std::vector<std::pair<std::vector<int>, int>>& chosen) {
    const int n = d.order();
    Bits members(n);
    Configuration x(n);
    for (const auto& [h, t] : chosen) {
        CyclicPartition cp = cyclic_partition(d, h, t);
        for (int v : h) members.set(v - 1);
        for (int v : cp.parts[0]) x.set(v, 1);
    }
    Bits feeders = strict_ancestors(d, members);
    for (auto i = feeders.find_first(); i != Bits::npos; i = feeders.find_next(i))
        x.set(static_cast<int>(i) + 1, 1);
    return x;
}

inline Configuration wash(const ConjunctiveNetwork& f, Configuration x) {
    long long steps = static_cast<long long>(f.order()) * f.order();
    for (long long i = 0; i < steps; ++i) x = evaluate(f, x);
    return x;
}

}  // namespace detail

// Backtracking search for a potential h: V -> Z_k whose induced labeling is
// an update digraph (sequential update digraph when sequential is set).
// Every vertex keeps a bitmask domain of residues still compatible with its
// assigned neighbors; assignments narrow neighboring domains, vertices left
// with a single residue are placed immediately, and the next decision goes
// to the vertex with the fewest residues left. Partial labelings already
// containing a forbidden constraint cycle are cut off. The staying value
// (negative label) is tried before the raising one.
inline std::optional<std::vector<int>> find_update_k_labeling(const Digraph& d, long long k,
                                                              bool sequential,
                                                              long long budget = 4000000) {
    const int n = d.order();
    if (k < 2) throw precondition_error("labeling width must be at least 2");
    if (k > n) return std::nullopt;

    const int words = static_cast<int>((k + 63) / 64);
    std::vector<std::uint64_t> full(words, ~std::uint64_t{0});
    if (k % 64 != 0) full[words - 1] = (std::uint64_t{1} << (k % 64)) - 1;

    std::vector<std::vector<std::uint64_t>> domain(n, full);
    std::vector<int> h(n, -1);
    Bits assigned(n);

    auto residue_count = [](const std::vector<std::uint64_t>& m) {
        int c = 0;
        for (std::uint64_t w : m) c += std::popcount(w);
        return c;
    };
    auto first_residue = [](const std::vector<std::uint64_t>& m) {
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) return static_cast<long long>(i) * 64 + std::countr_zero(m[i]);
        return -1LL;
    };
    auto has_residue = [](const std::vector<std::uint64_t>& m, long long b) {
        return ((m[b >> 6] >> (b & 63)) & 1) != 0;
    };
    auto residue_single = [&](long long a) {
        std::vector<std::uint64_t> m(words, 0);
        long long x = ((a % k) + k) % k;
        m[x >> 6] |= std::uint64_t{1} << (x & 63);
        return m;
    };
    // Cyclic domain shifts: rot_up maps residue r to r+1 mod k, rot_down the
    // inverse.
    auto rot_up = [&](std::vector<std::uint64_t> m) {
        bool top = ((m[(k - 1) >> 6] >> ((k - 1) & 63)) & 1) != 0;
        std::uint64_t carry = 0;
        for (int i = 0; i < words; ++i) {
            std::uint64_t next = m[i] >> 63;
            m[i] = ((m[i] << 1) | carry) & full[i];
            carry = next;
        }
        if (top) m[0] |= 1;
        return m;
    };
    auto rot_down = [&](std::vector<std::uint64_t> m) {
        bool low = (m[0] & 1) != 0;
        for (int i = 0; i < words; ++i) {
            std::uint64_t next = (i + 1 < words) ? m[i + 1] : 0;
            m[i] = (m[i] >> 1) | (next << 63);
        }
        if (low) m[(k - 1) >> 6] |= std::uint64_t{1} << ((k - 1) & 63);
        return m;
    };

    std::vector<std::pair<int, std::vector<std::uint64_t>>> saved;
    std::vector<int> placed;

    auto place = [&](int v, long long value) {
        h[v - 1] = static_cast<int>(value);
        assigned.set(v - 1);
        placed.push_back(v);
    };
    auto undo_to = [&](std::size_t smark, std::size_t pmark) {
        while (saved.size() > smark) {
            domain[saved.back().first] = std::move(saved.back().second);
            saved.pop_back();
        }
        while (placed.size() > pmark) {
            int v = placed.back();
            placed.pop_back();
            h[v - 1] = -1;
            assigned.reset(v - 1);
        }
    };

    // Arc (u,w) forces domain(w) inside domain(u) shifted up by {0,1} and
    // domain(u) inside domain(w) shifted down by {0,1}; narrowing runs to a
    // fixpoint across the whole graph, so chains of unassigned vertices
    // squeeze between the values pinned at their two ends. A domain cut to
    // one residue places the vertex, an emptied domain kills the branch.
    auto propagate = [&](int start) -> bool {
        std::deque<int> queue{start};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            Bits nbrs = d.out_mask(u) | d.in_mask(u);
            for (auto i = nbrs.find_first(); i != Bits::npos; i = nbrs.find_next(i)) {
                int w = static_cast<int>(i) + 1;
                if (w == u) continue;
                std::vector<std::uint64_t> m = domain[w - 1];
                if (d.has_arc(u, w)) {
                    auto a = rot_up(domain[u - 1]);
                    for (int t = 0; t < words; ++t) m[t] &= domain[u - 1][t] | a[t];
                }
                if (d.has_arc(w, u)) {
                    auto a = rot_down(domain[u - 1]);
                    for (int t = 0; t < words; ++t) m[t] &= domain[u - 1][t] | a[t];
                }
                if (m == domain[w - 1]) continue;
                saved.emplace_back(w - 1, std::move(domain[w - 1]));
                domain[w - 1] = std::move(m);
                int c = residue_count(domain[w - 1]);
                if (c == 0) return false;
                if (c == 1 && h[w - 1] == -1) place(w, first_residue(domain[w - 1]));
                queue.push_back(w);
            }
        }
        return true;
    };

    // Constraint digraph of the arcs whose endpoints are both assigned:
    // negative (u,v) becomes v->u strict, positive stays u->v. A partial
    // labeling is viable while no strict arc closes a cycle (no cycle at
    // all apart from positive loops, in sequential mode).
    auto viable = [&]() {
        Digraph r(n);
        std::vector<std::pair<int, int>> strict;
        for (auto i = assigned.find_first(); i != Bits::npos; i = assigned.find_next(i)) {
            int u = static_cast<int>(i) + 1;
            for (int v : d.out_neighbors(u)) {
                if (h[v - 1] == -1) continue;
                long long delta = ((h[v - 1] - h[u - 1]) % k + k) % k;
                if (delta == 1) {
                    r.add_arc(u, v);
                } else {
                    if (u == v) return false;
                    r.add_arc(v, u);
                    strict.emplace_back(v, u);
                }
            }
        }
        auto scc = scc_decompose(r);
        if (sequential) {
            for (const auto& component : scc.components)
                if (component.size() > 1) return false;
            return true;
        }
        for (auto [u, v] : strict)
            if (scc.id_of(u) == scc.id_of(v)) return false;
        return true;
    };

    auto pick = [&]() -> int {
        int best = 0;
        int best_dom = 0;
        long long best_adj = -1;
        for (int v = 1; v <= n; ++v) {
            if (h[v - 1] != -1) continue;
            int dom = residue_count(domain[v - 1]);
            long long adj =
                static_cast<long long>(((d.out_mask(v) | d.in_mask(v)) & assigned).count());
            if (best == 0 || dom < best_dom || (dom == best_dom && adj > best_adj)) {
                best = v;
                best_dom = dom;
                best_adj = adj;
            }
        }
        return best;
    };

    long long nodes = 0;
    auto search = [&](auto&& self) -> bool {
        int v = pick();
        if (v == 0) return true;
        bool anchored = ((d.out_mask(v) | d.in_mask(v)) & assigned).any();
        long long ref = 0;
        if (anchored) {
            Bits ins = d.in_mask(v) & assigned;
            auto i = ins.find_first();
            if (i == Bits::npos) i = (d.out_mask(v) & assigned).find_first();
            ref = h[static_cast<int>(i)];
        }
        for (long long t = 0; t < k; ++t) {
            // The offset of a fresh weak component is a pure gauge choice.
            if (!anchored && t > 0) break;
            long long value = (ref + t) % k;
            if (!has_residue(domain[v - 1], value)) continue;
            if (++nodes > budget)
                throw capacity_error("labeling search exceeded its budget of " +
                                     std::to_string(budget) + " nodes");
            std::size_t smark = saved.size();
            std::size_t pmark = placed.size();
            saved.emplace_back(v - 1, domain[v - 1]);
            domain[v - 1] = residue_single(value);
            place(v, value);
            if (propagate(v) && viable() && self(self)) return true;
            undo_to(smark, pmark);
        }
        return false;
    };
    if (!search(search)) return std::nullopt;
    return h;
}

// Drops the top class of a width-k potential onto class k-2. Former top
// vertices now sit with their old predecessors, turning every class
// (k-2) -> (k-1) arc negative; the result is a width-(k-1) labeling
// realizable by a fully sequential schedule.
inline std::vector<int> weaken_partition(const Digraph& d, const std::vector<int>& h,
                                         long long k) {
    if (k < 3) throw precondition_error("weakening needs width at least 3");
    if (!is_strongly_connected(d))
        throw precondition_error("weakening is defined on strongly connected digraphs");
    for (int value : h)
        if (value < 0 || value >= k)
            throw precondition_error("potential value out of range");
    LabeledDigraph l = labeling_from_potential(d, h, k);
    if (!is_update_digraph(l))
        throw precondition_error("potential does not induce an update digraph");
    std::vector<int> weak = h;
    for (int& value : weak) value = std::min<int>(value, static_cast<int>(k - 2));
    return weak;
}

// ---------------------------------------------------------------------------
// Parallel-schedule deciders.

// Strongly connected case: attractor lengths are exactly the divisors of the
// index of cyclicity, so the test is plain divisibility. The witness rotates
// the cyclic k-partition.
inline Decision decide_plce_strongly_connected(const ConjunctiveNetwork& f, const Int& k) {
    const Digraph& d = f.digraph();
    if (k < 2) throw precondition_error("cycle length must be at least 2");
    if (!is_strongly_connected(d) || d.arc_count() < 1)
        throw precondition_error("digraph must be strongly connected with at least one arc");
    Int c = index_of_cyclicity(d);
    if (!divides(k, c)) return detail::no_decision("divisibility");
    std::vector<int> all(d.order());
    for (int v = 1; v <= d.order(); ++v) all[v - 1] = v;
    Configuration x =
        detail::rotating_start(d, {{all, static_cast<int>(k)}});
    if (!is_in_phi_k(f, x, k))
        throw std::runtime_error("internal: rotating witness failed verification");
    return detail::yes_decision("divisibility", std::move(x));
}

// Prime-power widths: a limit cycle of length p^e exists iff one component
// alone can carry the whole width, because the p-adic maximum of the local
// periods must be attained by a single component.
inline Decision decide_kplce_prime_power(const ConjunctiveNetwork& f, const Int& k) {
    auto form = detail::prime_power_form(k);
    if (!form) throw precondition_error("width is not a prime power");
    const Digraph& d = f.digraph();
    auto scc = scc_decompose(d);
    for (int id : scc.nontrivial_ids()) {
        int c = index_of_cyclicity_component(d, scc.components[id]);
        if (!divides(k, c)) continue;
        Configuration x = detail::rotating_start(
            d, {{scc.components[id], static_cast<int>(k)}});
        x = detail::wash(f, x);
        if (!is_in_phi_k(f, x, k))
            throw std::runtime_error("internal: rotating witness failed verification");
        return detail::yes_decision("component-divisibility", std::move(x));
    }
    return detail::no_decision("component-divisibility");
}

namespace detail {

struct ComponentData {
    std::vector<int> ids;                 // nontrivial component ids
    std::vector<int> cyclicity;           // c(H_i)
    std::vector<Bits> reach;              // over all components
    SccDecomposition scc;
};

inline ComponentData analyze_components(const Digraph& d) {
    ComponentData cd;
    cd.scc = scc_decompose(d);
    cd.ids = cd.scc.nontrivial_ids();
    for (int id : cd.ids)
        cd.cyclicity.push_back(index_of_cyclicity_component(d, cd.scc.components[id]));
    cd.reach = component_reachability(d, cd.scc);
    return cd;
}

inline bool path_connected(const ComponentData& cd, int i, int j) {
    return cd.reach[cd.ids[i]].test(cd.ids[j]) || cd.reach[cd.ids[j]].test(cd.ids[i]);
}

// Is there a choice of local periods t_i | gcd(c_i, k) with lcm k that also
// satisfies the pairwise co-primality obstruction along connected pairs?
// Every attractor of length k induces such a tuple, so absence proves no.
inline bool period_tuple_exists(const ComponentData& cd, const Int& k, long long budget) {
    const int r = static_cast<int>(cd.ids.size());
    std::vector<std::vector<int>> options(r);
    for (int i = 0; i < r; ++i) {
        int g = static_cast<int>(gcd(Int(cd.cyclicity[i]), k));
        options[i] = divisors_of(g);
        std::reverse(options[i].begin(), options[i].end());
    }
    std::vector<int> by_fewest(r);
    for (int i = 0; i < r; ++i) by_fewest[i] = i;
    std::sort(by_fewest.begin(), by_fewest.end(), [&](int a, int b) {
        return options[a].size() < options[b].size();
    });
    std::vector<Int> suffix_cap(r + 1, Int(1));
    for (int i = r - 1; i >= 0; --i)
        suffix_cap[i] = big_lcm(suffix_cap[i + 1], Int(options[by_fewest[i]].front()));

    std::vector<int> t(r, 0);
    long long nodes = 0;
    auto dfs = [&](auto&& self, int pos, Int lcm_so_far) -> bool {
        if (++nodes > budget) throw capacity_error("period tuple screen exceeded its budget");
        if (!divides(k, big_lcm(lcm_so_far, suffix_cap[pos]))) return false;
        if (pos == r) return lcm_so_far == k;
        int i = by_fewest[pos];
        for (int cand : options[i]) {
            bool ok = true;
            for (int q = 0; q < pos && ok; ++q) {
                int j = by_fewest[q];
                if (t[j] > 1 && cand > 1 && std::gcd(t[j], cand) == 1 &&
                    path_connected(cd, i, j))
                    ok = false;
            }
            if (!ok) continue;
            t[i] = cand;
            if (self(self, pos + 1, big_lcm(lcm_so_far, Int(cand)))) return true;
            t[i] = 0;
        }
        return false;
    };
    return dfs(dfs, 0, Int(1));
}

// Searches for pairwise-unreachable components covering every prime power of
// k. Such a family rotates independently, so it certifies a yes.
inline std::optional<std::vector<int>> antichain_cover(const ComponentData& cd, const Int& k,
                                                       long long budget) {
    const int r = static_cast<int>(cd.ids.size());
    // k divides lcm(c_i), so every prime factor of k is at most max c_i.
    std::vector<long long> prime_powers;
    Int rest = k;
    for (int p = 2; rest > 1 && p <= *std::max_element(cd.cyclicity.begin(),
                                                       cd.cyclicity.end());
         ++p) {
        if (rest % p != 0) continue;
        long long q = 1;
        while (rest % p == 0) {
            rest /= p;
            q *= p;
        }
        prime_powers.push_back(q);
    }
    if (rest != 1) return std::nullopt;

    std::vector<std::vector<int>> candidates;
    for (long long q : prime_powers) {
        std::vector<int> c;
        for (int i = 0; i < r; ++i)
            if (cd.cyclicity[i] % q == 0) c.push_back(i);
        if (c.empty()) return std::nullopt;
        candidates.push_back(std::move(c));
    }
    std::vector<int> order(candidates.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return candidates[a].size() < candidates[b].size();
    });

    std::vector<int> picked;
    long long nodes = 0;
    auto compatible = [&](int i) {
        for (int j : picked)
            if (path_connected(cd, i, j)) return false;
        return true;
    };
    auto dfs = [&](auto&& self, size_t pos) -> bool {
        if (++nodes > budget) throw capacity_error("antichain search exceeded its budget");
        if (pos == order.size()) return true;
        long long q = prime_powers[order[pos]];
        for (int j : picked)
            if (cd.cyclicity[j] % q == 0) return self(self, pos + 1);
        for (int i : candidates[order[pos]]) {
            if (std::find(picked.begin(), picked.end(), i) != picked.end() || !compatible(i))
                continue;
            picked.push_back(i);
            if (self(self, pos + 1)) return true;
            picked.pop_back();
        }
        return false;
    };
    if (!dfs(dfs, 0)) return std::nullopt;
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace detail

// General parallel decider. Stage (a): a necessary screen over local-period
// tuples; failure proves no. Stage (b): a pairwise-unreachable family of
// components covering k certifies yes with a rotating witness. Stage (c):
// exhaustive enumeration when permitted, otherwise unknown.
inline Decision decide_plce_general(const ConjunctiveNetwork& f, const Int& k,
                                    bool allow_oracle = true, int oracle_limit = 20) {
    if (k < 2) throw precondition_error("cycle length must be at least 2");
    const Digraph& d = f.digraph();
    detail::ComponentData cd = detail::analyze_components(d);

    Int attainable = 1;
    for (int c : cd.cyclicity) attainable = big_lcm(attainable, Int(c));
    if (!divides(k, attainable)) return detail::no_decision("screen");

    try {
        if (!detail::period_tuple_exists(cd, k, 500000))
            return detail::no_decision("screen");
    } catch (const capacity_error&) {
    }

    try {
        auto family = detail::antichain_cover(cd, k, 500000);
        if (family) {
            std::vector<std::pair<std::vector<int>, int>> chosen;
            for (int i : *family) {
                int t = static_cast<int>(gcd(Int(cd.cyclicity[i]), k));
                chosen.emplace_back(cd.scc.components[cd.ids[i]], t);
            }
            Configuration x = detail::wash(f, detail::rotating_start(d, chosen));
            if (is_in_phi_k(f, x, k))
                return detail::yes_decision("antichain", std::move(x));
        }
    } catch (const capacity_error&) {
    }

    if (allow_oracle && d.order() <= oracle_limit) {
        auto states = phi_k(f, k, oracle_limit);
        if (states.empty()) return detail::no_decision("oracle");
        return detail::yes_decision("oracle", states.front());
    }
    return detail::unknown_decision("inconclusive");
}

// Symmetric strongly connected interaction digraphs: any schedule other than
// the parallel one admits only fixed points, and the parallel one has limit
// cycles exactly of length 2, exactly when the digraph is bipartite.
inline Decision decide_symmetric(const ConjunctiveNetwork& f, const UpdateSchedule& s,
                                 const Int& k) {
    const Digraph& d = f.digraph();
    if (k < 2) throw precondition_error("cycle length must be at least 2");
    if (!is_symmetric(d)) throw precondition_error("digraph is not symmetric");
    if (!is_strongly_connected(d) || d.arc_count() < 1)
        throw precondition_error("digraph must be strongly connected with at least one arc");
    LabeledDigraph l = label_from_schedule(d, s);
    bool parallel_labeling = true;
    for (auto [u, v] : d.arcs()) parallel_labeling = parallel_labeling && l.is_plus(u, v);
    if (!parallel_labeling) return detail::no_decision("symmetric-nonparallel");
    if (k != 2 || !is_bipartite_symmetric(d)) return detail::no_decision("symmetric-parallel");
    std::vector<int> all(d.order());
    for (int v = 1; v <= d.order(); ++v) all[v - 1] = v;
    Configuration x = detail::rotating_start(d, {{all, 2}});
    if (!is_in_phi_k(f, x, 2))
        throw std::runtime_error("internal: rotating witness failed verification");
    return detail::yes_decision("symmetric-parallel", std::move(x));
}

namespace detail {

// Witness assembly shared by the schedule deciders' labeling path: rotate
// the unique nontrivial component of the scheduled interaction digraph.
inline Decision labeling_yes(const ConjunctiveNetwork& f, const std::vector<int>& h,
                             long long k, const std::string& method) {
    LabeledDigraph l = labeling_from_potential(f.digraph(), h, k);
    UpdateSchedule s = schedule_from_labeling(l);
    ConjunctiveNetwork fs = apply_schedule(f, s);
    Digraph p = parallel_digraph(l);
    auto scc = scc_decompose(p);
    auto nontrivial = scc.nontrivial_ids();
    if (nontrivial.size() != 1)
        throw std::runtime_error("internal: scheduled digraph lost its unique component");
    Configuration x = rotating_start(
        p, {{scc.components[nontrivial.front()], static_cast<int>(k)}});
    x = wash(fs, x);
    if (!is_in_phi_k(fs, x, k))
        throw std::runtime_error("internal: rotating witness failed verification");
    return yes_decision(method, std::move(x), std::move(s));
}

inline Decision decide_schedules(const ConjunctiveNetwork& f, const Int& k, bool sequential,
                                 bool allow_oracle, int oracle_limit) {
    const Digraph& d = f.digraph();
    const int n = d.order();
    if (k < 2) throw precondition_error("cycle length must be at least 2");

    if (scc_decompose(d).nontrivial_ids().empty()) return no_decision("acyclic");

    if (is_strongly_connected(d) && d.arc_count() >= 1) {
        // Any realizable width-k labeling needs at least k arcs on every
        // cycle: k positive ones, and at least one positive per cycle.
        auto g = girth(d);
        if (k > n || (g && k > *g)) return no_decision("labeling-bound");
        auto h = find_update_k_labeling(d, static_cast<long long>(k), sequential);
        if (!h) return no_decision("labeling-search");
        return labeling_yes(f, *h, static_cast<long long>(k),
                            sequential ? "sequential-labeling" : "labeling");
    }

    if (n > 8)
        throw capacity_error("schedule enumeration limited to 8 vertices");

    std::set<std::string> seen;
    bool any_unknown = false;
    std::optional<Decision> found;
    auto consider = [&](const UpdateSchedule& s) {
        if (found) return;
        LabeledDigraph l = label_from_schedule(d, s);
        if (!seen.insert(l.format()).second) return;
        Decision sub = decide_plce_general(apply_schedule(f, s), k, allow_oracle, oracle_limit);
        if (sub.is_yes()) {
            sub.schedule = s;
            sub.method = "schedule-enumeration+" + sub.method;
            found = std::move(sub);
        } else if (sub.is_unknown()) {
            any_unknown = true;
        }
    };

    if (sequential) {
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 1);
        do {
            std::vector<std::vector<int>> blocks(n);
            for (int i = 0; i < n; ++i) blocks[i] = {perm[i]};
            consider(UpdateSchedule(n, std::move(blocks)));
        } while (!found && std::next_permutation(perm.begin(), perm.end()));
    } else {
        // Every set partition once, then every ordering of its blocks.
        std::vector<int> assign(n, 0);
        auto rec = [&](auto&& self, int v, int used) -> void {
            if (found) return;
            if (v > n) {
                std::vector<int> idx(used);
                std::iota(idx.begin(), idx.end(), 0);
                do {
                    std::vector<std::vector<int>> blocks(used);
                    for (int u = 1; u <= n; ++u) {
                        int slot = static_cast<int>(
                            std::find(idx.begin(), idx.end(), assign[u - 1]) - idx.begin());
                        blocks[slot].push_back(u);
                    }
                    consider(UpdateSchedule(n, std::move(blocks)));
                } while (!found && std::next_permutation(idx.begin(), idx.end()));
                return;
            }
            for (int b = 0; b < std::min(used + 1, n); ++b) {
                assign[v - 1] = b;
                self(self, v + 1, std::max(used, b + 1));
            }
        };
        rec(rec, 1, 0);
    }
    if (found) return *found;
    if (any_unknown) return unknown_decision("schedule-enumeration");
    return no_decision("schedule-enumeration");
}

}  // namespace detail

// Is there a block-sequential schedule whose dynamics has a limit cycle of
// length exactly k?
inline Decision decide_k_blce(const ConjunctiveNetwork& f, const Int& k,
                              bool allow_oracle = true, int oracle_limit = 20) {
    return detail::decide_schedules(f, k, false, allow_oracle, oracle_limit);
}

// Same question restricted to schedules updating one vertex at a time.
inline Decision decide_k_slce(const ConjunctiveNetwork& f, const Int& k,
                              bool allow_oracle = true, int oracle_limit = 20) {
    return detail::decide_schedules(f, k, true, allow_oracle, oracle_limit);
}

}  // namespace cbn
