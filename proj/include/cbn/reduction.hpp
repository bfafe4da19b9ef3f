#pragma once

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cbn/decide.hpp"
#include "cbn/network.hpp"

namespace cbn {

struct Literal {
    int var = 0;
    bool positive = true;

    bool operator==(const Literal&) const = default;
};

// 3-CNF only: exactly three literals per clause, repetition allowed.
struct CnfFormula {
    int n_vars = 0;
    std::vector<std::array<Literal, 3>> clauses;

    static CnfFormula parse(std::string_view text);
    std::string format() const;
};

// Value of variable i is g[i-1].
using Valuation = std::vector<bool>;

inline bool satisfies(const CnfFormula& psi, const Valuation& g) {
    if (static_cast<int>(g.size()) != psi.n_vars)
        throw precondition_error("valuation size does not match the formula");
    for (const auto& clause : psi.clauses) {
        bool ok = false;
        for (const Literal& lit : clause) ok = ok || g[lit.var - 1] == lit.positive;
        if (!ok) return false;
    }
    return true;
}

inline CnfFormula CnfFormula::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string token;
    CnfFormula psi;
    int n_clauses = -1;
    while (in >> token) {
        if (token == "c") {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (token != "p") throw format_error("expected \"p cnf\" header");
        std::string kind;
        if (!(in >> kind) || kind != "cnf") throw format_error("expected \"p cnf\" header");
        if (!(in >> psi.n_vars >> n_clauses) || psi.n_vars < 1 || n_clauses < 0)
            throw format_error("malformed \"p cnf\" header");
        break;
    }
    if (n_clauses < 0) throw format_error("missing \"p cnf\" header");
    std::vector<Literal> current;
    int lit = 0;
    while (in >> lit) {
        if (lit == 0) {
            if (current.size() != 3)
                throw format_error("clause " + std::to_string(psi.clauses.size() + 1) +
                                   " has " + std::to_string(current.size()) +
                                   " literals; exactly 3 required");
            psi.clauses.push_back({current[0], current[1], current[2]});
            current.clear();
            continue;
        }
        int var = lit > 0 ? lit : -lit;
        if (var > psi.n_vars)
            throw format_error("literal " + std::to_string(lit) + " out of range");
        current.push_back({var, lit > 0});
    }
    if (!current.empty()) throw format_error("unterminated clause");
    if (static_cast<int>(psi.clauses.size()) != n_clauses)
        throw format_error("clause count does not match the header");
    return psi;
}

inline std::string CnfFormula::format() const {
    std::ostringstream os;
    os << "p cnf " << n_vars << " " << clauses.size() << "\n";
    for (const auto& clause : clauses) {
        for (const Literal& lit : clause) os << (lit.positive ? lit.var : -lit.var) << " ";
        os << "0\n";
    }
    return os.str();
}

// First satisfying valuation with variables scanned in index order, false
// before true; absent when unsatisfiable.
inline std::optional<Valuation> brute_sat(const CnfFormula& psi) {
    if (psi.n_vars > 20) throw capacity_error("exhaustive satisfiability limited to 20 variables");
    const int n = psi.n_vars;
    for (uint32_t code = 0; code < (uint32_t{1} << n); ++code) {
        Valuation g(n);
        for (int i = 1; i <= n; ++i) g[i - 1] = (code >> (n - i)) & 1u;
        if (satisfies(psi, g)) return g;
    }
    return std::nullopt;
}

// Which vertex plays which role in a reduced instance. Exactly one of the
// two sections is populated: cycle ranges and primes for the parallel
// construction, gadget ids and subdivision paths for the schedule one.
struct GadgetIndex {
    struct CycleRange {
        int first = 0;
        int length = 0;

        bool operator==(const CycleRange&) const = default;
    };
    struct VariableGadget {
        int x = 0, t = 0, xbar = 0, f = 0;

        bool operator==(const VariableGadget&) const = default;
    };
    struct Path {
        int from = 0, to = 0;
        std::vector<int> interior;

        bool operator==(const Path&) const = default;
    };

    // parallel construction
    std::vector<std::array<CycleRange, 2>> variable_cycles;  // [0] positive, [1] negative
    std::vector<std::array<CycleRange, 3>> clause_cycles;
    std::vector<long long> primes;

    // schedule construction
    long long width = 0;
    std::vector<VariableGadget> variables;
    std::vector<std::array<int, 7>> clause_rings;  // ring order c1 l1 c2 l2 c3 l3 c4
    int hub_first = 0, hub_last = 0;
    std::vector<Path> paths;

    bool operator==(const GadgetIndex&) const = default;

    static GadgetIndex parse(std::string_view text);
    std::string format() const;
};

inline std::string GadgetIndex::format() const {
    std::ostringstream os;
    if (!variable_cycles.empty() || !primes.empty()) {
        os << "kind: parallel\n";
        os << "primes:";
        for (long long p : primes) os << " " << p;
        os << "\n";
        for (size_t i = 0; i < variable_cycles.size(); ++i)
            for (int side = 0; side < 2; ++side)
                os << "varcycle " << i + 1 << " " << (side == 0 ? "pos" : "neg") << ": "
                   << variable_cycles[i][side].first << " " << variable_cycles[i][side].length
                   << "\n";
        for (size_t j = 0; j < clause_cycles.size(); ++j)
            for (int l = 0; l < 3; ++l)
                os << "clausecycle " << j + 1 << " " << l + 1 << ": "
                   << clause_cycles[j][l].first << " " << clause_cycles[j][l].length << "\n";
        return os.str();
    }
    os << "kind: schedule\n";
    os << "width: " << width << "\n";
    for (size_t i = 0; i < variables.size(); ++i)
        os << "variable " << i + 1 << ": " << variables[i].x << " " << variables[i].t << " "
           << variables[i].xbar << " " << variables[i].f << "\n";
    for (size_t j = 0; j < clause_rings.size(); ++j) {
        os << "clause " << j + 1 << ":";
        for (int v : clause_rings[j]) os << " " << v;
        os << "\n";
    }
    os << "hub: " << hub_first << " " << hub_last << "\n";
    for (size_t p = 0; p < paths.size(); ++p) {
        os << "path " << p + 1 << ": " << paths[p].from << " " << paths[p].to << " :";
        for (int v : paths[p].interior) os << " " << v;
        os << "\n";
    }
    return os.str();
}

inline GadgetIndex GadgetIndex::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    GadgetIndex idx;
    bool parallel = false, kind_seen = false;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw format_error("gadget index line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "kind:") {
            std::string kind;
            ls >> kind;
            if (kind != "parallel" && kind != "schedule") fail("unknown kind");
            parallel = kind == "parallel";
            kind_seen = true;
        } else if (key == "primes:") {
            long long p = 0;
            while (ls >> p) idx.primes.push_back(p);
        } else if (key == "varcycle") {
            int i = 0;
            std::string side, colon;
            CycleRange r;
            if (!(ls >> i >> side >> r.first >> r.length)) fail("malformed varcycle");
            side.pop_back();  // strip ':'
            if (static_cast<int>(idx.variable_cycles.size()) < i) idx.variable_cycles.resize(i);
            idx.variable_cycles[i - 1][side == "pos" ? 0 : 1] = r;
        } else if (key == "clausecycle") {
            int j = 0;
            std::string l;
            CycleRange r;
            if (!(ls >> j >> l >> r.first >> r.length)) fail("malformed clausecycle");
            l.pop_back();
            if (static_cast<int>(idx.clause_cycles.size()) < j) idx.clause_cycles.resize(j);
            idx.clause_cycles[j - 1][std::stoi(l) - 1] = r;
        } else if (key == "width:") {
            if (!(ls >> idx.width)) fail("malformed width");
        } else if (key == "variable") {
            int i = 0;
            std::string colon;
            VariableGadget vg;
            if (!(ls >> i >> colon >> vg.x >> vg.t >> vg.xbar >> vg.f)) fail("malformed variable");
            if (static_cast<int>(idx.variables.size()) < i) idx.variables.resize(i);
            idx.variables[i - 1] = vg;
        } else if (key == "clause") {
            int j = 0;
            std::string colon;
            std::array<int, 7> ring{};
            if (!(ls >> j >> colon)) fail("malformed clause");
            for (int& v : ring)
                if (!(ls >> v)) fail("malformed clause");
            if (static_cast<int>(idx.clause_rings.size()) < j) idx.clause_rings.resize(j);
            idx.clause_rings[j - 1] = ring;
        } else if (key == "hub:") {
            if (!(ls >> idx.hub_first >> idx.hub_last)) fail("malformed hub");
        } else if (key == "path") {
            int p = 0;
            std::string colon;
            Path path;
            if (!(ls >> p >> colon >> path.from >> path.to >> colon)) fail("malformed path");
            int v = 0;
            while (ls >> v) path.interior.push_back(v);
            if (static_cast<int>(idx.paths.size()) < p) idx.paths.resize(p);
            idx.paths[p - 1] = path;
        } else {
            fail("unknown key " + key);
        }
    }
    if (!kind_seen) throw format_error("gadget index: missing kind");
    (void)parallel;
    return idx;
}

namespace detail {

// First n+m primes; the largest stays below (n+m)^2 once n+m >= 2.
inline std::vector<long long> first_primes(int count) {
    if (count == 1) return {2};
    long long limit = static_cast<long long>(count) * count;
    std::vector<bool> composite(limit + 1, false);
    std::vector<long long> primes;
    for (long long p = 2; p <= limit && static_cast<int>(primes.size()) < count; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (long long q = p * p; q <= limit; q += p) composite[q] = true;
    }
    if (static_cast<int>(primes.size()) < count)
        throw std::runtime_error("internal: prime table bound violated");
    return primes;
}

}  // namespace detail

struct PlceInstance {
    ConjunctiveNetwork network;
    Int k;
    GadgetIndex index;
};

// One pair of isolated cycles per variable (lengths p_i), three cycles per
// clause (lengths p_{n+j}), and an arc from the head of a literal's variable
// cycle to the head of its clause cycle. A limit cycle of length
// k = p_1 ... p_{n+m} exists iff the formula is satisfiable.
inline PlceInstance sat_to_plce(const CnfFormula& psi) {
    const int n = psi.n_vars;
    const int m = static_cast<int>(psi.clauses.size());
    GadgetIndex idx;
    idx.primes = detail::first_primes(n + m);

    int next = 1;
    for (int i = 0; i < n; ++i) {
        int p = static_cast<int>(idx.primes[i]);
        idx.variable_cycles.push_back(
            {GadgetIndex::CycleRange{next, p}, GadgetIndex::CycleRange{next + p, p}});
        next += 2 * p;
    }
    for (int j = 0; j < m; ++j) {
        int p = static_cast<int>(idx.primes[n + j]);
        idx.clause_cycles.push_back({GadgetIndex::CycleRange{next, p},
                                     GadgetIndex::CycleRange{next + p, p},
                                     GadgetIndex::CycleRange{next + 2 * p, p}});
        next += 3 * p;
    }

    Digraph d(next - 1);
    auto add_cycle = [&](const GadgetIndex::CycleRange& r) {
        for (int v = r.first; v < r.first + r.length; ++v)
            d.add_arc(v, v + 1 == r.first + r.length ? r.first : v + 1);
    };
    for (const auto& pair : idx.variable_cycles) {
        add_cycle(pair[0]);
        add_cycle(pair[1]);
    }
    for (const auto& triple : idx.clause_cycles) {
        add_cycle(triple[0]);
        add_cycle(triple[1]);
        add_cycle(triple[2]);
    }
    for (int j = 0; j < m; ++j)
        for (int l = 0; l < 3; ++l) {
            const Literal& lit = psi.clauses[j][l];
            const auto& side = idx.variable_cycles[lit.var - 1][lit.positive ? 0 : 1];
            d.add_arc(side.first, idx.clause_cycles[j][l].first);
        }

    Int k = 1;
    for (long long p : idx.primes) k *= p;
    long long cube = static_cast<long long>(n + m) * (n + m) * (n + m);
    if (n + m >= 2 && d.order() > 3 * cube)
        throw std::runtime_error("internal: size bound violated");
    return PlceInstance{ConjunctiveNetwork(d), k, std::move(idx)};
}

// Configuration with the designated length: the side of each variable pair
// matching g holds constant ones (so the clause cycles it feeds can rotate
// freely), the other side rotates a single one; satisfied literals' clause
// cycles rotate a single one, falsified ones sit at zero.
inline Configuration plce_witness_from_valuation(const CnfFormula& psi, const Valuation& g,
                                                 const GadgetIndex& idx) {
    if (!satisfies(psi, g)) throw precondition_error("valuation does not satisfy the formula");
    PlceInstance inst = sat_to_plce(psi);
    Configuration x(inst.network.order());
    auto fill = [&](const GadgetIndex::CycleRange& r, int pattern) {
        // pattern: 0 = all zeros, 1 = all ones, 2 = one leading 1
        for (int v = r.first; v < r.first + r.length; ++v)
            x.set(v, pattern == 1 || (pattern == 2 && v == r.first));
    };
    for (int i = 0; i < psi.n_vars; ++i) {
        fill(idx.variable_cycles[i][g[i] ? 0 : 1], 1);
        fill(idx.variable_cycles[i][g[i] ? 1 : 0], 2);
    }
    for (size_t j = 0; j < psi.clauses.size(); ++j)
        for (int l = 0; l < 3; ++l) {
            const Literal& lit = psi.clauses[j][l];
            fill(idx.clause_cycles[j][l], g[lit.var - 1] == lit.positive ? 2 : 0);
        }
    if (!is_in_phi_k(inst.network, x, inst.k))
        throw std::runtime_error("internal: reduction witness failed verification");
    return x;
}

// Reads the valuation back off any configuration on a length-k limit cycle:
// variable i is true iff its negative-side cycle is the rotating one.
inline Valuation valuation_from_plce_witness(const CnfFormula& psi, const Configuration& x,
                                             const GadgetIndex& idx) {
    PlceInstance inst = sat_to_plce(psi);
    if (!is_in_phi_k(inst.network, x, inst.k))
        throw precondition_error("configuration is not on a limit cycle of the designated length");
    Valuation g(psi.n_vars);
    for (int i = 0; i < psi.n_vars; ++i) {
        const auto& neg = idx.variable_cycles[i][1];
        bool constant = true;
        for (int v = neg.first + 1; v < neg.first + neg.length; ++v)
            constant = constant && x.get(v) == x.get(neg.first);
        g[i] = !constant;  // a non-constant prime cycle rotates with full period
    }
    if (!satisfies(psi, g))
        throw std::runtime_error("internal: decoded valuation fails the formula");
    return g;
}

struct BlceInstance {
    Digraph digraph;
    GadgetIndex index;
};

// Schedule-question reduction: per variable a 4-vertex gadget x,t,x̄,f, per
// clause a 7-vertex ring alternating ring and literal vertices, two hub
// vertices tying all x/x̄/ring vertices together, and for width k > 2 the
// long arcs stretched into paths of length k-1. A width-k labeling exists
// iff the formula is satisfiable.
inline BlceInstance sat_to_kblce(const CnfFormula& psi, long long k) {
    if (k < 2) throw precondition_error("width must be at least 2");
    const int n = psi.n_vars;
    const int m = static_cast<int>(psi.clauses.size());
    GadgetIndex idx;
    idx.width = k;
    for (int i = 0; i < n; ++i)
        idx.variables.push_back({4 * i + 1, 4 * i + 2, 4 * i + 3, 4 * i + 4});
    for (int j = 0; j < m; ++j) {
        std::array<int, 7> ring{};
        for (int p = 0; p < 7; ++p) ring[p] = 4 * n + 7 * j + 1 + p;
        idx.clause_rings.push_back(ring);
    }
    idx.hub_first = 4 * n + 7 * m + 1;
    idx.hub_last = 4 * n + 7 * m + 2;

    const int stretched = 3 * n + 6 * m + 1;
    Digraph d(4 * n + 7 * m + 2 + static_cast<int>(k - 2) * stretched);

    int next_interior = 4 * n + 7 * m + 3;
    auto add_path = [&](int u, int w) {
        GadgetIndex::Path path{u, w, {}};
        for (int s = 0; s < k - 2; ++s) path.interior.push_back(next_interior++);
        int prev = u;
        for (int v : path.interior) {
            d.add_arc(prev, v);
            prev = v;
        }
        d.add_arc(prev, w);
        idx.paths.push_back(std::move(path));
    };

    for (const auto& vg : idx.variables) {
        d.add_arc(vg.x, vg.t);
        d.add_arc(vg.xbar, vg.f);
    }
    auto literal_ends = [&](int j, int p) {
        const Literal& lit = psi.clauses[j][p];
        const auto& vg = idx.variables[lit.var - 1];
        return std::pair{lit.positive ? vg.x : vg.xbar, lit.positive ? vg.xbar : vg.x};
    };
    for (int j = 0; j < m; ++j) {
        const auto& ring = idx.clause_rings[j];
        for (int p = 0; p < 3; ++p) {
            d.add_arc(ring[2 * p], ring[2 * p + 1]);   // ring vertex -> literal vertex
            d.add_arc(literal_ends(j, p).first, ring[2 * p + 1]);
        }
        d.add_arc(ring[6], ring[0]);
    }
    for (const auto& vg : idx.variables) {
        d.add_arc(vg.x, idx.hub_first);
        d.add_arc(vg.xbar, idx.hub_first);
        d.add_arc(idx.hub_last, vg.x);
        d.add_arc(idx.hub_last, vg.xbar);
    }
    for (int j = 0; j < m; ++j)
        for (int p = 0; p < 7; p += 2) {
            d.add_arc(idx.clause_rings[j][p], idx.hub_first);
            d.add_arc(idx.hub_last, idx.clause_rings[j][p]);
        }

    // Stretched arcs, in a fixed order so interior numbering is reproducible:
    // variable gadgets, ring arcs, literal return arcs, then the hub arc.
    for (const auto& vg : idx.variables) {
        add_path(vg.t, vg.xbar);
        add_path(vg.t, vg.f);
        add_path(vg.f, vg.x);
    }
    for (int j = 0; j < m; ++j)
        for (int p = 0; p < 3; ++p)
            add_path(idx.clause_rings[j][2 * p + 1], idx.clause_rings[j][2 * p + 2]);
    for (int j = 0; j < m; ++j)
        for (int p = 0; p < 3; ++p)
            add_path(idx.clause_rings[j][2 * p + 1], literal_ends(j, p).second);
    add_path(idx.hub_first, idx.hub_last);

    return BlceInstance{std::move(d), std::move(idx)};
}

inline BlceInstance sat_to_2blce(const CnfFormula& psi) { return sat_to_kblce(psi, 2); }

// The satisfying partition: class 1 holds the first hub vertex, t_i or f_i
// according to the valuation, and the satisfied literal vertices; class 0
// holds everything else; stretched paths interpolate between their endpoint
// classes (climbing through 2..k-1 when dropping from 1 back to 0).
inline std::vector<int> labeling_from_valuation(const CnfFormula& psi, const Valuation& g,
                                                long long k, const GadgetIndex& idx) {
    if (!satisfies(psi, g)) throw precondition_error("valuation does not satisfy the formula");
    BlceInstance inst = sat_to_kblce(psi, k);
    std::vector<int> h(inst.digraph.order(), 0);
    h[idx.hub_first - 1] = 1;
    for (int i = 0; i < psi.n_vars; ++i)
        h[(g[i] ? idx.variables[i].t : idx.variables[i].f) - 1] = 1;
    for (size_t j = 0; j < psi.clauses.size(); ++j)
        for (int p = 0; p < 3; ++p) {
            const Literal& lit = psi.clauses[j][p];
            if (g[lit.var - 1] == lit.positive) h[idx.clause_rings[j][2 * p + 1] - 1] = 1;
        }
    for (const auto& path : idx.paths) {
        int from = h[path.from - 1], to = h[path.to - 1];
        for (size_t s = 0; s < path.interior.size(); ++s) {
            int value = from;
            if (from == 1 && to == 0) value = static_cast<int>(s) + 2;
            else if (from == 0 && to == 1) value = 1;
            h[path.interior[s] - 1] = value;
        }
    }
    LabeledDigraph l = labeling_from_potential(inst.digraph, h, k);
    if (!is_k_labeling(l, k) || !is_sequential_update_digraph(l))
        throw std::runtime_error("internal: satisfying partition failed verification");
    return h;
}

// Reads a valuation off any valid width-k partition. The partition may be
// shifted or structured differently from the canonical one, so a few
// decodings are tried and checked against the formula.
inline Valuation valuation_from_labeling(const CnfFormula& psi, const std::vector<int>& h,
                                         const GadgetIndex& idx) {
    const long long k = idx.width;
    BlceInstance inst = sat_to_kblce(psi, k);
    if (static_cast<int>(h.size()) != inst.digraph.order())
        throw precondition_error("partition size does not match the instance");
    LabeledDigraph l = [&] {
        try {
            return labeling_from_potential(inst.digraph, h, k);
        } catch (const precondition_error&) {
            throw precondition_error("partition does not induce a labeling");
        }
    }();
    if (!is_k_labeling(l, k) || !is_update_digraph(l))
        throw precondition_error("partition does not induce a valid update labeling");

    // The classes of a raw labeling only become readable once the hub sink
    // updates alone first: rotate the induced schedule until the sink's
    // block leads, then split the sink out. Both steps keep every cycle's
    // positive count a multiple of k (the sink is never on an all-positive
    // cycle), and afterwards all its out-arcs are negative, pinning each
    // x_i to the sink's class. Variable i is then true exactly when t_i
    // sits one class above x_i, i.e. when the arc (x_i, t_i) is positive.
    UpdateSchedule s = schedule_from_labeling(l);
    const auto& blocks = s.blocks();
    const int p = static_cast<int>(blocks.size());
    const int r = s.block_of(idx.hub_last) - 1;
    std::vector<std::vector<int>> realigned{{idx.hub_last}};
    std::vector<int> rest;
    for (int v : blocks[r])
        if (v != idx.hub_last) rest.push_back(v);
    if (!rest.empty()) realigned.push_back(std::move(rest));
    for (int b = 1; b < p; ++b) realigned.push_back(blocks[(r + b) % p]);
    LabeledDigraph aligned = label_from_schedule(
        inst.digraph, UpdateSchedule(inst.digraph.order(), std::move(realigned)));
    if (!is_k_labeling(aligned, k))
        throw std::runtime_error("internal: realignment broke the labeling");

    Valuation g(psi.n_vars);
    for (int i = 0; i < psi.n_vars; ++i)
        g[i] = aligned.is_plus(idx.variables[i].x, idx.variables[i].t);
    if (!satisfies(psi, g))
        throw precondition_error("no valuation could be decoded from the partition");
    return g;
}

}  // namespace cbn
