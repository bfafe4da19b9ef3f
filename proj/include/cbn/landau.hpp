#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "cbn/oracle.hpp"

namespace cbn {

// Largest achievable limit-cycle length over all conjunctive networks on n
// vertices: the maximum lcm of a partition of n, always attained by a
// multiset of prime powers with sum at most n.
struct LandauRecord {
    int n = 0;
    Int value = 1;
    std::vector<int> partition;  // ascending prime powers, sum <= n
};

inline LandauRecord landau(int n, int limit = 128) {
    if (n < 1) throw precondition_error("landau needs n >= 1");
    if (n > limit)
        throw capacity_error("landau limited to n <= " + std::to_string(limit));

    std::vector<int> primes;
    std::vector<bool> composite(n + 1, false);
    for (int p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (int q = 2 * p; q <= n; q += p) composite[q] = true;
    }
    const int np = static_cast<int>(primes.size());

    // best[i][b]: largest product of powers of distinct primes[i..] whose
    // exponents' values sum to at most b. Each prime contributes one power
    // or is skipped.
    std::vector<std::vector<Int>> best(np + 1, std::vector<Int>(n + 1, 1));
    std::vector<std::vector<int>> take(np, std::vector<int>(n + 1, 0));
    for (int i = np - 1; i >= 0; --i)
        for (int b = 0; b <= n; ++b) {
            best[i][b] = best[i + 1][b];
            for (long long pe = primes[i]; pe <= b; pe *= primes[i]) {
                Int candidate = best[i + 1][b - static_cast<int>(pe)] * pe;
                if (candidate > best[i][b]) {
                    best[i][b] = candidate;
                    take[i][b] = static_cast<int>(pe);
                }
            }
        }

    LandauRecord record;
    record.n = n;
    record.value = best[0][n];
    int b = n;
    for (int i = 0; i < np; ++i)
        if (take[i][b] != 0) {
            record.partition.push_back(take[i][b]);
            b -= take[i][b];
        }
    std::sort(record.partition.begin(), record.partition.end());
    return record;
}

// Network attaining landau(n): one rotating cycle per partition part, each
// carrying a single 1, so the orbit's period is the parts' lcm. Vertices
// left over by the partition become loops held at 1, contributing period 1.
inline std::pair<ConjunctiveNetwork, Configuration> extremal_network(int n, int limit = 128) {
    if (n < 2) throw precondition_error("extremal network needs n >= 2");
    LandauRecord record = landau(n, limit);
    Digraph d(n);
    Configuration x(n);
    int next = 1;
    for (int t : record.partition) {
        for (int i = 0; i < t; ++i) d.add_arc(next + i, next + (i + 1) % t);
        x.set(next, 1);
        next += t;
    }
    for (; next <= n; ++next) {
        d.add_arc(next, next);
        x.set(next, 1);
    }
    ConjunctiveNetwork f{d};
    if (!is_in_phi_k(f, x, record.value))
        throw std::runtime_error("internal: extremal configuration misses its period");
    return {std::move(f), std::move(x)};
}

// Every limit-cycle length of a conjunctive network on n vertices factors
// into primes at most n; checks a report against that bound.
inline bool max_prime_factor_bound_check(const ConjunctiveNetwork& f,
                                         const AttractorReport& report) {
    for (const auto& cycle : report.limit_cycles) {
        long long rest = cycle.length();
        for (long long p = 2; p <= rest; ++p)
            while (rest % p == 0) {
                if (p > f.order()) return false;
                rest /= p;
            }
    }
    return true;
}

}  // namespace cbn
