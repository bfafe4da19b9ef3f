#pragma once

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>
#include <vector>

#include "cbn/network.hpp"

namespace cbn {

struct LimitCycle {
    std::vector<Configuration> states;  // in orbit order, minimal state first

    int length() const { return static_cast<int>(states.size()); }
};

// Every attractor of the parallel dynamics, found by exhausting the state
// space. Fixed points are sorted; limit cycles are rotated so their
// lexicographically smallest state comes first, then sorted by length and
// first state.
struct AttractorReport {
    int n = 0;
    std::vector<Configuration> fixed_points;
    std::vector<LimitCycle> limit_cycles;

    std::set<int> cycle_lengths() const {
        std::set<int> ls;
        for (const auto& c : limit_cycles) ls.insert(c.length());
        return ls;
    }

    // Number of states on limit cycles of length exactly k.
    long long phi_size(const Int& k) const {
        if (k == 1) return static_cast<long long>(fixed_points.size());
        long long total = 0;
        for (const auto& c : limit_cycles)
            if (Int(c.length()) == k) total += c.length();
        return total;
    }
};

namespace detail {

inline Configuration state_to_config(uint32_t s, int n) {
    Configuration x(n);
    for (int v = 1; v <= n; ++v)
        if (s & (uint32_t{1} << (v - 1))) x.set(v, 1);
    return x;
}

}  // namespace detail

inline AttractorReport enumerate_attractors(const ConjunctiveNetwork& f, int limit = 20) {
    const int n = f.order();
    if (n > limit)
        throw capacity_error("attractor enumeration limited to " + std::to_string(limit) +
                             " vertices");
    const uint32_t count = uint32_t{1} << n;

    std::vector<uint32_t> in_mask(n);
    for (int v = 1; v <= n; ++v) {
        uint32_t m = 0;
        for (int u : f.digraph().in_neighbors(v)) m |= (uint32_t{1} << (u - 1));
        in_mask[v - 1] = m;
    }
    auto step = [&](uint32_t s) {
        uint32_t t = 0;
        for (int i = 0; i < n; ++i)
            if ((s & in_mask[i]) == in_mask[i]) t |= (uint32_t{1} << i);
        return t;
    };

    std::vector<uint32_t> succ(count);
    unsigned workers = std::min(std::thread::hardware_concurrency(), 8u);
    if (workers > 1 && count >= (1u << 16)) {
        std::vector<std::thread> pool;
        std::atomic<uint32_t> next{0};
        const uint32_t chunk = 1u << 12;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    uint32_t begin = next.fetch_add(chunk);
                    if (begin >= count) return;
                    uint32_t end = std::min<uint64_t>(count, uint64_t{begin} + chunk);
                    for (uint32_t s = begin; s < end; ++s) succ[s] = step(s);
                }
            });
        for (auto& t : pool) t.join();
    } else {
        for (uint32_t s = 0; s < count; ++s) succ[s] = step(s);
    }

    // Functional graph cycle detection over the successor table.
    constexpr uint8_t kUnseen = 0, kActive = 1, kDone = 2;
    std::vector<uint8_t> color(count, kUnseen);
    std::vector<uint32_t> path;
    AttractorReport report;
    report.n = n;

    // Lexicographic order of configuration strings, vertex 1 first.
    auto config_less = [&](uint32_t a, uint32_t b) {
        for (int i = 0; i < n; ++i) {
            uint32_t ba = a & (uint32_t{1} << i), bb = b & (uint32_t{1} << i);
            if (ba != bb) return ba < bb;
        }
        return false;
    };

    for (uint32_t s0 = 0; s0 < count; ++s0) {
        if (color[s0] != kUnseen) continue;
        path.clear();
        uint32_t s = s0;
        while (color[s] == kUnseen) {
            color[s] = kActive;
            path.push_back(s);
            s = succ[s];
        }
        if (color[s] == kActive) {
            // Found a new cycle; s closes it.
            size_t at = path.size() - 1;
            while (path[at] != s) --at;
            std::vector<uint32_t> cycle(path.begin() + at, path.end());
            if (cycle.size() == 1) {
                report.fixed_points.push_back(detail::state_to_config(cycle[0], n));
            } else {
                size_t best = 0;
                for (size_t i = 1; i < cycle.size(); ++i)
                    if (config_less(cycle[i], cycle[best])) best = i;
                LimitCycle lc;
                for (size_t i = 0; i < cycle.size(); ++i)
                    lc.states.push_back(
                        detail::state_to_config(cycle[(best + i) % cycle.size()], n));
                report.limit_cycles.push_back(std::move(lc));
            }
        }
        for (uint32_t v : path) color[v] = kDone;
    }

    std::sort(report.fixed_points.begin(), report.fixed_points.end());
    std::sort(report.limit_cycles.begin(), report.limit_cycles.end(),
              [](const LimitCycle& a, const LimitCycle& b) {
                  if (a.length() != b.length()) return a.length() < b.length();
                  return a.states[0] < b.states[0];
              });
    return report;
}

// Configurations on limit cycles of length exactly k, sorted.
inline std::vector<Configuration> phi_k(const ConjunctiveNetwork& f, const Int& k,
                                        int limit = 20) {
    if (k < 2) throw precondition_error("cycle length must be at least 2");
    auto report = enumerate_attractors(f, limit);
    std::vector<Configuration> states;
    for (const auto& c : report.limit_cycles)
        if (Int(c.length()) == k)
            states.insert(states.end(), c.states.begin(), c.states.end());
    std::sort(states.begin(), states.end());
    return states;
}

inline std::set<int> cycle_length_spectrum(const ConjunctiveNetwork& f, int limit = 20) {
    return enumerate_attractors(f, limit).cycle_lengths();
}

}  // namespace cbn
