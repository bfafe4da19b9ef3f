#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "cbn/oracle.hpp"
#include "helpers.hpp"

using namespace cbn;
using namespace testutil;

TEST_CASE("attractors of a single cycle") {
    // A directed 3-cycle has the two constant fixed points and two limit
    // cycles of length 3 (one 1 rotating, one 0 rotating).
    ConjunctiveNetwork c3(make_digraph(3, {{1, 2}, {2, 3}, {3, 1}}));
    auto report = enumerate_attractors(c3);
    REQUIRE(report.fixed_points.size() == 2);
    REQUIRE(report.fixed_points[0].to_string() == "000");
    REQUIRE(report.fixed_points[1].to_string() == "111");
    REQUIRE(report.limit_cycles.size() == 2);
    REQUIRE(report.cycle_lengths() == std::set<int>{3});
    // Canonical rotation: minimal state first.
    REQUIRE(report.limit_cycles[0].states[0].to_string() == "001");
    REQUIRE(report.limit_cycles[1].states[0].to_string() == "011");
    // Each listed cycle is a real orbit.
    for (const auto& c : report.limit_cycles)
        for (int i = 0; i < c.length(); ++i)
            REQUIRE(evaluate(c3, c.states[i]) == c.states[(i + 1) % c.length()]);
}

TEST_CASE("oracle agrees with direct iteration on random networks") {
    std::mt19937 rng(9001);
    for (int iter = 0; iter < 120; ++iter) {
        int n = std::uniform_int_distribution<int>(1, 8)(rng);
        ConjunctiveNetwork f(random_digraph(rng, n, 0.3, 0.15));
        auto report = enumerate_attractors(f);

        // Brute check: a state is on an attractor iff it recurs within 2^n
        // steps; collect orbits independently.
        std::set<std::string> on_cycle_expected;
        std::map<std::string, int> cycle_len;
        for (uint32_t s = 0; s < (uint32_t{1} << n); ++s) {
            Configuration x(n);
            for (int v = 1; v <= n; ++v)
                if (s & (uint32_t{1} << (v - 1))) x.set(v, 1);
            // March 2^n steps to land on the cycle, then measure it.
            Configuration y = x;
            for (uint32_t t = 0; t < (uint32_t{1} << n); ++t) y = evaluate(f, y);
            Configuration z = evaluate(f, y);
            int len = 1;
            while (!(z == y)) {
                z = evaluate(f, z);
                ++len;
            }
            on_cycle_expected.insert(y.to_string());
            cycle_len[y.to_string()] = len;
        }

        std::set<std::string> on_cycle_reported;
        for (const auto& fp : report.fixed_points) {
            on_cycle_reported.insert(fp.to_string());
            REQUIRE(evaluate(f, fp) == fp);
        }
        for (const auto& c : report.limit_cycles)
            for (const auto& st : c.states) {
                on_cycle_reported.insert(st.to_string());
                REQUIRE(cycle_len[st.to_string()] == c.length());
            }
        REQUIRE(on_cycle_reported == on_cycle_expected);
    }
}

TEST_CASE("oracle is deterministic and relabeling-invariant in size") {
    std::mt19937 rng(9002);
    for (int iter = 0; iter < 20; ++iter) {
        int n = std::uniform_int_distribution<int>(2, 8)(rng);
        Digraph d = random_digraph(rng, n, 0.3, 0.1);
        ConjunctiveNetwork f(d);
        auto r1 = enumerate_attractors(f);
        auto r2 = enumerate_attractors(f);
        REQUIRE(r1.fixed_points == r2.fixed_points);
        REQUIRE(r1.limit_cycles.size() == r2.limit_cycles.size());
        for (size_t i = 0; i < r1.limit_cycles.size(); ++i)
            REQUIRE(r1.limit_cycles[i].states == r2.limit_cycles[i].states);

        // Relabeling the vertices permutes states but keeps the profile.
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        Digraph pd(n);
        for (auto [u, v] : d.arcs()) pd.add_arc(perm[u - 1], perm[v - 1]);
        auto r3 = enumerate_attractors(ConjunctiveNetwork(pd));
        REQUIRE(r3.fixed_points.size() == r1.fixed_points.size());
        std::multiset<int> l1, l3;
        for (const auto& c : r1.limit_cycles) l1.insert(c.length());
        for (const auto& c : r3.limit_cycles) l3.insert(c.length());
        REQUIRE(l1 == l3);
    }
}

TEST_CASE("phi_k and the spectrum") {
    ConjunctiveNetwork f(cycles_pair(2, 3, false));
    REQUIRE(cycle_length_spectrum(f) == std::set<int>{2, 3, 6});
    // Both rotating patterns of the 3-cycle (100 and 110) pair with the
    // rotating 2-cycle: two joint orbits of length 6.
    REQUIRE(phi_k(f, 6).size() == 12);
    // Rotating 2-cycle with a constant 3-cycle: 10|000, 10|111 and shifts.
    REQUIRE(phi_k(f, 2).size() == 4);
    REQUIRE(phi_k(f, 4).empty());
    REQUIRE_THROWS_AS(phi_k(f, 1), precondition_error);

    for (const auto& x : phi_k(f, 6)) REQUIRE(is_in_phi_k(f, x, 6));
    for (const auto& x : phi_k(f, 2)) REQUIRE(is_in_phi_k(f, x, 2));
}

TEST_CASE("phi_k membership test agrees with the oracle everywhere") {
    std::mt19937 rng(9003);
    for (int iter = 0; iter < 40; ++iter) {
        int n = std::uniform_int_distribution<int>(2, 7)(rng);
        ConjunctiveNetwork f(random_digraph(rng, n, 0.3, 0.15));
        auto report = enumerate_attractors(f);
        std::map<std::string, int> len_of;
        for (const auto& c : report.limit_cycles)
            for (const auto& st : c.states) len_of[st.to_string()] = c.length();
        for (uint32_t s = 0; s < (uint32_t{1} << n); ++s) {
            Configuration x(n);
            for (int v = 1; v <= n; ++v)
                if (s & (uint32_t{1} << (v - 1))) x.set(v, 1);
            auto it = len_of.find(x.to_string());
            for (int k = 2; k <= 8; ++k) {
                bool expected = it != len_of.end() && it->second == k;
                REQUIRE(is_in_phi_k(f, x, k) == expected);
            }
        }
    }
}

TEST_CASE("oracle capacity limit") {
    ConjunctiveNetwork f(Digraph(21));
    REQUIRE_THROWS_AS(enumerate_attractors(f), capacity_error);
    try {
        enumerate_attractors(f);
    } catch (const capacity_error& e) {
        REQUIRE(std::string(e.what()).find("20") != std::string::npos);
    }
    REQUIRE_NOTHROW(enumerate_attractors(f, 21));
}
