#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cbn {

using Int = boost::multiprecision::cpp_int;

// Malformed input text (digraph files, schedules, configurations, CNF).
struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The instance exceeds a stated size limit.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Int big_lcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return a / boost::multiprecision::gcd(a, b) * b;
}

inline bool divides(const Int& d, const Int& m) {
    return d != 0 && m % d == 0;
}

// Accepts a decimal integer or a binary one with an "0b" prefix.
inline Int parse_int(std::string_view s) {
    if (s.empty()) throw format_error("empty integer literal");
    size_t pos = 0;
    int base = 10;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
        base = 2;
        pos = 2;
    }
    Int v = 0;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else throw format_error("bad digit in integer literal: " + std::string(s));
        if (d >= base) throw format_error("bad digit in integer literal: " + std::string(s));
        v = v * base + d;
    }
    return v;
}

}  // namespace cbn
