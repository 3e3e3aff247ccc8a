#pragma once

#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "psidesc/errors.hpp"

namespace psidesc {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// n! with a process-wide memo table.
inline Int factorial(unsigned n) {
    static std::vector<Int> table{1};
    static std::mutex guard;
    std::lock_guard<std::mutex> lock(guard);
    while (table.size() <= n)
        table.push_back(table.back() * Int(table.size()));
    return table[n];
}

/// (2k+1)!! for k >= -1, with (-1)!! = 1.
inline Int odd_double_factorial(int k) {
    Int r = 1;
    for (int t = 1; t <= 2 * k + 1; t += 2)
        r *= t;
    return r;
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    Int r = 1;
    for (unsigned t = 1; t <= k; ++t) {
        r *= n - k + t;
        r /= t;
    }
    return r;
}

/// Renders `p/q`, or just `p` when q == 1.
inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

/// Parses "num/den" or a bare integer. Requires den > 0 and gcd(num, den) = 1,
/// matching the on-disk cache format.
inline Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(Int(text));
        }
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den <= 0)
            throw input_error("rational denominator must be positive: " + text);
        if (gcd(num, den) != 1)
            throw input_error("rational not in lowest terms: " + text);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw input_error("malformed rational: " + text);
    }
}

} // namespace psidesc
