#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "psidesc/errors.hpp"
#include "psidesc/rational.hpp"

namespace psidesc {

/// A weak composition e = (e_1, ..., e_n) of some total into n >= 1
/// nonnegative parts. Indices in the API are 0-based; reports print 1-based.
using ExponentVector = std::vector<unsigned>;

/// The set E(n, d) of weak compositions of d into n parts.
struct CompositionSpace {
    unsigned n;
    unsigned d;

    CompositionSpace(unsigned n_, unsigned d_) : n(n_), d(d_) {
        if (n == 0)
            throw input_error("composition space needs at least one part");
    }

    /// |E(n, d)| = binomial(d + n - 1, n - 1).
    Int size() const { return binomial(d + n - 1, n - 1); }

    bool contains(const ExponentVector& e) const {
        return e.size() == n &&
               std::accumulate(e.begin(), e.end(), 0u) == d;
    }
};

inline unsigned long long sum_of(const ExponentVector& e) {
    unsigned long long s = 0;
    for (unsigned v : e)
        s += v;
    return s;
}

/// Visits every element of E(n, d) exactly once, in lexicographically
/// descending order on entries: (d, 0, ..., 0) first, (0, ..., 0, d) last.
template <class Fn>
void for_each_composition(const CompositionSpace& space, Fn&& fn) {
    ExponentVector e(space.n, 0);
    const std::function<void(unsigned, unsigned)> rec = [&](unsigned pos, unsigned left) {
        if (pos + 1 == space.n) {
            e[pos] = left;
            fn(const_cast<const ExponentVector&>(e));
            return;
        }
        for (unsigned v = left + 1; v-- > 0;) {
            e[pos] = v;
            rec(pos + 1, left - v);
        }
    };
    rec(0, space.d);
}

inline std::vector<ExponentVector> enumerate(const CompositionSpace& space) {
    std::vector<ExponentVector> out;
    for_each_composition(space, [&](const ExponentVector& e) { out.push_back(e); });
    return out;
}

/// true iff max(e) - min(e) <= 1.
inline bool is_balanced(const ExponentVector& e) {
    if (e.empty())
        throw input_error("empty exponent vector");
    auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    return *hi - *lo <= 1;
}

/// true iff at most one entry is nonzero.
inline bool is_concentrated(const ExponentVector& e) {
    if (e.empty())
        throw input_error("empty exponent vector");
    return std::count_if(e.begin(), e.end(), [](unsigned v) { return v > 0; }) <= 1;
}

/// The canonical balanced element of E(n, d): writing d = a*n + b with
/// 0 <= b < n, b entries equal to a+1 followed by n-b entries equal to a.
inline ExponentVector balanced_representative(const CompositionSpace& space) {
    const unsigned a = space.d / space.n;
    const unsigned b = space.d % space.n;
    ExponentVector e(space.n, a);
    for (unsigned k = 0; k < b; ++k)
        e[k] = a + 1;
    return e;
}

inline ExponentVector concentrated_representative(const CompositionSpace& space) {
    ExponentVector e(space.n, 0);
    e[0] = space.d;
    return e;
}

/// e - delta_i + delta_j (move one unit from entry i to entry j).
inline ExponentVector transfer(const ExponentVector& e, std::size_t i, std::size_t j) {
    if (i >= e.size() || j >= e.size())
        throw input_error("transfer index out of range");
    if (i == j)
        throw input_error("transfer requires distinct indices");
    if (e[i] == 0)
        throw input_error("transfer source entry is zero");
    ExponentVector out = e;
    --out[i];
    ++out[j];
    return out;
}

/// Sum of squared entries; strictly decreases under a balancing transfer.
inline unsigned long long imbalance(const ExponentVector& e) {
    unsigned long long s = 0;
    for (unsigned v : e)
        s += static_cast<unsigned long long>(v) * v;
    return s;
}

/// Entries sorted in non-increasing order. Two vectors have equal keys iff
/// they are permutations of each other.
inline ExponentVector canonical_key(const ExponentVector& e) {
    ExponentVector k = e;
    std::sort(k.begin(), k.end(), std::greater<unsigned>());
    return k;
}

/// Number of distinct permutations of e: n! / prod (multiplicity!).
inline Int orbit_size(const ExponentVector& e) {
    ExponentVector k = canonical_key(e);
    Int denom = 1;
    std::size_t run = 1;
    for (std::size_t t = 1; t <= k.size(); ++t) {
        if (t < k.size() && k[t] == k[t - 1]) {
            ++run;
        } else {
            denom *= factorial(static_cast<unsigned>(run));
            run = 1;
        }
    }
    return factorial(static_cast<unsigned>(k.size())) / denom;
}

inline std::string to_string(const ExponentVector& e) {
    std::string s = "(";
    for (std::size_t t = 0; t < e.size(); ++t) {
        if (t)
            s += ',';
        s += std::to_string(e[t]);
    }
    return s + ")";
}

} // namespace psidesc
