#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "psidesc/compositions.hpp"
#include "psidesc/errors.hpp"
#include "psidesc/rational.hpp"

namespace psidesc {

/// Stability of the moduli space of genus-g curves with n marked points.
inline bool is_stable(unsigned g, unsigned n) {
    return 2 * g + n > 2;
}

/// A stable pair (g, n) with dimension d = 3g - 3 + n.
struct ModuliIndex {
    unsigned g;
    unsigned n;

    ModuliIndex(unsigned g_, unsigned n_) : g(g_), n(n_) {
        if (n == 0 || !is_stable(g, n))
            throw input_error("unstable moduli index (g=" + std::to_string(g) +
                              ", n=" + std::to_string(n) + ")");
    }

    unsigned dimension() const { return 3 * g - 3 + n; }
};

/// Cache key: genus plus the exponent multiset in non-increasing order.
/// Keying on the sorted multiset collapses each permutation orbit to one entry.
struct DescendantKey {
    unsigned g;
    ExponentVector exponents;

    auto operator<=>(const DescendantKey&) const = default;
};

/// (n-3)! / (e_1! ... e_n!), valid on E(n, n-3) with n >= 3.
inline Rational genus0_closed(const ExponentVector& e) {
    const auto n = e.size();
    if (n < 3)
        throw input_error("genus-0 closed formula needs n >= 3");
    if (sum_of(e) != n - 3)
        throw input_error("genus-0 closed formula needs total degree n - 3");
    Int den = 1;
    for (unsigned v : e)
        den *= factorial(v);
    return Rational(factorial(static_cast<unsigned>(n) - 3), den);
}

/// The one-point integral of the top power of the cotangent class: 1/(24^g g!).
inline Rational one_point_value(unsigned g) {
    if (g == 0)
        throw input_error("one-point value needs g >= 1 (g=0, n=1 is unstable)");
    return Rational(1, pow(Int(24), g) * factorial(g));
}

/// String-equation expansion: removes the zero entry at position i and yields
/// one term per other entry that can be decremented. Summing the engine over
/// the returned vectors reproduces the original value.
inline std::vector<ExponentVector> string_apply(unsigned g, const ExponentVector& e,
                                                std::size_t i) {
    if (i >= e.size())
        throw input_error("string index out of range");
    if (e[i] != 0)
        throw input_error("string equation needs a zero entry");
    if (e.size() < 2 || !is_stable(g, static_cast<unsigned>(e.size()) - 1))
        throw input_error("string reduction would leave an unstable space");
    std::vector<ExponentVector> terms;
    for (std::size_t j = 0; j < e.size(); ++j) {
        if (j == i || e[j] == 0)
            continue;
        ExponentVector t;
        t.reserve(e.size() - 1);
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (k == i)
                continue;
            t.push_back(k == j ? e[k] - 1 : e[k]);
        }
        terms.push_back(std::move(t));
    }
    return terms;
}

/// Dilaton-equation reduction: removes the entry 1 at position i and returns
/// the multiplying factor 2g - 2 + (n-1) together with the reduced vector.
inline std::pair<Rational, ExponentVector> dilaton_apply(unsigned g, const ExponentVector& e,
                                                         std::size_t i) {
    if (i >= e.size())
        throw input_error("dilaton index out of range");
    if (e[i] != 1)
        throw input_error("dilaton equation needs an entry equal to 1");
    if (e.size() < 2 || !is_stable(g, static_cast<unsigned>(e.size()) - 1))
        throw input_error("dilaton reduction would leave an unstable space");
    ExponentVector reduced;
    reduced.reserve(e.size() - 1);
    for (std::size_t k = 0; k < e.size(); ++k)
        if (k != i)
            reduced.push_back(e[k]);
    const unsigned factor = 2 * g - 2 + static_cast<unsigned>(e.size()) - 1;
    return {Rational(factor), std::move(reduced)};
}

/// Exact evaluation of descendant integrals with a symmetry-aware memo cache.
///
/// Dispatch order: vanishing, genus-0 closed formula (unless disabled),
/// base cases, string equation, dilaton equation, and finally the
/// Dijkgraaf-Verlinde-Verlinde recursion on a maximal entry (needed once all
/// entries are >= 2). All arithmetic is exact rational; no floating point.
class DescendantEngine {
public:
    struct Options {
        /// When false, genus-0 values are forced through the string/recursion
        /// path instead of the closed formula (used to cross-check the two).
        bool genus0_closed_path = true;
        /// Refuse inputs with dimension 3g - 3 + n above this bound.
        unsigned dimension_limit = 60;
    };

    DescendantEngine() = default;
    explicit DescendantEngine(Options opts) : opts_(opts) {}

    /// The integral of prod psi_i^{e_i} over the (g, n) moduli space.
    /// Zero when the total degree misses the dimension; throws on unstable (g, n).
    Rational descendant(unsigned g, const ExponentVector& e) const {
        const ModuliIndex idx(g, static_cast<unsigned>(e.size()));
        if (idx.dimension() > opts_.dimension_limit)
            throw budget_error(std::to_string(idx.dimension()),
                               "dimension " + std::to_string(idx.dimension()) +
                                   " exceeds the configured limit " +
                                   std::to_string(opts_.dimension_limit));
        return value(g, e);
    }

    Rational operator()(unsigned g, const ExponentVector& e) const {
        return descendant(g, e);
    }

    std::size_t cache_size() const {
        std::shared_lock lock(mutex_);
        return cache_.size();
    }

    /// Writes every cached record as `g|e1,...,en|num/den`, lines sorted,
    /// trailing newline included.
    void export_cache(std::ostream& os) const {
        std::vector<std::string> lines;
        {
            std::shared_lock lock(mutex_);
            lines.reserve(cache_.size());
            for (const auto& [key, val] : cache_)
                lines.push_back(format_record(key, val));
        }
        std::sort(lines.begin(), lines.end());
        for (const auto& line : lines)
            os << line << '\n';
    }

    /// Merges records from `is`. A record whose key is already cached with a
    /// different value raises conflict_error; malformed lines raise input_error.
    void import_cache(std::istream& is) {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (line.empty())
                continue;
            auto [key, val] = parse_record(line, lineno);
            std::unique_lock lock(mutex_);
            auto [it, inserted] = cache_.emplace(std::move(key), val);
            if (!inserted && it->second != val)
                throw conflict_error("cache conflict at line " + std::to_string(lineno) +
                                     ": cached " + psidesc::to_string(it->second) +
                                     ", file has " + psidesc::to_string(val));
        }
    }

private:
    Options opts_;
    mutable std::map<DescendantKey, Rational> cache_;
    mutable std::shared_mutex mutex_;

    // Non-throwing evaluation used by the recursion: unstable spaces and
    // degree mismatches contribute 0.
    Rational value(unsigned g, const ExponentVector& e) const {
        const auto n = static_cast<unsigned>(e.size());
        if (n == 0 || !is_stable(g, n))
            return 0;
        if (sum_of(e) != 3 * g - 3 + n)
            return 0;
        DescendantKey key{g, canonical_key(e)};
        {
            std::shared_lock lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end())
                return it->second;
        }
        Rational result = compute(g, key.exponents);
        std::unique_lock lock(mutex_);
        // Duplicate computation yields the identical value, so last write wins.
        cache_.emplace(std::move(key), result);
        return result;
    }

    // e is sorted non-increasing, sums to 3g - 3 + n, and (g, n) is stable.
    Rational compute(unsigned g, const ExponentVector& e) const {
        const auto n = static_cast<unsigned>(e.size());
        if (g == 0 && n == 3)
            return 1;
        if (g == 0 && opts_.genus0_closed_path)
            return genus0_closed(e);
        if (g == 1 && n == 1)
            return Rational(1, 24);
        if (n >= 2 && is_stable(g, n - 1)) {
            if (e.back() == 0) {
                Rational total = 0;
                for (const auto& term : string_apply(g, e, n - 1))
                    total += value(g, term);
                return total;
            }
            if (e.back() == 1) {
                auto [factor, reduced] = dilaton_apply(g, e, n - 1);
                return factor * value(g, reduced);
            }
        }
        return dvv(g, e);
    }

    // Dijkgraaf-Verlinde-Verlinde recursion, pivoting on the maximal entry
    // e[0] = k + 1. Reached only when every entry is >= 2 (or n == 1).
    Rational dvv(unsigned g, const ExponentVector& e) const {
        const unsigned k = e[0] - 1;
        const std::vector<unsigned> rest(e.begin() + 1, e.end());
        const auto m = rest.size();

        Rational total = 0;
        // Contact terms: tau_{k+1} tau_{d_j} -> tau_{k+d_j}.
        for (std::size_t j = 0; j < m; ++j) {
            Int coeff = 1; // (2k + 2d_j + 1)!! / (2d_j - 1)!!
            for (unsigned t = rest[j]; t <= k + rest[j]; ++t)
                coeff *= 2 * t + 1;
            ExponentVector bumped = rest;
            bumped[j] = k + rest[j];
            total += Rational(coeff) * value(g, bumped);
        }

        // Boundary terms: genus reduction and curve splitting.
        Rational boundary = 0;
        for (unsigned a = 0; a + 1 <= k; ++a) {
            const unsigned b = k - 1 - a;
            const Int c_ab = odd_double_factorial(static_cast<int>(a)) *
                             odd_double_factorial(static_cast<int>(b));
            Rational inner = 0;
            if (g >= 1) {
                ExponentVector joined;
                joined.reserve(m + 2);
                joined.push_back(a);
                joined.push_back(b);
                joined.insert(joined.end(), rest.begin(), rest.end());
                inner += value(g - 1, joined);
            }
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
                ExponentVector left{a}, right{b};
                for (std::size_t j = 0; j < m; ++j)
                    ((mask >> j) & 1 ? left : right).push_back(rest[j]);
                for (unsigned gl = 0; gl <= g; ++gl) {
                    Rational lhs = value(gl, left);
                    if (lhs == 0)
                        continue;
                    inner += lhs * value(g - gl, right);
                }
            }
            boundary += Rational(c_ab) * inner;
        }
        total += boundary / 2;
        return total / Rational(odd_double_factorial(static_cast<int>(k) + 1));
    }

    static std::string format_record(const DescendantKey& key, const Rational& val) {
        std::string line = std::to_string(key.g);
        line += '|';
        for (std::size_t t = 0; t < key.exponents.size(); ++t) {
            if (t)
                line += ',';
            line += std::to_string(key.exponents[t]);
        }
        line += '|';
        line += numerator(val).str();
        line += '/';
        line += denominator(val).str();
        return line;
    }

    static std::pair<DescendantKey, Rational> parse_record(const std::string& line,
                                                           std::size_t lineno) {
        const auto bad = [&](const std::string& why) -> input_error {
            return input_error("cache line " + std::to_string(lineno) + ": " + why);
        };
        const auto p1 = line.find('|');
        const auto p2 = line.find('|', p1 == std::string::npos ? p1 : p1 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos)
            throw bad("expected g|exponents|value");
        unsigned g = 0;
        try {
            std::size_t used = 0;
            const int parsed = std::stoi(line.substr(0, p1), &used);
            if (parsed < 0 || used != p1)
                throw bad("invalid genus field");
            g = static_cast<unsigned>(parsed);
        } catch (const std::logic_error&) {
            throw bad("invalid genus field");
        }
        ExponentVector exps;
        std::string field = line.substr(p1 + 1, p2 - p1 - 1);
        std::size_t start = 0;
        while (start <= field.size()) {
            const auto comma = field.find(',', start);
            const auto piece = field.substr(start, comma - start);
            try {
                std::size_t used = 0;
                const int v = std::stoi(piece, &used);
                if (v < 0 || used != piece.size())
                    throw bad("invalid exponent '" + piece + "'");
                exps.push_back(static_cast<unsigned>(v));
            } catch (const std::logic_error&) {
                throw bad("invalid exponent '" + piece + "'");
            }
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (!std::is_sorted(exps.rbegin(), exps.rend()))
            throw bad("exponents must be non-increasing");
        const auto n = static_cast<unsigned>(exps.size());
        if (n == 0 || !is_stable(g, n))
            throw bad("unstable (g, n)");
        if (sum_of(exps) != 3 * g - 3 + n)
            throw bad("degree does not match dimension 3g - 3 + n");
        Rational val = parse_rational(line.substr(p2 + 1));
        return {DescendantKey{g, std::move(exps)}, std::move(val)};
    }
};

} // namespace psidesc
