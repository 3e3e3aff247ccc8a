#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "psidesc/compositions.hpp"
#include "psidesc/descendants.hpp"
#include "psidesc/errors.hpp"
#include "psidesc/optimizer.hpp"
#include "psidesc/rational.hpp"

namespace psidesc {

/// Exact identity checks (string, dilaton, one-point, dilaton-regime) for one
/// moduli index, over an exhaustive or seeded sample of E(n, d).
struct IdentityReport {
    unsigned g = 0;
    unsigned n = 0;
    std::uint64_t seed = 0;
    bool exhaustive = false;
    std::size_t vectors_checked = 0;
    std::size_t string_checks = 0;
    std::size_t dilaton_checks = 0;
    bool string_ok = true;
    bool dilaton_ok = true;
    std::optional<bool> one_point_ok;      // present when n == 1
    std::optional<bool> dilaton_regime_ok; // present when g >= 2 and n >= 3g - 3
    std::string witness;

    bool all_hold() const {
        return string_ok && dilaton_ok && one_point_ok.value_or(true) &&
               dilaton_regime_ok.value_or(true);
    }
};

namespace detail {

/// Deterministic random element of E(n, d): sorted cut points on [0, d].
inline ExponentVector random_composition(const CompositionSpace& space, std::mt19937_64& rng) {
    std::vector<unsigned> cuts(space.n - 1);
    std::uniform_int_distribution<unsigned> dist(0, space.d);
    for (auto& c : cuts)
        c = dist(rng);
    std::sort(cuts.begin(), cuts.end());
    ExponentVector e(space.n);
    unsigned prev = 0;
    for (unsigned k = 0; k + 1 < space.n; ++k) {
        e[k] = cuts[k] - prev;
        prev = cuts[k];
    }
    e[space.n - 1] = space.d - prev;
    return e;
}

} // namespace detail

inline IdentityReport verify_identities(const DescendantEngine& engine, unsigned g, unsigned n,
                                        std::size_t samples = 200, std::uint64_t seed = 1) {
    const ModuliIndex idx(g, n);
    const unsigned d = idx.dimension();
    const CompositionSpace space(n, d);

    IdentityReport rep;
    rep.g = g;
    rep.n = n;
    rep.seed = seed;

    const auto check_vector = [&](const ExponentVector& e) {
        ++rep.vectors_checked;
        const Rational lhs = engine.descendant(g, e);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0 && n >= 2 && is_stable(g, n - 1)) {
                Rational rhs = 0;
                for (const auto& term : string_apply(g, e, i))
                    rhs += engine.descendant(g, term);
                ++rep.string_checks;
                if (rep.string_ok && lhs != rhs) {
                    rep.string_ok = false;
                    rep.witness = "string identity fails at " + to_string(e) +
                                  " index " + std::to_string(i + 1);
                }
            }
            if (e[i] == 1 && n >= 2 && is_stable(g, n - 1)) {
                auto [factor, reduced] = dilaton_apply(g, e, i);
                ++rep.dilaton_checks;
                if (rep.dilaton_ok && lhs != factor * engine.descendant(g, reduced)) {
                    rep.dilaton_ok = false;
                    rep.witness = "dilaton identity fails at " + to_string(e) +
                                  " index " + std::to_string(i + 1);
                }
            }
        }
    };

    if (space.size() <= Int(samples)) {
        rep.exhaustive = true;
        for_each_composition(space, check_vector);
    } else {
        std::mt19937_64 rng(seed);
        for (std::size_t s = 0; s < samples; ++s)
            check_vector(detail::random_composition(space, rng));
    }

    if (n == 1 && g >= 1) {
        rep.one_point_ok = engine.descendant(g, {3 * g - 2}) == one_point_value(g);
        if (!*rep.one_point_ok && rep.witness.empty())
            rep.witness = "one-point value differs from 1/(24^g g!)";
    }

    // All entries reducible to (2, ..., 2) by the dilaton equation: requires
    // g >= 2 and at least 3g - 3 parts.
    if (g >= 2 && n >= 3 * g - 3) {
        ExponentVector lhs_vec(n, 1);
        for (unsigned k = 0; k < 3 * g - 3; ++k)
            lhs_vec[n - 1 - k] = 2;
        const ExponentVector base(3 * g - 3, 2);
        const Rational factor(factorial(2 * g - 3 + n), factorial(5 * g - 6));
        rep.dilaton_regime_ok =
            engine.descendant(g, lhs_vec) == factor * engine.descendant(g, base);
        if (!*rep.dilaton_regime_ok && rep.witness.empty())
            rep.witness = "dilaton-regime identity fails at " + to_string(lhs_vec);
    }

    return rep;
}

/// Everything established about one (g, n): extrema with witness orbits,
/// hypothesis checks, identity checks, and the overall verdict.
struct VerificationReport {
    unsigned g = 0;
    unsigned n = 0;
    unsigned d = 0;
    Int space_size = 0;
    bool refused = false;
    std::string refusal;

    Rational max_value;
    Rational min_value;
    std::vector<std::pair<ExponentVector, Int>> argmax_orbits; // canonical key, orbit size
    std::vector<std::pair<ExponentVector, Int>> argmin_orbits;
    bool max_plateau = false; // argmax spans more than one permutation orbit
    bool min_plateau = false;

    HypothesisReport hypotheses;
    IdentityReport identities;

    bool passed = false;
    std::string failure;
};

namespace detail {

inline std::vector<std::pair<ExponentVector, Int>>
group_orbits(const std::vector<ExponentVector>& witnesses) {
    std::map<ExponentVector, Int> seen;
    for (const auto& e : witnesses)
        seen.emplace(canonical_key(e), orbit_size(e));
    return {seen.begin(), seen.end()};
}

} // namespace detail

/// Exhaustive verification of the extremal theorem for one (g, n): the max
/// must be attained on a balanced vector and the min on the concentrated
/// orbit with value 1/(24^g g!) (value 1 at g = 0).
inline VerificationReport verify_extremal(const DescendantEngine& engine, unsigned g, unsigned n,
                                          const Int& budget = 1000000,
                                          std::size_t identity_samples = 200,
                                          std::uint64_t seed = 1) {
    const ModuliIndex idx(g, n);
    VerificationReport rep;
    rep.g = g;
    rep.n = n;
    rep.d = idx.dimension();
    const CompositionSpace space(n, rep.d);
    rep.space_size = space.size();
    require_within_budget(space, budget, "extremal verification");

    const Oracle oracle{
        "descendant(g=" + std::to_string(g) + ")",
        [&engine, g](const ExponentVector& e) { return engine.descendant(g, e); },
        true};

    const Extrema ext = brute_force_extrema(oracle, space, budget);
    rep.max_value = ext.max_value;
    rep.min_value = ext.min_value;
    rep.argmax_orbits = detail::group_orbits(ext.argmax);
    rep.argmin_orbits = detail::group_orbits(ext.argmin);
    rep.max_plateau = rep.argmax_orbits.size() > 1;
    rep.min_plateau = rep.argmin_orbits.size() > 1;

    const bool max_on_balanced =
        std::any_of(rep.argmax_orbits.begin(), rep.argmax_orbits.end(),
                    [](const auto& o) { return is_balanced(o.first); });
    const ExponentVector concentrated = canonical_key(concentrated_representative(space));
    const bool min_on_concentrated =
        std::any_of(rep.argmin_orbits.begin(), rep.argmin_orbits.end(),
                    [&](const auto& o) { return o.first == concentrated; });
    const Rational expected_min = g >= 1 ? one_point_value(g) : Rational(1);

    rep.hypotheses = check_hypotheses(oracle, space, budget);
    rep.identities = verify_identities(engine, g, n, identity_samples, seed);

    if (!max_on_balanced)
        rep.failure = "maximum not attained on any balanced vector";
    else if (!min_on_concentrated)
        rep.failure = "minimum not attained on the concentrated orbit";
    else if (rep.min_value != expected_min)
        rep.failure = "minimum value is " + to_string(rep.min_value) + ", expected " +
                      to_string(expected_min);
    else if (!rep.hypotheses.all_hold())
        rep.failure = "hypothesis check failed";
    else if (!rep.identities.all_hold())
        rep.failure = "identity check failed: " + rep.identities.witness;
    rep.passed = rep.failure.empty();
    return rep;
}

/// Runs verify_extremal over every stable (g, n) with g <= g_max, n <= n_max,
/// ordered by (g, n). Budget refusals are recorded in the report, not fatal.
inline std::vector<VerificationReport> verify_range(const DescendantEngine& engine,
                                                    unsigned g_max, unsigned n_max,
                                                    const Int& budget = 1000000,
                                                    std::size_t identity_samples = 200,
                                                    std::uint64_t seed = 1) {
    std::vector<VerificationReport> reports;
    for (unsigned g = 0; g <= g_max; ++g) {
        for (unsigned n = 1; n <= n_max; ++n) {
            if (!is_stable(g, n))
                continue;
            try {
                reports.push_back(verify_extremal(engine, g, n, budget, identity_samples, seed));
            } catch (const budget_error& err) {
                VerificationReport rep;
                rep.g = g;
                rep.n = n;
                rep.d = 3 * g - 3 + n;
                rep.space_size = CompositionSpace(n, rep.d).size();
                rep.refused = true;
                rep.refusal = err.what();
                reports.push_back(std::move(rep));
            }
        }
    }
    return reports;
}

inline bool all_passed(const std::vector<VerificationReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const auto& r) { return r.refused || r.passed; });
}

namespace detail {

inline std::string key_field(const std::vector<std::pair<ExponentVector, Int>>& orbits) {
    if (orbits.empty())
        return "-";
    std::string s;
    for (std::size_t t = 0; t < orbits.front().first.size(); ++t) {
        if (t)
            s += ' ';
        s += std::to_string(orbits.front().first[t]);
    }
    if (orbits.size() > 1)
        s += " (+" + std::to_string(orbits.size() - 1) + " orbit plateau)";
    return s;
}

inline const char* mark(bool ok) { return ok ? "ok" : "FAIL"; }

} // namespace detail

/// Renders reports as a fixed-width table or CSV. Output is deterministic:
/// identical inputs produce byte-identical documents.
inline std::string emit_report(const std::vector<VerificationReport>& reports,
                               const std::string& format) {
    std::ostringstream os;
    if (format == "csv") {
        os << "g,n,d,space_size,max,argmax_key,min,argmin_key,S,LC,P,status\n";
        for (const auto& r : reports) {
            os << r.g << ',' << r.n << ',' << r.d << ',' << r.space_size << ',';
            if (r.refused) {
                os << ",,,,,,," << "REFUSED\n";
                continue;
            }
            os << to_string(r.max_value) << ',' << detail::key_field(r.argmax_orbits) << ','
               << to_string(r.min_value) << ',' << detail::key_field(r.argmin_orbits) << ','
               << detail::mark(r.hypotheses.symmetry.holds) << ','
               << detail::mark(r.hypotheses.log_concavity.holds) << ','
               << detail::mark(r.hypotheses.positivity.holds) << ','
               << (r.passed ? "PASS" : "FAIL") << '\n';
        }
        return os.str();
    }
    if (format != "table")
        throw input_error("unknown report format: " + format);

    os << std::left << std::setw(4) << "g" << std::setw(4) << "n" << std::setw(4) << "d"
       << std::setw(10) << "size" << std::setw(16) << "max" << std::setw(28) << "argmax"
       << std::setw(16) << "min" << std::setw(28) << "argmin" << std::setw(4) << "S"
       << std::setw(5) << "LC" << std::setw(4) << "P"
       << "status\n";
    for (const auto& r : reports) {
        os << std::left << std::setw(4) << r.g << std::setw(4) << r.n << std::setw(4) << r.d
           << std::setw(10) << r.space_size.str();
        if (r.refused) {
            os << "REFUSED: " << r.refusal << '\n';
            continue;
        }
        os << std::setw(16) << to_string(r.max_value) << std::setw(28)
           << detail::key_field(r.argmax_orbits) << std::setw(16) << to_string(r.min_value)
           << std::setw(28) << detail::key_field(r.argmin_orbits) << std::setw(4)
           << detail::mark(r.hypotheses.symmetry.holds) << std::setw(5)
           << detail::mark(r.hypotheses.log_concavity.holds) << std::setw(4)
           << detail::mark(r.hypotheses.positivity.holds)
           << (r.passed ? "PASS" : "FAIL: " + r.failure) << '\n';
    }
    return os.str();
}

} // namespace psidesc
