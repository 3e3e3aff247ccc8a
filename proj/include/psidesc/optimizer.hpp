#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psidesc/compositions.hpp"
#include "psidesc/errors.hpp"
#include "psidesc/rational.hpp"

namespace psidesc {

/// A positive function D on E(n, d) under optimization. The intended contract
/// (symmetry, log-concavity, strict positivity) is never assumed; it is what
/// check_hypotheses verifies.
struct Oracle {
    std::string name;
    std::function<Rational(const ExponentVector&)> evaluate;
    /// Declares D(e . sigma) = D(e); enables memoization per sorted multiset.
    bool symmetric = false;
};

/// Memoizing wrapper around an oracle. Symmetric oracles are keyed on the
/// canonical (sorted) vector, others on the exact vector.
class OracleCache {
public:
    explicit OracleCache(const Oracle& oracle) : oracle_(oracle) {}

    Rational operator()(const ExponentVector& e) {
        ExponentVector key = oracle_.symmetric ? canonical_key(e) : e;
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        Rational v = oracle_.evaluate(e);
        memo_.emplace(std::move(key), v);
        return v;
    }

private:
    const Oracle& oracle_;
    std::map<ExponentVector, Rational> memo_;
};

/// Values S_0, ..., S_q of an oracle along the family that redistributes the
/// total q = e_i + e_j between coordinates i and j (entry i carries t).
struct SliceSequence {
    std::vector<Rational> values;
    std::size_t i = 0;
    std::size_t j = 0;
    ExponentVector base;

    std::size_t q() const { return values.size() - 1; }
};

struct MoveStep {
    ExponentVector vec;
    Rational value;
};

/// Witness of a balancing or concentrating iteration: consecutive vectors
/// differ by one unit transfer and carry their oracle values.
using MoveTrace = std::vector<MoveStep>;

struct Move {
    ExponentVector next;
    Rational value_before;
    Rational value_after;
};

inline SliceSequence slice_sequence(const Oracle& oracle, const CompositionSpace& space,
                                    const ExponentVector& e, std::size_t i, std::size_t j) {
    if (i >= e.size() || j >= e.size())
        throw input_error("slice index out of range");
    if (i == j)
        throw input_error("slice requires distinct indices");
    if (!space.contains(e))
        throw input_error("vector is not in E(n, d)");
    const unsigned q = e[i] + e[j];
    SliceSequence s;
    s.i = i;
    s.j = j;
    s.base = e;
    s.values.reserve(q + 1);
    ExponentVector cur = e;
    for (unsigned t = 0; t <= q; ++t) {
        cur[i] = t;
        cur[j] = q - t;
        s.values.push_back(oracle.evaluate(cur));
    }
    return s;
}

/// S_t = S_{q-t} for all t.
inline bool is_palindromic(const SliceSequence& s) {
    const auto q = s.q();
    for (std::size_t t = 0; 2 * t <= q; ++t)
        if (s.values[t] != s.values[q - t])
            return false;
    return true;
}

/// S_t^2 >= S_{t-1} S_{t+1} at every interior index, compared exactly.
inline bool is_log_concave(const SliceSequence& s) {
    for (const auto& v : s.values)
        if (v <= 0)
            throw input_error("log-concavity check needs strictly positive values");
    for (std::size_t t = 1; t + 1 < s.values.size(); ++t)
        if (s.values[t] * s.values[t] < s.values[t - 1] * s.values[t + 1])
            return false;
    return true;
}

/// Weakly increasing below the center, weakly decreasing above it.
inline bool is_unimodal_centered(const SliceSequence& s) {
    const auto q = s.q();
    for (std::size_t t = 0; t < q; ++t) {
        if (2 * t < q && s.values[t] > s.values[t + 1])
            return false;
        if (2 * (t + 1) > q && s.values[t + 1] > s.values[t])
            return false;
    }
    return true;
}

/// One balancing move: transfer a unit from a maximal to a minimal entry when
/// they differ by at least 2. Absent iff e is balanced. Ties break at the
/// lowest index.
inline std::optional<Move> balancing_step(OracleCache& value, const CompositionSpace& space,
                                          const ExponentVector& e) {
    if (!space.contains(e))
        throw input_error("vector is not in E(n, d)");
    const std::size_t i = std::max_element(e.begin(), e.end()) - e.begin();
    const std::size_t j = std::min_element(e.begin(), e.end()) - e.begin();
    if (e[i] < e[j] + 2)
        return std::nullopt;
    ExponentVector next = transfer(e, i, j);
    return Move{next, value(e), value(next)};
}

/// One concentrating move: transfer a unit from the lowest nonzero entry onto
/// the (lowest) maximal entry. Absent iff e is concentrated.
inline std::optional<Move> concentrating_step(OracleCache& value, const CompositionSpace& space,
                                              const ExponentVector& e) {
    if (!space.contains(e))
        throw input_error("vector is not in E(n, d)");
    const std::size_t i = std::max_element(e.begin(), e.end()) - e.begin();
    for (std::size_t j = 0; j < e.size(); ++j) {
        if (j != i && e[j] >= 1) {
            ExponentVector next = transfer(e, j, i);
            return Move{next, value(e), value(next)};
        }
    }
    return std::nullopt;
}

inline std::optional<Move> balancing_step(const Oracle& oracle, const CompositionSpace& space,
                                          const ExponentVector& e) {
    OracleCache value(oracle);
    return balancing_step(value, space, e);
}

inline std::optional<Move> concentrating_step(const Oracle& oracle, const CompositionSpace& space,
                                              const ExponentVector& e) {
    OracleCache value(oracle);
    return concentrating_step(value, space, e);
}

inline MoveTrace balance_iterate(const Oracle& oracle, const CompositionSpace& space,
                                 ExponentVector e) {
    OracleCache value(oracle);
    MoveTrace trace{{e, value(e)}};
    while (auto move = balancing_step(value, space, e)) {
        e = move->next;
        trace.push_back({e, move->value_after});
    }
    return trace;
}

inline MoveTrace concentrate_iterate(const Oracle& oracle, const CompositionSpace& space,
                                     ExponentVector e) {
    OracleCache value(oracle);
    MoveTrace trace{{e, value(e)}};
    while (auto move = concentrating_step(value, space, e)) {
        e = move->next;
        trace.push_back({e, move->value_after});
    }
    return trace;
}

struct Extrema {
    Rational max_value;
    std::vector<ExponentVector> argmax;
    Rational min_value;
    std::vector<ExponentVector> argmin;
};

inline void require_within_budget(const CompositionSpace& space, const Int& budget,
                                  const char* what) {
    const Int size = space.size();
    if (size > budget)
        throw budget_error(size.str(), std::string(what) + " needs " + size.str() +
                                           " evaluations, budget is " + budget.str());
}

/// Exhaustive extrema of the oracle over E(n, d), with complete witness sets,
/// in enumeration order.
inline Extrema brute_force_extrema(const Oracle& oracle, const CompositionSpace& space,
                                   const Int& budget = 1000000) {
    require_within_budget(space, budget, "brute-force search");
    OracleCache value(oracle);
    Extrema ext;
    bool first = true;
    for_each_composition(space, [&](const ExponentVector& e) {
        const Rational v = value(e);
        if (first || v > ext.max_value) {
            ext.max_value = v;
            ext.argmax.clear();
        }
        if (v == ext.max_value)
            ext.argmax.push_back(e);
        if (first || v < ext.min_value) {
            ext.min_value = v;
            ext.argmin.clear();
        }
        if (v == ext.min_value)
            ext.argmin.push_back(e);
        first = false;
    });
    return ext;
}

struct HypothesisCheck {
    bool holds = true;
    std::string witness; // first counterexample, empty if none
};

/// Outcome of checking (S) symmetry, (LC) log-concavity, (P) positivity.
struct HypothesisReport {
    HypothesisCheck symmetry;
    HypothesisCheck log_concavity;
    HypothesisCheck positivity;

    bool all_hold() const {
        return symmetry.holds && log_concavity.holds && positivity.holds;
    }
};

/// Exhaustively verifies the three hypotheses of the optimization theorem on
/// E(n, d), recording the first counterexample for each failed condition.
inline HypothesisReport check_hypotheses(const Oracle& oracle, const CompositionSpace& space,
                                         const Int& budget = 1000000) {
    require_within_budget(space, budget, "hypothesis check");
    // (S) is checked against the raw oracle, so memoize per exact vector here.
    Oracle exact{oracle.name, oracle.evaluate, false};
    OracleCache value(exact);
    std::map<ExponentVector, std::pair<ExponentVector, Rational>> orbit_rep;
    HypothesisReport report;
    for_each_composition(space, [&](const ExponentVector& e) {
        const Rational v = value(e);
        if (report.positivity.holds && v <= 0) {
            report.positivity.holds = false;
            report.positivity.witness =
                "D" + to_string(e) + " = " + to_string(v) + " is not positive";
        }
        if (report.symmetry.holds) {
            auto key = canonical_key(e);
            auto [it, inserted] = orbit_rep.emplace(key, std::make_pair(e, v));
            if (!inserted && it->second.second != v) {
                report.symmetry.holds = false;
                report.symmetry.witness = "D" + to_string(e) + " = " + to_string(v) +
                                          " but D" + to_string(it->second.first) + " = " +
                                          to_string(it->second.second);
            }
        }
        if (report.log_concavity.holds) {
            for (std::size_t i = 0; i < e.size() && report.log_concavity.holds; ++i) {
                for (std::size_t j = i + 1; j < e.size(); ++j) {
                    if (e[i] == 0 || e[j] == 0)
                        continue;
                    const Rational down = value(transfer(e, i, j));
                    const Rational up = value(transfer(e, j, i));
                    if (v * v < down * up) {
                        report.log_concavity.holds = false;
                        report.log_concavity.witness =
                            "D" + to_string(e) + "^2 < neighbours' product at indices (" +
                            std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
                        break;
                    }
                }
            }
        }
    });
    return report;
}

} // namespace psidesc
