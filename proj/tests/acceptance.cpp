// Acceptance suite: runs every acceptance criterion at its stated tolerance
// (all comparisons are exact rational equality) and prints one line per
// criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "psidesc/compositions.hpp"
#include "psidesc/descendants.hpp"
#include "psidesc/optimizer.hpp"
#include "psidesc/verify.hpp"

using namespace psidesc;

namespace {

std::string g_detail;

Oracle memoized(Oracle oracle) {
    auto memo = std::make_shared<std::map<ExponentVector, Rational>>();
    auto inner = std::make_shared<Oracle>(std::move(oracle));
    return {inner->name,
            [memo, inner](const ExponentVector& e) {
                ExponentVector key = inner->symmetric ? canonical_key(e) : e;
                if (auto it = memo->find(key); it != memo->end())
                    return it->second;
                Rational v = inner->evaluate(e);
                memo->emplace(std::move(key), v);
                return v;
            },
            inner->symmetric};
}

Oracle descendant_oracle(const DescendantEngine& engine, unsigned g) {
    return {"descendant(g=" + std::to_string(g) + ")",
            [&engine, g](const ExponentVector& e) { return engine.descendant(g, e); }, true};
}

// Random oracle of product form D(e) = prod f(e_k) with f positive and
// log-concave by construction (weakly decreasing consecutive ratios), which
// guarantees (S), (LC), (P).
Oracle random_product_oracle(unsigned d, std::mt19937_64& rng) {
    std::vector<Rational> ratios(d);
    std::uniform_int_distribution<int> num(1, 40), den(1, 40);
    for (auto& r : ratios)
        r = Rational(num(rng), den(rng));
    std::sort(ratios.begin(), ratios.end(), std::greater<Rational>());
    std::vector<Rational> f{1};
    for (unsigned t = 0; t < d; ++t)
        f.push_back(f.back() * ratios[t]);
    return {"product", [f](const ExponentVector& e) {
                Rational v = 1;
                for (unsigned x : e)
                    v *= f[x];
                return v;
            },
            true};
}

// 1: engine with the genus-0 fast path disabled equals the closed formula on
//    E(n, n-3) for 3 <= n <= 8.
bool genus0_agreement() {
    const DescendantEngine forced({/*genus0_closed_path=*/false, 60});
    for (unsigned n = 3; n <= 8; ++n) {
        bool ok = true;
        for_each_composition(CompositionSpace(n, n - 3), [&](const ExponentVector& e) {
            if (forced.descendant(0, e) != genus0_closed(e)) {
                g_detail = "mismatch at " + to_string(e);
                ok = false;
            }
        });
        if (!ok)
            return false;
    }
    return true;
}

// 2: one-point values 1/(24^g g!) for 1 <= g <= 6.
bool one_point_values() {
    const DescendantEngine engine;
    for (unsigned g = 1; g <= 6; ++g) {
        if (engine.descendant(g, {3 * g - 2}) != one_point_value(g)) {
            g_detail = "g = " + std::to_string(g);
            return false;
        }
    }
    return true;
}

// 3: extremal theorem over all stable (g, n) with g <= 4, n <= 7.
bool extremal_range() {
    const DescendantEngine engine;
    const auto reports = verify_range(engine, 4, 7, /*budget=*/Int(100000));
    for (const auto& r : reports) {
        if (r.refused) {
            g_detail = "(g=" + std::to_string(r.g) + ", n=" + std::to_string(r.n) +
                       ") refused: " + r.refusal;
            return false;
        }
        if (!r.passed) {
            g_detail = "(g=" + std::to_string(r.g) + ", n=" + std::to_string(r.n) +
                       "): " + r.failure;
            return false;
        }
    }
    return !reports.empty();
}

// 4: (S), (LC), (P) for the descendant oracle, all stable (g, n), g <= 3, n <= 6.
bool hypothesis_suite() {
    const DescendantEngine engine;
    for (unsigned g = 0; g <= 3; ++g) {
        for (unsigned n = 1; n <= 6; ++n) {
            if (!is_stable(g, n))
                continue;
            const CompositionSpace space(n, 3 * g - 3 + n);
            const auto rep = check_hypotheses(descendant_oracle(engine, g), space, Int(100000));
            if (!rep.all_hold()) {
                g_detail = "(g=" + std::to_string(g) + ", n=" + std::to_string(n) + "): " +
                           rep.symmetry.witness + rep.log_concavity.witness +
                           rep.positivity.witness;
                return false;
            }
        }
    }
    return true;
}

// 5: string/dilaton identities exhaustive for g <= 3, n <= 5; the
//    dilaton-regime identity for g = 2, 3 <= n <= 6.
bool identity_suite() {
    const DescendantEngine engine;
    for (unsigned g = 0; g <= 3; ++g) {
        for (unsigned n = 1; n <= 5; ++n) {
            if (!is_stable(g, n))
                continue;
            const CompositionSpace space(n, 3 * g - 3 + n);
            const auto size = space.size();
            const auto rep = verify_identities(engine, g, n,
                                               static_cast<std::size_t>(size), 1);
            if (!rep.exhaustive || !rep.string_ok || !rep.dilaton_ok ||
                !rep.one_point_ok.value_or(true)) {
                g_detail = "(g=" + std::to_string(g) + ", n=" + std::to_string(n) + "): " +
                           rep.witness;
                return false;
            }
        }
    }
    for (unsigned n = 3; n <= 6; ++n) {
        ExponentVector lhs(n, 1);
        lhs[n - 3] = lhs[n - 2] = lhs[n - 1] = 2;
        const Rational factor(factorial(2 * 2 - 3 + n), factorial(5 * 2 - 6));
        if (engine.descendant(2, lhs) != factor * engine.descendant(2, {2, 2, 2})) {
            g_detail = "dilaton-regime identity at n = " + std::to_string(n);
            return false;
        }
    }
    return true;
}

// 6: for 200 randomized hypothesis-passing oracles on spaces with n <= 6,
//    d <= 8, iteration from every start matches brute force exactly.
bool optimizer_equivalence() {
    std::mt19937_64 rng(20250823);
    const DescendantEngine engine;

    std::vector<std::pair<Oracle, CompositionSpace>> cases;
    for (unsigned g = 0; g <= 3; ++g) {
        for (unsigned n = 1; n <= 6; ++n) {
            if (!is_stable(g, n) || 3 * g - 3 + n > 8)
                continue;
            cases.emplace_back(descendant_oracle(engine, g),
                               CompositionSpace(n, 3 * g - 3 + n));
        }
    }
    while (cases.size() < 200) {
        const unsigned n = 2 + rng() % 5;
        const unsigned d = 1 + rng() % 8;
        cases.emplace_back(random_product_oracle(d, rng), CompositionSpace(n, d));
    }

    std::size_t index = 0;
    for (const auto& [raw, space] : cases) {
        ++index;
        const Oracle oracle = memoized(raw);
        if (!check_hypotheses(oracle, space).all_hold()) {
            g_detail = "oracle #" + std::to_string(index) + " is not hypothesis-passing";
            return false;
        }
        const auto ext = brute_force_extrema(oracle, space);
        bool ok = true;
        for_each_composition(space, [&](const ExponentVector& start) {
            if (!ok)
                return;
            const auto up = balance_iterate(oracle, space, start);
            if (!is_balanced(up.back().vec) || up.back().value != ext.max_value)
                ok = false;
            const auto down = concentrate_iterate(oracle, space, start);
            if (!is_concentrated(down.back().vec) || down.back().value != ext.min_value)
                ok = false;
            if (!ok)
                g_detail = "oracle #" + std::to_string(index) + " start " + to_string(start);
        });
        if (!ok)
            return false;
    }
    return true;
}

// 7: every slice sequence of the descendant oracle is palindromic,
//    log-concave, and centered-unimodal for stable (g, n), g <= 2, n <= 5.
bool slice_structure() {
    const DescendantEngine engine;
    for (unsigned g = 0; g <= 2; ++g) {
        for (unsigned n = 2; n <= 5; ++n) {
            if (!is_stable(g, n))
                continue;
            const CompositionSpace space(n, 3 * g - 3 + n);
            const Oracle oracle = memoized(descendant_oracle(engine, g));
            bool ok = true;
            for_each_composition(space, [&](const ExponentVector& e) {
                for (std::size_t i = 0; i < n && ok; ++i) {
                    for (std::size_t j = i + 1; j < n && ok; ++j) {
                        const auto s = slice_sequence(oracle, space, e, i, j);
                        if (!is_palindromic(s) || !is_log_concave(s) ||
                            !is_unimodal_centered(s)) {
                            g_detail = "slice at " + to_string(e) + " indices (" +
                                       std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                       "), g = " + std::to_string(g);
                            ok = false;
                        }
                    }
                }
            });
            if (!ok)
                return false;
        }
    }
    return true;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(PSIDESC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 8: cache export/import round trip is bit-exact; a tampered record is
//    rejected, with exit code 1 through the CLI.
bool cache_round_trip() {
    DescendantEngine engine;
    engine.descendant(2, {2, 2, 2});
    engine.descendant(3, {7});
    std::ostringstream out;
    engine.export_cache(out);

    DescendantEngine fresh;
    std::istringstream in(out.str());
    fresh.import_cache(in);
    std::ostringstream out2;
    fresh.export_cache(out2);
    if (out.str() != out2.str()) {
        g_detail = "re-export differs from the original export";
        return false;
    }

    try {
        std::istringstream tampered("2|2,2,2|7/241\n");
        fresh.import_cache(tampered);
        g_detail = "tampered record was accepted";
        return false;
    } catch (const conflict_error&) {
    }

    namespace fs = std::filesystem;
    const auto cache = fs::temp_directory_path() / "psidesc_acceptance_cache.txt";
    const auto bad = fs::temp_directory_path() / "psidesc_acceptance_bad.txt";
    std::ofstream(cache) << out.str();
    std::ofstream(bad) << "2|2,2,2|7/241\n";
    const int code = run_cli("--cache " + cache.string() + " cache import " + bad.string());
    fs::remove(cache);
    fs::remove(bad);
    if (code != 1) {
        g_detail = "CLI conflict exit code was " + std::to_string(code) + ", expected 1";
        return false;
    }
    return true;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<bool()>>> criteria = {
        {"genus-0 oracle agreement (closed formula vs forced recursion, n <= 8)",
         genus0_agreement},
        {"one-point values 1/(24^g g!) for g = 1..6", one_point_values},
        {"extremal theorem verified for all stable (g,n), g <= 4, n <= 7", extremal_range},
        {"hypotheses (S), (LC), (P) for g <= 3, n <= 6", hypothesis_suite},
        {"string/dilaton/dilaton-regime identities", identity_suite},
        {"optimizer equals brute force for 200 randomized oracles", optimizer_equivalence},
        {"slice sequences palindromic, log-concave, centered-unimodal", slice_structure},
        {"cache round trip and tamper rejection", cache_round_trip},
    };

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        g_detail.clear();
        const auto start = std::chrono::steady_clock::now();
        const bool ok = criteria[k].second();
        const auto secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %zu: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", k + 1,
                    criteria[k].first.c_str(), secs, g_detail.empty() ? "" : " -- ",
                    g_detail.c_str());
        std::fflush(stdout);
        if (!ok)
            ++failures;
    }
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
