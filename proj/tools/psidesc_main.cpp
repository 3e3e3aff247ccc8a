// Command-line front end: exact descendant integrals, tabulation, extremal
// search, verification, and cache management.
//
// Exit codes: 0 success, 1 verification failure / budget refusal / cache
// conflict, 2 invalid input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psidesc/compositions.hpp"
#include "psidesc/descendants.hpp"
#include "psidesc/optimizer.hpp"
#include "psidesc/verify.hpp"

namespace {

using namespace psidesc;

struct CliConfig {
    std::uint64_t budget = 1000000;
    unsigned depth = 60;
    std::string cache_path;
    std::string format = "table";
    std::uint64_t seed = 1;
    std::size_t samples = 200;
};

void load_cache(DescendantEngine& engine, const CliConfig& cfg) {
    if (cfg.cache_path.empty())
        return;
    std::ifstream in(cfg.cache_path);
    if (in)
        engine.import_cache(in);
}

void save_cache(const DescendantEngine& engine, const CliConfig& cfg) {
    if (cfg.cache_path.empty())
        return;
    std::ofstream out(cfg.cache_path, std::ios::trunc);
    if (!out)
        throw input_error("cannot write cache file: " + cfg.cache_path);
    engine.export_cache(out);
}

int run_compute(const CliConfig& cfg, unsigned g, const ExponentVector& exps) {
    DescendantEngine engine({true, cfg.depth});
    load_cache(engine, cfg);
    std::cout << to_string(engine.descendant(g, exps)) << '\n';
    save_cache(engine, cfg);
    return 0;
}

int run_table(const CliConfig& cfg, unsigned g, unsigned n) {
    DescendantEngine engine({true, cfg.depth});
    load_cache(engine, cfg);
    const ModuliIndex idx(g, n);
    const CompositionSpace space(n, idx.dimension());
    require_within_budget(space, Int(cfg.budget), "table");
    for_each_composition(space, [&](const ExponentVector& e) {
        std::cout << to_string(e) << ' ' << to_string(engine.descendant(g, e)) << '\n';
    });
    save_cache(engine, cfg);
    return 0;
}

int run_extrema(const CliConfig& cfg, unsigned g, unsigned n) {
    DescendantEngine engine({true, cfg.depth});
    load_cache(engine, cfg);
    const ModuliIndex idx(g, n);
    const CompositionSpace space(n, idx.dimension());
    const Oracle oracle{"descendant",
                        [&](const ExponentVector& e) { return engine.descendant(g, e); }, true};
    const Extrema ext = brute_force_extrema(oracle, space, Int(cfg.budget));
    const auto max_orbits = detail::group_orbits(ext.argmax);
    const auto min_orbits = detail::group_orbits(ext.argmin);
    std::cout << "max " << to_string(ext.max_value) << " at " << to_string(max_orbits[0].first)
              << " [orbit " << max_orbits[0].second.str() << "]\n";
    std::cout << "min " << to_string(ext.min_value) << " at " << to_string(min_orbits[0].first)
              << " [orbit " << min_orbits[0].second.str() << "]\n";
    if (ext.max_value == ext.min_value)
        std::cout << "plateau: all of E(" << n << "," << idx.dimension()
                  << ") attains the same value\n";
    else if (max_orbits.size() > 1 || min_orbits.size() > 1)
        std::cout << "plateau: " << max_orbits.size() << " argmax orbit(s), "
                  << min_orbits.size() << " argmin orbit(s)\n";
    save_cache(engine, cfg);
    return 0;
}

int run_verify(const CliConfig& cfg, unsigned g_max, unsigned n_max) {
    DescendantEngine engine({true, cfg.depth});
    load_cache(engine, cfg);
    const auto reports =
        verify_range(engine, g_max, n_max, Int(cfg.budget), cfg.samples, cfg.seed);
    std::cout << emit_report(reports, cfg.format);
    if (reports.empty())
        std::cout << "no stable (g,n) in range; PASS vacuously\n";
    save_cache(engine, cfg);
    return all_passed(reports) ? 0 : 1;
}

int run_identities(const CliConfig& cfg, unsigned g, unsigned n) {
    DescendantEngine engine({true, cfg.depth});
    load_cache(engine, cfg);
    const auto rep = verify_identities(engine, g, n, cfg.samples, cfg.seed);
    std::cout << "g=" << g << " n=" << n << " seed=" << rep.seed
              << (rep.exhaustive ? " exhaustive" : " sampled") << " vectors="
              << rep.vectors_checked << '\n';
    std::cout << "string:  " << (rep.string_ok ? "ok" : "FAIL") << " (" << rep.string_checks
              << " checks)\n";
    std::cout << "dilaton: " << (rep.dilaton_ok ? "ok" : "FAIL") << " (" << rep.dilaton_checks
              << " checks)\n";
    if (rep.one_point_ok)
        std::cout << "one-point: " << (*rep.one_point_ok ? "ok" : "FAIL") << '\n';
    if (rep.dilaton_regime_ok)
        std::cout << "dilaton-regime: " << (*rep.dilaton_regime_ok ? "ok" : "FAIL") << '\n';
    if (!rep.all_hold())
        std::cout << "witness: " << rep.witness << '\n';
    save_cache(engine, cfg);
    return rep.all_hold() ? 0 : 1;
}

int run_cache(const CliConfig& cfg, const std::string& action, const std::string& path) {
    DescendantEngine engine({true, cfg.depth});
    load_cache(engine, cfg);
    if (action == "export") {
        std::ofstream out(path, std::ios::trunc);
        if (!out)
            throw input_error("cannot write cache file: " + path);
        engine.export_cache(out);
        return 0;
    }
    if (action == "import") {
        std::ifstream in(path);
        if (!in)
            throw input_error("cannot read cache file: " + path);
        engine.import_cache(in);
        save_cache(engine, cfg);
        return 0;
    }
    throw input_error("cache action must be 'export' or 'import'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact psi-class descendant integrals and extremal verification"};
    app.require_subcommand(1);

    CliConfig cfg;
    app.add_option("--budget", cfg.budget, "Maximum space size for exhaustive operations")
        ->check(CLI::PositiveNumber);
    app.add_option("--depth", cfg.depth, "Maximum dimension 3g-3+n accepted by the engine")
        ->check(CLI::PositiveNumber);
    app.add_option("--cache", cfg.cache_path, "Cache file loaded at start, written back on exit");
    app.add_option("--format", cfg.format, "Report format for verify")
        ->check(CLI::IsMember({"table", "csv"}));
    app.add_option("--seed", cfg.seed, "Seed for deterministic identity sampling");
    app.add_option("--samples", cfg.samples, "Sample count for identity checks");

    unsigned g = 0, n = 1, g_max = 0, n_max = 1;
    ExponentVector exps;
    std::string cache_action, cache_file;

    auto* compute = app.add_subcommand("compute", "Evaluate one descendant integral");
    compute->add_option("--g", g, "Genus")->required();
    compute->add_option("exponents", exps, "Exponents e_1 ... e_n")->required()->expected(-1);

    auto* table = app.add_subcommand("table", "Tabulate all values over E(n, 3g-3+n)");
    table->add_option("--g", g, "Genus")->required();
    table->add_option("--n", n, "Number of marked points")->required();

    auto* extrema = app.add_subcommand("extrema", "Exhaustive max/min with witnesses");
    extrema->add_option("--g", g, "Genus")->required();
    extrema->add_option("--n", n, "Number of marked points")->required();

    auto* verify = app.add_subcommand("verify", "Verify the extremal theorem over a range");
    verify->add_option("--gmax", g_max, "Largest genus")->required();
    verify->add_option("--nmax", n_max, "Largest number of marked points")->required();

    auto* identities = app.add_subcommand("identities", "Check string/dilaton identities");
    identities->add_option("--g", g, "Genus")->required();
    identities->add_option("--n", n, "Number of marked points")->required();

    auto* cache = app.add_subcommand("cache", "Export or import the descendant cache");
    cache->add_option("action", cache_action, "export or import")->required();
    cache->add_option("path", cache_file, "Cache file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*compute)
            return run_compute(cfg, g, exps);
        if (*table)
            return run_table(cfg, g, n);
        if (*extrema)
            return run_extrema(cfg, g, n);
        if (*verify)
            return run_verify(cfg, g_max, n_max);
        if (*identities)
            return run_identities(cfg, g, n);
        if (*cache)
            return run_cache(cfg, cache_action, cache_file);
    } catch (const psidesc::input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const psidesc::conflict_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const psidesc::budget_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
