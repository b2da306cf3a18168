#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "brwre/errors.hpp"
#include "brwre/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"brwre: simulation and verification lab for branching random walks with a "
                 "barrier in a time-inhomogeneous random environment"};
    app.require_subcommand(1);

    brwre::RunOptions options;
    std::string seed_text;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", options.config_path, "experiment config file")->required();
        sub->add_option("--seed", seed_text, "root seed (overrides [seeds].root)");
        sub->add_option("--workers", options.workers, "worker thread count (never affects outputs)")
            ->default_val(1);
        sub->add_option("--out-dir", options.out_dir, "output directory")->default_val(".");
        sub->add_flag("--dry-run", options.dry_run, "validate inputs without computing");
    };

    const std::map<std::string, std::string> descriptions = {
        {"check-env",
         "assumption report; check_env.csv columns: condition, verdict, witness, lambda5, detail"},
        {"critical",
         "critical tilt; critical.csv columns: vartheta, kappa0, kappa_at, sigma2, sigma2_star, "
         "residual"},
        {"mto-check",
         "oracle equality table; mto_check.csv columns: case, genealogy, spine_dp, rel_err, pass"},
        {"survival",
         "quenched survival; survival.csv columns: n, d, alpha, estimate, stderr, "
         "truncated_fraction, seed"},
        {"corridor",
         "corridor probability; corridor.csv columns: n, y_n, half_width, mode, log_p, p, stderr, "
         "seed"},
        {"rate",
         "small-deviation rates; rate.csv columns: n, y_n, env_index, log_p, normalized_rate, "
         "mode"},
        {"rate-experiment",
         "extinction rates; rate_rows.csv columns: n, d, alpha, env_index, estimate, stderr, a_n, "
         "censored, truncated_fraction; rate_summary.csv columns: n, d, alpha, environments, "
         "mean_a, median_a, spread_a, censored_fraction, out_of_hypothesis"},
        {"lp-experiment",
         "moment trends; lp_rows.csv columns: n, moment_p, moment, stderr, censored, "
         "zero_fraction; lp_summary.csv columns: slope_vs_n, t_vs_n, slope_vs_cbrt, t_vs_cbrt, "
         "out_of_hypothesis"},
        {"approx-check",
         "maximal-inequality harness; approx.csv columns: l, m, beta, empirical, stderr, "
         "bound_fitted"},
    };
    for (const char* name : brwre::kSubcommands)
        add_common(app.add_subcommand(name, descriptions.at(name)));

    CLI::App* survival = app.get_subcommand("survival");
    std::string env_replay, env_out;
    double d_flag = -1.0, alpha_flag = -1.0;
    std::size_t n_flag = 0, replicates_flag = 0;
    std::uint64_t pop_cap_flag = 0;
    survival->add_option("--env", env_replay, "environment replay file to load");
    survival->add_option("--env-out", env_out, "write the sampled environment replay file");
    survival->add_option("--d", d_flag, "barrier offset d");
    survival->add_option("--alpha", alpha_flag, "barrier exponent alpha");
    survival->add_option("--n", n_flag, "horizon n");
    survival->add_option("--replicates", replicates_flag, "Monte Carlo replicates");
    survival->add_option("--population-cap", pop_cap_flag, "population cap");

    CLI11_PARSE(app, argc, argv);

    CLI::App* chosen = app.get_subcommands().front();
    if (!seed_text.empty()) options.seed_override = std::stoull(seed_text);
    if (chosen == survival) {
        if (!env_replay.empty()) options.env_replay = env_replay;
        if (!env_out.empty()) options.env_out = env_out;
        if (survival->count("--d")) options.d_override = d_flag;
        if (survival->count("--alpha")) options.alpha_override = alpha_flag;
        if (survival->count("--n")) options.n_override = n_flag;
        if (survival->count("--replicates")) options.replicates_override = replicates_flag;
        if (survival->count("--population-cap")) options.population_cap_override = pop_cap_flag;
    }

    try {
        return brwre::run_subcommand(chosen->get_name(), options);
    } catch (const brwre::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const brwre::BudgetError& e) {
        std::fprintf(stderr, "budget error: %s\n", e.what());
        return 3;
    } catch (const brwre::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
