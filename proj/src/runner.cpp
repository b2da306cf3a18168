#include "brwre/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>

#include "brwre/approx.hpp"
#include "brwre/config.hpp"
#include "brwre/errors.hpp"
#include "brwre/experiments.hpp"
#include "brwre/manifest.hpp"
#include "brwre/rwre.hpp"
#include "brwre/spine.hpp"

namespace brwre {

const char* const kSubcommands[9] = {"check-env", "critical",       "mto-check",
                                     "survival",  "corridor",       "rate",
                                     "rate-experiment", "lp-experiment", "approx-check"};
const char* const kArtifactVersion = "brwre-lab 1.0.0";

namespace {

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

struct RunContext {
    Config config;
    std::string subcommand;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir;
    bool dry_run = false;
    std::vector<std::string> outputs;

    std::string out_path(const std::string& name) const {
        return (std::filesystem::path(out_dir) / name).string();
    }

    void finish() {
        if (dry_run) return;
        RunManifest manifest;
        manifest.config_digest = fnv1a_hex(config.text());
        manifest.root_seed = seed;
        manifest.version = kArtifactVersion;
        manifest.timestamp = utc_timestamp();
        manifest.subcommand = subcommand;
        manifest.outputs = outputs;
        std::string name = subcommand;
        std::replace(name.begin(), name.end(), '-', '_');
        save_manifest(manifest, out_path(name + "_manifest.json"));
    }
};

AssumptionParams params_from_config(const Config& config) {
    AssumptionParams params;
    params.lambda0 = config.get_double("experiment", "lambda0", params.lambda0);
    params.lambda1 = config.get_double("experiment", "lambda1", params.lambda1);
    params.lambda2 = config.get_double("experiment", "lambda2", params.lambda2);
    params.lambda3 = config.get_double("experiment", "lambda3", params.lambda3);
    params.lambda4 = config.get_double("experiment", "lambda4", params.lambda4);
    params.lambda5 = config.has("experiment", "lambda5")
                         ? config.get_double("experiment", "lambda5", -8.0)
                         : std::numeric_limits<double>::quiet_NaN();  // scan
    params.lambda6 = config.get_double("experiment", "lambda6", params.lambda6);
    return params;
}

int run_check_env(RunContext& ctx) {
    const auto envlaw = ctx.config.environment();
    if (ctx.dry_run) return 0;
    const CriticalProfile profile = find_critical_theta(*envlaw);
    const AssumptionReport report = assumption_report(*envlaw, profile, params_from_config(ctx.config));

    std::printf("critical tilt vartheta = %.12g   kappa(0) = %.12g   sigma^2 = %.6g   sigma_*^2 = %.6g\n",
                profile.vartheta, profile.kappa0, profile.sigma2, profile.sigma2_star);
    std::printf("lambda5 = %g%s\n", report.lambda5_used,
                report.lambda5_scanned ? " (scanned)" : "");
    std::printf("%-18s %-12s %-16s %s\n", "condition", "verdict", "witness", "detail");
    for (const auto& c : report.conditions)
        std::printf("%-18s %-12s %-16.8g %s\n", c.key.c_str(), to_string(c.verdict).c_str(),
                    c.witness, c.detail.c_str());
    std::printf("overall: %s\n", report.all_satisfied ? "all satisfied" : "violations present");

    CsvWriter csv(ctx.out_path("check_env.csv"),
                  {"condition", "verdict", "witness", "lambda5", "detail"});
    for (const auto& c : report.conditions)
        csv.row({c.key, to_string(c.verdict), format_double(c.witness),
                 format_double(report.lambda5_used), c.detail});
    csv.close();
    ctx.outputs.push_back(csv.path());
    return 0;
}

int run_critical(RunContext& ctx) {
    const auto envlaw = ctx.config.environment();
    if (ctx.dry_run) return 0;
    const CriticalProfile profile = find_critical_theta(*envlaw);
    const AnnealedProfile at = annealed_profile(*envlaw, profile.vartheta);
    const double residual = at.kappa - profile.vartheta * at.d1;
    std::printf("vartheta = %.12g  kappa(0) = %.12g  kappa(vartheta) = %.12g  residual = %.3g\n",
                profile.vartheta, profile.kappa0, profile.kappa_at, residual);
    std::printf("sigma^2 = %.12g  sigma_*^2 = %.12g\n", profile.sigma2, profile.sigma2_star);
    CsvWriter csv(ctx.out_path("critical.csv"),
                  {"vartheta", "kappa0", "kappa_at", "sigma2", "sigma2_star", "residual"});
    csv.row({format_double(profile.vartheta), format_double(profile.kappa0),
             format_double(profile.kappa_at), format_double(profile.sigma2),
             format_double(profile.sigma2_star), format_double(residual)});
    csv.close();
    ctx.outputs.push_back(csv.path());
    return 0;
}

int run_mto_check(RunContext& ctx) {
    const auto envlaw = ctx.config.environment();
    const std::size_t n =
        static_cast<std::size_t>(ctx.config.get_u64("experiment", "mto_n", 3));
    const std::uint64_t budget = ctx.config.get_u64("experiment", "budget", 10'000'000);
    if (ctx.dry_run) return 0;

    double vartheta;
    try {
        vartheta = find_critical_theta(*envlaw).vartheta;
    } catch (const NumericError&) {
        vartheta = 0.5;  // the identity holds at any finite tilt
    }
    const EnvironmentSequence envseq = sample_environment(envlaw, n, ctx.seed);
    const SpineStepTable table(envseq, vartheta);

    // functional family: free, one-sided windows, narrow windows, caps, both
    std::vector<std::pair<std::string, PathFunctional>> cases;
    cases.emplace_back("free", PathFunctional::constant_one());
    const double lo = envlaw->components().front().law.min_displacement().value();
    const double hi = envlaw->components().front().law.max_displacement().value();
    {
        PathFunctional f;
        f.windows = std::vector<std::pair<double, double>>(n, {lo * 0.9 * static_cast<double>(n), hi * static_cast<double>(n)});
        cases.emplace_back("wide-window", f);
    }
    {
        PathFunctional f;
        std::vector<std::pair<double, double>> w;
        for (std::size_t i = 1; i <= n; ++i)
            w.emplace_back(lo * static_cast<double>(i), 0.5 * hi * static_cast<double>(i));
        f.windows = w;
        cases.emplace_back("half-window", f);
    }
    {
        PathFunctional f;
        f.caps = std::vector<double>(n, 2.0);
        cases.emplace_back("cap-2", f);
    }
    {
        PathFunctional f;
        f.windows = std::vector<std::pair<double, double>>(n, {lo * static_cast<double>(n), hi * static_cast<double>(n)});
        f.caps = std::vector<double>(n, 3.0);
        cases.emplace_back("window-cap", f);
    }

    CsvWriter csv(ctx.out_path("mto_check.csv"),
                  {"case", "genealogy", "spine_dp", "rel_err", "pass"});
    bool all_pass = true;
    std::printf("%-14s %-18s %-18s %-12s %s\n", "case", "genealogy", "spine_dp", "rel_err",
                "pass");
    for (const auto& [name, functional] : cases) {
        const double g = exhaustive_oracle(table, functional, n, OracleMode::Genealogy, budget);
        const double s = exhaustive_oracle(table, functional, n, OracleMode::SpineDp, budget);
        const double denom = std::max({std::abs(g), std::abs(s), 1e-300});
        const double rel = std::abs(g - s) / denom;
        const bool pass = rel <= 1e-9;
        all_pass = all_pass && pass;
        std::printf("%-14s %-18.12g %-18.12g %-12.3g %s\n", name.c_str(), g, s, rel,
                    pass ? "pass" : "FAIL");
        csv.row({name, format_double(g), format_double(s), format_double(rel),
                 pass ? "pass" : "fail"});
    }
    csv.close();
    ctx.outputs.push_back(csv.path());
    return all_pass ? 0 : 1;
}

int run_survival(RunContext& ctx, const RunOptions& options) {
    const auto envlaw = ctx.config.environment();
    const std::size_t n = options.n_override.value_or(
        ctx.config.get_sizes("experiment", "n", {64}).front());
    const std::size_t replicates = options.replicates_override.value_or(
        static_cast<std::size_t>(ctx.config.get_u64("experiment", "replicates", 1000)));
    const double d =
        options.d_override.value_or(ctx.config.get_doubles("barrier", "d", {0.1}).front());
    const double alpha = options.alpha_override.value_or(
        ctx.config.get_doubles("barrier", "alpha", {1.0 / 3.0}).front());
    if (ctx.dry_run) return 0;

    const CriticalProfile profile = find_critical_theta(*envlaw);
    EnvironmentSequence envseq =
        options.env_replay ? load_environment(envlaw, *options.env_replay)
                           : sample_environment(envlaw, n, ctx.seed);
    if (envseq.length() < n) throw ConfigError("replayed environment shorter than n");
    if (options.env_out) save_environment(envseq, *options.env_out);

    BarrierSpec barrier{d, alpha, profile.vartheta};
    SimulationCaps caps;
    caps.population_cap =
        options.population_cap_override.value_or(ctx.config.get_u64("experiment", "population_cap", 1'000'000));
    const double cap_exp = ctx.config.get_double("experiment", "offspring_cap_exponent", 0.0);
    if (cap_exp > 0.0)
        caps.offspring_cap = std::exp(std::pow(static_cast<double>(n), cap_exp));

    const SurvivalEstimate est =
        quenched_survival(envseq, &barrier, n, replicates, ctx.seed, caps, ctx.workers);
    std::printf("survival estimate %.8g (stderr %.3g, truncated fraction %.3g)\n",
                est.estimate.value, est.estimate.stderr_, est.truncated_fraction);

    CsvWriter csv(ctx.out_path("survival.csv"),
                  {"n", "d", "alpha", "estimate", "stderr", "truncated_fraction", "seed"});
    csv.row({std::to_string(n), format_double(d), format_double(alpha),
             format_double(est.estimate.value), format_double(est.estimate.stderr_),
             format_double(est.truncated_fraction), std::to_string(ctx.seed)});
    csv.close();
    ctx.outputs.push_back(csv.path());
    return 0;
}

int run_corridor(RunContext& ctx) {
    const auto envlaw = ctx.config.environment();
    const std::size_t n = ctx.config.get_sizes("experiment", "n", {100}).front();
    const double y_exp = ctx.config.get_double("experiment", "y_exponent", 1.0 / 3.0);
    const double b = ctx.config.get_double("experiment", "corridor_b", 1.0);
    const double cap_exp = ctx.config.get_double("experiment", "xi_cap_exponent", 0.0);
    const std::string mode = ctx.config.get_string("experiment", "mode", "exact");
    const std::size_t replicates =
        static_cast<std::size_t>(ctx.config.get_u64("experiment", "replicates", 10000));
    if (mode != "exact" && mode != "mc") throw ConfigError("mode must be 'exact' or 'mc'");
    if (ctx.dry_run) return 0;

    const CriticalProfile profile = find_critical_theta(*envlaw);
    const EnvironmentSequence envseq = sample_environment(envlaw, n, ctx.seed);
    const double y_n = std::pow(static_cast<double>(n), y_exp);
    CorridorSpec spec = CorridorSpec::symmetric(
        n, b * y_n,
        cap_exp > 0.0 ? std::optional<double>(std::exp(std::pow(static_cast<double>(n), cap_exp)))
                      : std::nullopt);

    double log_p, p, se = 0.0;
    if (mode == "exact") {
        const CorridorValue v = corridor_probability_exact(envseq, profile.vartheta, spec);
        log_p = v.log_p;
        p = v.p;
    } else {
        const McEstimate est =
            corridor_probability_mc(envseq, profile.vartheta, spec, replicates, ctx.seed);
        p = est.value;
        se = est.stderr_;
        log_p = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    }
    std::printf("corridor |T_i| <= %.6g for %zu steps: p = %.8g  log p = %.8g  log p / n^{1/3} = %.8g\n",
                b * y_n, n, p, log_p, log_p / std::cbrt(static_cast<double>(n)));

    CsvWriter csv(ctx.out_path("corridor.csv"),
                  {"n", "y_n", "half_width", "mode", "log_p", "p", "stderr", "seed"});
    csv.row({std::to_string(n), format_double(y_n), format_double(b * y_n), mode,
             format_double(log_p), format_double(p), format_double(se),
             std::to_string(ctx.seed)});
    csv.close();
    ctx.outputs.push_back(csv.path());
    return 0;
}

int run_rate(RunContext& ctx) {
    const auto envlaw = ctx.config.environment();
    SmallDevSpec spec;
    const double b = ctx.config.get_double("experiment", "corridor_b", 1.0);
    const double a = ctx.config.get_double("experiment", "corridor_a", 0.5);
    const double c = ctx.config.get_double("experiment", "corridor_c", 0.5);
    spec.b1 = -b; spec.b2 = b;
    spec.a1 = -a; spec.a2 = a;
    spec.ap1 = -c; spec.ap2 = c;
    spec.y_exponent = ctx.config.get_double("experiment", "y_exponent", 0.5);
    spec.xi_cap_exponent = ctx.config.get_double("experiment", "xi_cap_exponent", 0.5);
    spec.n_grid = ctx.config.get_sizes("experiment", "n", {1000});
    spec.env_replicates =
        static_cast<std::size_t>(ctx.config.get_u64("experiment", "environments", 10));
    const std::string mode = ctx.config.get_string("experiment", "mode", "exact");
    spec.path_replicates =
        mode == "mc" ? static_cast<std::size_t>(ctx.config.get_u64("experiment", "replicates", 10000))
                     : 0;
    if (ctx.dry_run) return 0;

    const CriticalProfile profile = find_critical_theta(*envlaw);
    const std::vector<SmallDevRateRow> rows =
        small_deviation_rate(envlaw, profile.vartheta, spec, ctx.seed, ctx.workers);

    CsvWriter csv(ctx.out_path("rate.csv"),
                  {"n", "y_n", "env_index", "log_p", "normalized_rate", "mode"});
    for (const auto& row : rows)
        csv.row({std::to_string(row.n), format_double(row.y_n), std::to_string(row.env_index),
                 format_double(row.log_p), format_double(row.normalized), row.mode});
    csv.close();
    ctx.outputs.push_back(csv.path());

    for (const std::size_t n : spec.n_grid)
        for (const std::string form : {"sup", "inf"}) {
            std::vector<double> values;
            for (const auto& row : rows)
                if (row.n == n && row.mode == form && std::isfinite(row.normalized))
                    values.push_back(row.normalized);
            if (values.empty()) continue;
            RunningStats stats;
            for (double v : values) stats.add(v);
            std::printf("n=%zu %s: mean rate %.6g  median %.6g  spread %.3g  (%zu envs)\n", n,
                        form.c_str(), stats.mean(), median_of(values),
                        std::sqrt(stats.variance()), values.size());
        }
    return 0;
}

ExperimentConfig experiment_from_config(RunContext& ctx) {
    ExperimentConfig config;
    config.envlaw = ctx.config.environment();
    config.d_grid = ctx.config.get_doubles("barrier", "d", {0.1});
    config.alpha_grid = ctx.config.get_doubles("barrier", "alpha", {1.0 / 3.0});
    config.n_grid = ctx.config.get_sizes("experiment", "n", {64, 216, 512});
    config.replicates =
        static_cast<std::size_t>(ctx.config.get_u64("experiment", "replicates", 1000));
    config.environments =
        static_cast<std::size_t>(ctx.config.get_u64("experiment", "environments", 10));
    config.moment_p = ctx.config.get_double("experiment", "moment_p", 1.0);
    config.root_seed = ctx.seed;
    config.population_cap = ctx.config.get_u64("experiment", "population_cap", 1'000'000);
    config.offspring_cap_exponent =
        ctx.config.get_double("experiment", "offspring_cap_exponent", 0.0);
    config.workers = ctx.workers;
    return config;
}

int run_rate_experiment(RunContext& ctx) {
    ExperimentConfig config = experiment_from_config(ctx);
    if (ctx.dry_run) { config.validate(); return 0; }
    const ExtinctionTable table = extinction_rate_experiment(config);
    if (!table.within_hypotheses)
        std::printf("note: assumption report has violations; run annotated out-of-hypothesis\n");

    CsvWriter rows(ctx.out_path("rate_rows.csv"),
                   {"n", "d", "alpha", "env_index", "estimate", "stderr", "a_n", "censored",
                    "truncated_fraction"});
    for (const auto& r : table.rows)
        rows.row({std::to_string(r.n), format_double(r.d), format_double(r.alpha),
                  std::to_string(r.env_index), format_double(r.estimate),
                  format_double(r.stderr_), format_double(r.a_n), r.censored ? "1" : "0",
                  format_double(r.truncated_fraction)});
    rows.close();
    ctx.outputs.push_back(rows.path());

    CsvWriter summary(ctx.out_path("rate_summary.csv"),
                      {"n", "d", "alpha", "environments", "mean_a", "median_a", "spread_a",
                       "censored_fraction", "out_of_hypothesis"});
    for (const auto& s : table.summaries) {
        summary.row({std::to_string(s.n), format_double(s.d), format_double(s.alpha),
                     std::to_string(s.environments), format_double(s.mean_a),
                     format_double(s.median_a), format_double(s.spread_a),
                     format_double(s.censored_fraction), table.within_hypotheses ? "0" : "1"});
        std::printf("n=%zu d=%g alpha=%g: median A_n = %.6g  mean = %.6g  spread = %.3g  censored %.3g\n",
                    s.n, s.d, s.alpha, s.median_a, s.mean_a, s.spread_a, s.censored_fraction);
    }
    summary.close();
    ctx.outputs.push_back(summary.path());
    return 0;
}

int run_lp_experiment(RunContext& ctx) {
    ExperimentConfig config = experiment_from_config(ctx);
    if (ctx.dry_run) { config.validate(); return 0; }
    const MomentTable table = lp_moment_experiment(config);
    if (!table.base.within_hypotheses)
        std::printf("note: assumption report has violations; run annotated out-of-hypothesis\n");

    CsvWriter rows(ctx.out_path("lp_rows.csv"),
                   {"n", "moment_p", "moment", "stderr", "censored", "zero_fraction"});
    for (const auto& r : table.rows)
        rows.row({std::to_string(r.n), format_double(config.moment_p), format_double(r.moment),
                  format_double(r.stderr_), std::to_string(r.censored),
                  format_double(r.zero_fraction)});
    rows.close();
    ctx.outputs.push_back(rows.path());

    CsvWriter summary(ctx.out_path("lp_summary.csv"),
                      {"slope_vs_n", "t_vs_n", "slope_vs_cbrt", "t_vs_cbrt",
                       "out_of_hypothesis"});
    summary.row({format_double(table.trend_vs_n.slope), format_double(table.trend_vs_n.t_stat),
                 format_double(table.trend_vs_cbrt.slope),
                 format_double(table.trend_vs_cbrt.t_stat),
                 table.base.within_hypotheses ? "0" : "1"});
    summary.close();
    ctx.outputs.push_back(summary.path());
    std::printf("trend of E[A_n^p] vs n: slope %.6g (t = %.3g); vs n^(1/3): slope %.6g (t = %.3g)\n",
                table.trend_vs_n.slope, table.trend_vs_n.t_stat, table.trend_vs_cbrt.slope,
                table.trend_vs_cbrt.t_stat);
    return 0;
}

int run_approx_check(RunContext& ctx) {
    StepLaw law;
    const std::vector<double> values =
        ctx.config.get_doubles("experiment", "v_values", {-1.0, 1.0});
    const std::vector<double> probs =
        ctx.config.get_doubles("experiment", "v_probs", {0.5, 0.5});
    if (values.size() != probs.size())
        throw ConfigError("v_values and v_probs must have equal length");
    for (std::size_t i = 0; i < values.size(); ++i) law.atoms.emplace_back(values[i], probs[i]);
    law.validate_and_center();
    const std::uint64_t l = ctx.config.get_u64("experiment", "l", 10000);
    const std::vector<double> m_grid =
        ctx.config.get_doubles("experiment", "m", {50.0, 100.0, 200.0});
    const double beta = ctx.config.get_double("experiment", "beta", 4.0);
    const double iota = ctx.config.get_double("experiment", "iota", 3.0);
    const std::size_t replicates =
        static_cast<std::size_t>(ctx.config.get_u64("experiment", "replicates", 100000));
    if (ctx.dry_run) return 0;

    const std::vector<McEstimate> empirical =
        empirical_max_tail(law, l, m_grid, replicates, ctx.seed, ctx.workers);
    const double c_fit = fit_tail_constant(m_grid, empirical, l, beta);

    CsvWriter csv(ctx.out_path("approx.csv"),
                  {"l", "m", "beta", "empirical", "stderr", "bound_fitted"});
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        const double bound = maximal_tail_bound(l, m_grid[i], beta, c_fit);
        csv.row({std::to_string(l), format_double(m_grid[i]), format_double(beta),
                 format_double(empirical[i].value), format_double(empirical[i].stderr_),
                 format_double(bound)});
        StaQuery q{m_grid[i], l, beta, iota, law.variance(), law.abs_moment(beta)};
        const StaVerdict verdict = sta_couple_check(q);
        std::printf("m=%-8g empirical=%-12.6g bound=%-12.6g STA=%s (criterion %.4g)\n",
                    m_grid[i], empirical[i].value, bound, verdict.is_sta ? "yes" : "no",
                    verdict.criterion_value);
    }
    csv.close();
    ctx.outputs.push_back(csv.path());
    std::printf("fitted C = %.8g\n", c_fit);
    return 0;
}

}  // namespace

int run_subcommand(const std::string& name, const RunOptions& options) {
    RunContext ctx{Config::parse_file(options.config_path), name, 0, options.workers,
                   options.out_dir, options.dry_run, {}};
    ctx.seed = options.seed_override.value_or(ctx.config.root_seed());
    if (!options.out_dir.empty()) std::filesystem::create_directories(options.out_dir);

    int code = 0;
    if (name == "check-env") code = run_check_env(ctx);
    else if (name == "critical") code = run_critical(ctx);
    else if (name == "mto-check") code = run_mto_check(ctx);
    else if (name == "survival") code = run_survival(ctx, options);
    else if (name == "corridor") code = run_corridor(ctx);
    else if (name == "rate") code = run_rate(ctx);
    else if (name == "rate-experiment") code = run_rate_experiment(ctx);
    else if (name == "lp-experiment") code = run_lp_experiment(ctx);
    else if (name == "approx-check") code = run_approx_check(ctx);
    else throw ConfigError("unknown subcommand '" + name + "'");

    ctx.finish();
    return code;
}

}  // namespace brwre
