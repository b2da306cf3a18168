#include "brwre/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "brwre/errors.hpp"
#include "brwre/parallel.hpp"

namespace brwre {

void ExperimentConfig::validate() const {
    if (!envlaw) throw ConfigError("experiment needs an environment law");
    if (d_grid.empty() || alpha_grid.empty() || n_grid.empty())
        throw ConfigError("experiment grids must be nonempty");
    if (replicates < 1 || environments < 1)
        throw ConfigError("experiment needs replicates >= 1 and environments >= 1");
}

double median_of(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

TrendFit fit_trend(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3) throw NumericError("trend fit needs >= 3 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double nf = static_cast<double>(n);
    const double sxx_c = sxx - sx * sx / nf;
    const double slope = (sxy - sx * sy / nf) / sxx_c;
    const double intercept = (sy - slope * sx) / nf;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - intercept - slope * x[i];
        rss += r * r;
    }
    const double se = std::sqrt(rss / (nf - 2.0) / sxx_c);
    TrendFit fit;
    fit.slope = slope;
    if (se > 0.0)
        fit.t_stat = slope / se;
    else
        fit.t_stat = slope == 0.0 ? 0.0
                                  : std::copysign(std::numeric_limits<double>::infinity(), slope);
    return fit;
}

ExtinctionTable extinction_rate_experiment(const ExperimentConfig& config) {
    config.validate();
    ExtinctionTable table;
    table.profile = find_critical_theta(*config.envlaw);
    const double vartheta = table.profile.vartheta;
    {
        AssumptionParams params;
        params.lambda5 = std::numeric_limits<double>::quiet_NaN();
        table.within_hypotheses =
            assumption_report(*config.envlaw, table.profile, params).all_satisfied;
    }

    const std::size_t max_n = *std::max_element(config.n_grid.begin(), config.n_grid.end());

    // one environment realization per index, shared across the n-grid as
    // prefixes (index draws are sequential, so prefixes replay bit-exactly)
    std::vector<EnvironmentSequence> envs(config.environments);
    for (std::size_t e = 0; e < config.environments; ++e)
        envs[e] = sample_environment(config.envlaw, max_n,
                                     derive_seed(config.root_seed, {0x65787065ull, e}));

    struct Cell {
        std::size_t ni, di, ai, e;
    };
    std::vector<Cell> cells;
    for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni)
        for (std::size_t di = 0; di < config.d_grid.size(); ++di)
            for (std::size_t ai = 0; ai < config.alpha_grid.size(); ++ai)
                for (std::size_t e = 0; e < config.environments; ++e)
                    cells.push_back({ni, di, ai, e});

    table.rows.resize(cells.size());
    parallel_for(cells.size(), config.workers, [&](std::size_t t) {
        const Cell& cell = cells[t];
        const std::size_t n = config.n_grid[cell.ni];
        EnvironmentSequence prefix;
        prefix.seed = envs[cell.e].seed;
        prefix.source = envs[cell.e].source;
        prefix.indices.assign(envs[cell.e].indices.begin(),
                              envs[cell.e].indices.begin() + static_cast<std::ptrdiff_t>(n));

        BarrierSpec barrier{config.d_grid[cell.di], config.alpha_grid[cell.ai], vartheta};
        SimulationCaps caps;
        caps.population_cap = config.population_cap;
        if (config.offspring_cap_exponent > 0.0)
            caps.offspring_cap =
                std::exp(std::pow(static_cast<double>(n), config.offspring_cap_exponent));

        const SurvivalEstimate est =
            quenched_survival(prefix, &barrier, n, config.replicates, config.root_seed, caps, 1);

        ExtinctionRow row;
        row.n = n;
        row.d = barrier.d;
        row.alpha = barrier.alpha;
        row.env_index = cell.e;
        row.estimate = est.estimate.value;
        row.stderr_ = est.estimate.stderr_;
        row.truncated_fraction = est.truncated_fraction;
        const double cbrt_n = std::cbrt(static_cast<double>(n));
        if (est.estimate.value > 0.0) {
            row.a_n = -std::log(est.estimate.value) / cbrt_n;
            row.censored = false;
        } else {
            row.a_n = std::log(static_cast<double>(config.replicates)) / cbrt_n;
            row.censored = true;
        }
        table.rows[t] = row;
    });

    // per (n, d, alpha) summaries over environments
    for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni)
        for (std::size_t di = 0; di < config.d_grid.size(); ++di)
            for (std::size_t ai = 0; ai < config.alpha_grid.size(); ++ai) {
                std::vector<double> a_values;
                std::size_t censored = 0;
                std::size_t total = 0;
                for (const auto& row : table.rows) {
                    if (row.n != config.n_grid[ni] || row.d != config.d_grid[di] ||
                        row.alpha != config.alpha_grid[ai])
                        continue;
                    ++total;
                    if (row.censored) { ++censored; continue; }
                    a_values.push_back(row.a_n);
                }
                ExtinctionSummary s;
                s.n = config.n_grid[ni];
                s.d = config.d_grid[di];
                s.alpha = config.alpha_grid[ai];
                s.environments = total;
                s.censored_fraction =
                    total ? static_cast<double>(censored) / static_cast<double>(total) : 0.0;
                RunningStats stats;
                for (double a : a_values) stats.add(a);
                s.mean_a = stats.mean();
                s.spread_a = std::sqrt(stats.variance());
                s.median_a = median_of(a_values);
                table.summaries.push_back(s);
            }
    return table;
}

MomentTable lp_moment_experiment(const ExperimentConfig& config) {
    MomentTable out;
    out.base = extinction_rate_experiment(config);

    std::vector<double> xs_n, xs_cbrt, ys;
    for (const std::size_t n : config.n_grid) {
        MomentRow row;
        row.n = n;
        RunningStats stats;
        std::size_t total = 0;
        std::size_t zeros = 0;
        for (const auto& r : out.base.rows) {
            if (r.n != n) continue;
            ++total;
            if (r.censored) { ++row.censored; ++zeros; continue; }
            stats.add(std::pow(r.a_n, config.moment_p));
        }
        row.moment = stats.mean();
        row.stderr_ = stats.stderr_of_mean();
        row.zero_fraction = total ? static_cast<double>(zeros) / static_cast<double>(total) : 0.0;
        out.rows.push_back(row);
        if (stats.count() > 0) {
            xs_n.push_back(static_cast<double>(n));
            xs_cbrt.push_back(std::cbrt(static_cast<double>(n)));
            ys.push_back(row.moment);
        }
    }
    if (ys.size() >= 3) {
        out.trend_vs_n = fit_trend(xs_n, ys);
        out.trend_vs_cbrt = fit_trend(xs_cbrt, ys);
    }
    return out;
}

}  // namespace brwre
