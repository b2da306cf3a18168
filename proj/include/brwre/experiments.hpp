#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "brwre/criticality.hpp"
#include "brwre/forward.hpp"

namespace brwre {

// End-to-end seeded experiment description.
struct ExperimentConfig {
    std::shared_ptr<const EnvironmentLaw> envlaw;
    std::vector<double> d_grid{0.1};
    std::vector<double> alpha_grid{1.0 / 3.0};
    std::vector<std::size_t> n_grid{64};
    std::size_t replicates = 1000;
    std::size_t environments = 10;
    double moment_p = 1.0;
    std::uint64_t root_seed = 1;
    std::uint64_t population_cap = 1'000'000;
    double offspring_cap_exponent = 0.0;  // 0 disables the parent cap
    int workers = 1;

    void validate() const;
};

// One (environment, n, barrier) cell: quenched survival and the normalized
// extinction rate A_n = -log(estimate) / n^{1/3}. Rows where every replicate
// went extinct are censored and carry the Monte Carlo floor
// log(replicates)/n^{1/3} as a lower bound on A_n.
struct ExtinctionRow {
    std::size_t n = 0;
    double d = 0.0;
    double alpha = 0.0;
    std::size_t env_index = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    double a_n = 0.0;
    bool censored = false;
    double truncated_fraction = 0.0;
};

struct ExtinctionSummary {
    std::size_t n = 0;
    double d = 0.0;
    double alpha = 0.0;
    double mean_a = 0.0;    // over uncensored rows
    double median_a = 0.0;
    double spread_a = 0.0;  // sample standard deviation
    double censored_fraction = 0.0;
    std::size_t environments = 0;
};

struct ExtinctionTable {
    std::vector<ExtinctionRow> rows;
    std::vector<ExtinctionSummary> summaries;
    CriticalProfile profile;
    // false when the assumption report (default exponents, scanned window
    // parameter) has violations; the run is then out-of-hypothesis
    bool within_hypotheses = true;
};

ExtinctionTable extinction_rate_experiment(const ExperimentConfig& config);

// Cross-environment p-th moments of A_n with trend regressions.
struct MomentRow {
    std::size_t n = 0;
    double moment = 0.0;   // empirical E[A_n^p] over uncensored rows
    double stderr_ = 0.0;
    std::size_t censored = 0;
    double zero_fraction = 0.0;  // environments with estimate = 0
};

struct TrendFit {
    double slope = 0.0;
    double t_stat = 0.0;
};

struct MomentTable {
    std::vector<MomentRow> rows;
    TrendFit trend_vs_n;      // E[A_n^p] against n
    TrendFit trend_vs_cbrt;   // against n^{1/3}
    ExtinctionTable base;
};

MomentTable lp_moment_experiment(const ExperimentConfig& config);

// Ordinary least squares of y against x with the usual slope t-statistic.
TrendFit fit_trend(const std::vector<double>& x, const std::vector<double>& y);

double median_of(std::vector<double> values);

}  // namespace brwre
