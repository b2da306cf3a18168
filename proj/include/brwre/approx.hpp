#pragma once

#include <cstdint>
#include <vector>

#include "brwre/mc.hpp"

namespace brwre {

// Threshold/horizon query for the maximal-inequality criterion.
struct StaQuery {
    double m = 0.0;         // threshold > 0
    std::uint64_t l = 1;    // horizon
    double beta = 2.0;      // moment order >= 2
    double iota = 3.0;      // level > 2
    double var = 0.0;       // E V^2
    double abs_moment = 0.0;  // E |V|^beta

    void validate() const;
};

struct StaVerdict {
    bool is_sta = false;
    double criterion_value = 0.0;  // iota * var * l * m^-2 * log(l m^-beta)
};

StaVerdict sta_couple_check(const StaQuery& q);

// The licensed tail bound C * l / m^beta.
double maximal_tail_bound(std::uint64_t l, double m, double beta, double c);

// Finite-support mean-zero step law for the harness.
struct StepLaw {
    std::vector<std::pair<double, double>> atoms;  // (value, probability)

    void validate_and_center();  // shifts values so the mean is exactly 0
    double variance() const;
    double abs_moment(double beta) const;
};

// Monte Carlo estimates of P(max_{i<=l} |sum_{k<=i} V_k| >= m) for each m in
// the grid, all thresholds served by one pass per replicate.
std::vector<McEstimate> empirical_max_tail(const StepLaw& law, std::uint64_t l,
                                           const std::vector<double>& m_grid,
                                           std::size_t replicates, std::uint64_t seed,
                                           int workers = 1);

// Smallest C that dominates every empirical point: max over the grid of
// empirical * m^beta / l.
double fit_tail_constant(const std::vector<double>& m_grid,
                         const std::vector<McEstimate>& empirical, std::uint64_t l, double beta);

// Least-squares slope of log(values) against log(m), censored points
// (value <= 0) excluded.
double log_log_slope(const std::vector<double>& m_grid, const std::vector<double>& values);

}  // namespace brwre
