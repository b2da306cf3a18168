#include "brwre/approx.hpp"

#include <algorithm>
#include <cmath>

#include "brwre/errors.hpp"
#include "brwre/parallel.hpp"
#include "brwre/rng.hpp"

namespace brwre {

void StaQuery::validate() const {
    if (!(m > 0.0)) throw ConfigError("STA query needs m > 0");
    if (l < 1) throw ConfigError("STA query needs l >= 1");
    if (!(beta >= 2.0)) throw ConfigError("STA query needs beta >= 2");
    if (!(iota > 2.0)) throw ConfigError("STA query needs iota > 2");
    if (!(var >= 0.0) || !std::isfinite(abs_moment))
        throw ConfigError("STA query needs finite moments");
}

StaVerdict sta_couple_check(const StaQuery& q) {
    q.validate();
    StaVerdict v;
    v.criterion_value = q.iota * q.var * static_cast<double>(q.l) / (q.m * q.m) *
                        std::log(static_cast<double>(q.l) * std::pow(q.m, -q.beta));
    if (q.var == 0.0) v.criterion_value = 0.0;  // degenerate V
    v.is_sta = v.criterion_value >= -1.0;
    return v;
}

double maximal_tail_bound(std::uint64_t l, double m, double beta, double c) {
    if (!(m > 0.0)) throw ConfigError("maximal_tail_bound needs m > 0");
    return c * static_cast<double>(l) / std::pow(m, beta);
}

void StepLaw::validate_and_center() {
    if (atoms.empty()) throw ConfigError("step law has no atoms");
    double total = 0.0;
    double mean = 0.0;
    for (const auto& [v, p] : atoms) {
        if (!(p > 0.0)) throw ConfigError("step probability must be > 0");
        total += p;
        mean += p * v;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ConfigError("step probabilities sum to " + std::to_string(total) + ", not 1");
    mean /= total;
    for (auto& [v, p] : atoms) v -= mean;
}

double StepLaw::variance() const {
    double s = 0.0;
    for (const auto& [v, p] : atoms) s += p * v * v;
    return s;
}

double StepLaw::abs_moment(double beta) const {
    double s = 0.0;
    for (const auto& [v, p] : atoms) s += p * std::pow(std::abs(v), beta);
    return s;
}

std::vector<McEstimate> empirical_max_tail(const StepLaw& law, std::uint64_t l,
                                           const std::vector<double>& m_grid,
                                           std::size_t replicates, std::uint64_t seed,
                                           int workers) {
    std::vector<double> cum;
    cum.reserve(law.atoms.size());
    double acc = 0.0;
    for (const auto& [v, p] : law.atoms) { acc += p; cum.push_back(acc); }
    cum.back() = 1.0;

    std::vector<double> sorted_m = m_grid;
    std::sort(sorted_m.begin(), sorted_m.end());

    // per-replicate max |S_i|, then threshold counts in canonical order
    std::vector<float> maxima(replicates, 0.0f);
    parallel_for(replicates, workers, [&](std::size_t r) {
        Rng rng(derive_seed(seed, {0x6d617874ull, r}));
        double sum = 0.0;
        double best = 0.0;
        for (std::uint64_t i = 0; i < l; ++i) {
            const double u = rng.uniform01();
            std::size_t a = 0;
            while (u >= cum[a]) ++a;
            sum += law.atoms[a].first;
            best = std::max(best, std::abs(sum));
        }
        maxima[r] = static_cast<float>(best);
    });

    std::vector<McEstimate> out;
    out.reserve(m_grid.size());
    for (const double m : m_grid) {
        std::uint64_t hits = 0;
        for (const float b : maxima)
            if (static_cast<double>(b) >= m) ++hits;
        const double p = static_cast<double>(hits) / static_cast<double>(replicates);
        out.push_back(
            {p, std::sqrt(p * (1.0 - p) / static_cast<double>(replicates)), replicates, seed});
    }
    return out;
}

double fit_tail_constant(const std::vector<double>& m_grid,
                         const std::vector<McEstimate>& empirical, std::uint64_t l, double beta) {
    double c = 0.0;
    for (std::size_t i = 0; i < m_grid.size(); ++i)
        c = std::max(c, empirical[i].value * std::pow(m_grid[i], beta) /
                            static_cast<double>(l));
    return c;
}

double log_log_slope(const std::vector<double>& m_grid, const std::vector<double>& values) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        if (!(values[i] > 0.0)) continue;
        const double x = std::log(m_grid[i]);
        const double y = std::log(values[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
    }
    if (count < 2) throw NumericError("log-log slope needs >= 2 positive points");
    const double nf = static_cast<double>(count);
    return (sxy - sx * sy / nf) / (sxx - sx * sx / nf);
}

}  // namespace brwre
