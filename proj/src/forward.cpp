#include "brwre/forward.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "brwre/errors.hpp"
#include "brwre/lattice_dp.hpp"
#include "brwre/parallel.hpp"

namespace brwre {

std::uint64_t PopulationSnapshot::size() const {
    std::uint64_t total = 0;
    for (const auto& [pos, count] : positions) total += count;
    return total;
}

namespace {

struct LatticeLaw {
    struct Atom {
        double cum_prob;  // cumulative over atoms, for inverse sampling
        std::vector<std::int64_t> child_dx;
        bool capped;  // offspring count above the Yhat cap
    };
    std::vector<Atom> atoms;
};

LatticeLaw lattice_law(const PointProcessLaw& law, std::int64_t denom, double offspring_cap) {
    LatticeLaw out;
    double acc = 0.0;
    for (const auto& atom : law.atoms()) {
        acc += atom.probability;
        LatticeLaw::Atom la;
        la.cum_prob = acc;
        la.capped = static_cast<double>(atom.offspring_count()) > offspring_cap;
        la.child_dx.reserve(atom.displacements.size());
        for (const auto& z : atom.displacements)
            la.child_dx.push_back(z.num * (denom / z.den));
        out.atoms.push_back(std::move(la));
    }
    out.atoms.back().cum_prob = 1.0;
    return out;
}

}  // namespace

SurvivalRun simulate_population(const EnvironmentSequence& envseq, const BarrierSpec* barrier,
                                std::size_t n, const SimulationCaps& caps,
                                std::uint64_t rep_seed) {
    if (envseq.length() < n) throw ConfigError("environment shorter than horizon");
    const std::int64_t denom = envseq.source->lattice_denominator();

    std::vector<LatticeLaw> laws;
    laws.reserve(envseq.source->size());
    for (std::size_t c = 0; c < envseq.source->size(); ++c)
        laws.push_back(lattice_law(envseq.source->law(c), denom, caps.offspring_cap));

    std::vector<double> phi;
    std::vector<double> floor_curve;
    if (barrier) {
        const std::vector<double> cumulative = cumulative_kappa(envseq, barrier->vartheta);
        phi = barrier_curve(cumulative, *barrier);
        if (caps.floor_offset)
            for (std::size_t i = 0; i <= n; ++i)
                floor_curve.push_back(-*caps.floor_offset - cumulative[i] / barrier->vartheta);
    } else if (caps.floor_offset) {
        throw ConfigError("position floor requires a barrier (it shares the tilt)");
    }

    std::int64_t min_dx = std::numeric_limits<std::int64_t>::max();
    std::int64_t max_dx = std::numeric_limits<std::int64_t>::min();
    for (const auto& law : laws)
        for (const auto& atom : law.atoms)
            for (const std::int64_t dx : atom.child_dx) {
                min_dx = std::min(min_dx, dx);
                max_dx = std::max(max_dx, dx);
            }

    SurvivalRun run;
    run.sizes.assign(n + 1, 0);
    run.min_positions.assign(n + 1, std::numeric_limits<double>::quiet_NaN());
    run.sizes[0] = 1;
    run.min_positions[0] = 0.0;

    std::vector<std::pair<std::int64_t, std::uint64_t>> pop{{0, 1}};
    std::vector<std::uint64_t> cell_counts;  // flat counts over the child range
    for (std::size_t gen = 0; gen < n && !pop.empty(); ++gen) {
        const LatticeLaw& law = laws[envseq.indices[gen]];
        // admissible child range on the lattice for this generation
        std::int64_t range_lo = pop.front().first + min_dx;
        std::int64_t range_hi = pop.back().first + max_dx;
        if (barrier) {
            const double bound = phi[gen + 1] * static_cast<double>(denom);
            range_hi = std::min(range_hi, lattice_floor(bound));
        }
        if (caps.floor_offset) {
            const double bound = floor_curve[gen + 1] * static_cast<double>(denom);
            range_lo = std::max(range_lo, lattice_ceil(bound));
        }
        if (range_lo > range_hi) { pop.clear(); break; }
        cell_counts.assign(static_cast<std::size_t>(range_hi - range_lo + 1), 0);

        for (const auto& [pos, count] : pop) {
            for (std::uint64_t j = 0; j < count; ++j) {
                // keyed draw: adding particles elsewhere never changes this one
                const double u = keyed_uniform(rep_seed, gen, static_cast<std::uint64_t>(pos), j);
                std::size_t a = 0;
                while (u >= law.atoms[a].cum_prob) ++a;
                const auto& atom = law.atoms[a];
                if (atom.capped) continue;
                for (const std::int64_t dx : atom.child_dx) {
                    const std::int64_t p = pos + dx;
                    if (p < range_lo || p > range_hi) continue;
                    ++cell_counts[static_cast<std::size_t>(p - range_lo)];
                }
            }
        }
        // collect ascending; the population cap keeps the lowest positions
        pop.clear();
        std::uint64_t total = 0;
        for (std::size_t cell = 0; cell < cell_counts.size(); ++cell) {
            std::uint64_t count = cell_counts[cell];
            if (count == 0) continue;
            if (total + count > caps.population_cap) {
                count = caps.population_cap - total;
                run.truncated = true;
            }
            if (count > 0) pop.emplace_back(range_lo + static_cast<std::int64_t>(cell), count);
            total += count;
            if (total >= caps.population_cap) break;
        }
        run.sizes[gen + 1] = total;
        if (!pop.empty())
            run.min_positions[gen + 1] =
                static_cast<double>(pop.front().first) / static_cast<double>(denom);
        else
            break;
    }
    run.survived = run.sizes[n] > 0;
    return run;
}

SurvivalEstimate quenched_survival(const EnvironmentSequence& envseq, const BarrierSpec* barrier,
                                   std::size_t n, std::size_t replicates, std::uint64_t seed,
                                   const SimulationCaps& caps, int workers) {
    std::vector<std::uint8_t> survived(replicates, 0);
    std::vector<std::uint8_t> truncated(replicates, 0);
    const std::uint64_t env_digest = envseq.digest();
    parallel_for(replicates, workers, [&](std::size_t r) {
        const std::uint64_t rep_seed = derive_seed(seed, {0x73757276ull, env_digest, n, r});
        const SurvivalRun run = simulate_population(envseq, barrier, n, caps, rep_seed);
        survived[r] = run.survived ? 1 : 0;
        truncated[r] = run.truncated ? 1 : 0;
    });
    std::uint64_t hits = 0;
    std::uint64_t trunc = 0;
    for (std::size_t r = 0; r < replicates; ++r) { hits += survived[r]; trunc += truncated[r]; }
    const double p = static_cast<double>(hits) / static_cast<double>(replicates);
    SurvivalEstimate out;
    out.estimate = {p, std::sqrt(p * (1.0 - p) / static_cast<double>(replicates)), replicates,
                    seed};
    out.truncated_fraction = static_cast<double>(trunc) / static_cast<double>(replicates);
    return out;
}

namespace {

struct BarrierWindows {
    std::vector<double> ceil_v;   // index by generation
    std::vector<double> floor_v;
    std::int64_t denom = 1;

    bool admitted(std::size_t gen, std::int64_t pos) const {
        const double v = static_cast<double>(pos) / static_cast<double>(denom);
        return v <= ceil_v[gen] && v >= floor_v[gen];
    }
};

BarrierWindows make_windows(const EnvironmentSequence& envseq, const BarrierSpec& barrier,
                            std::size_t n, const SimulationCaps& caps) {
    BarrierWindows w;
    w.denom = envseq.source->lattice_denominator();
    const std::vector<double> cumulative = cumulative_kappa(envseq, barrier.vartheta);
    w.ceil_v = barrier_curve(cumulative, barrier);
    w.ceil_v.resize(n + 1);
    w.floor_v.assign(n + 1, -std::numeric_limits<double>::infinity());
    if (caps.floor_offset)
        for (std::size_t i = 0; i <= n; ++i)
            w.floor_v[i] = -*caps.floor_offset - cumulative[i] / barrier.vartheta;
    return w;
}

}  // namespace

double exact_survival_probability(const EnvironmentSequence& envseq, const BarrierSpec& barrier,
                                  std::size_t n, const SimulationCaps& caps,
                                  std::uint64_t budget) {
    if (envseq.length() < n) throw ConfigError("environment shorter than horizon");
    const BarrierWindows w = make_windows(envseq, barrier, n, caps);

    // forward reachability keeps the state set tight
    std::uint64_t states = 0;
    std::vector<std::vector<std::int64_t>> reachable(n + 1);
    {
        std::vector<std::int64_t> frontier{0};
        reachable[0] = frontier;
        for (std::size_t gen = 0; gen < n; ++gen) {
            std::vector<std::int64_t> next;
            const PointProcessLaw& law = envseq.law_at_step(gen + 1);
            for (const std::int64_t pos : reachable[gen])
                for (const auto& atom : law.atoms())
                    for (const auto& z : atom.displacements) {
                        const std::int64_t p = pos + z.num * (w.denom / z.den);
                        if (w.admitted(gen + 1, p)) next.push_back(p);
                    }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            states += next.size();
            if (states > budget)
                throw BudgetError("survival recursion needs > " + std::to_string(budget) +
                                  " states");
            reachable[gen + 1] = std::move(next);
        }
    }
    // q[gen][pos] = P(no admitted descendant at generation n | particle at pos)
    std::unordered_map<std::int64_t, double> q_next;
    for (const std::int64_t pos : reachable[n]) q_next[pos] = 0.0;
    for (std::size_t gen = n; gen-- > 0;) {
        std::unordered_map<std::int64_t, double> q;
        const PointProcessLaw& law = envseq.law_at_step(gen + 1);
        for (const std::int64_t pos : reachable[gen]) {
            double extinction = 0.0;
            for (const auto& atom : law.atoms()) {
                if (static_cast<double>(atom.offspring_count()) > caps.offspring_cap) {
                    extinction += atom.probability;  // children erased with the parent
                    continue;
                }
                double prod = 1.0;
                for (const auto& z : atom.displacements) {
                    const std::int64_t p = pos + z.num * (w.denom / z.den);
                    if (!w.admitted(gen + 1, p)) continue;  // child erased
                    prod *= q_next.at(p);
                    if (prod == 0.0) break;
                }
                extinction += atom.probability * prod;
            }
            q[pos] = extinction;
        }
        q_next = std::move(q);
    }
    return 1.0 - q_next.at(0);
}

SimulationCaps yhat_caps(std::size_t n, double cap_exponent, std::uint64_t population_cap) {
    SimulationCaps caps;
    caps.population_cap = population_cap;
    caps.offspring_cap = std::exp(std::pow(static_cast<double>(n), cap_exponent));
    caps.floor_offset = std::cbrt(static_cast<double>(n));
    return caps;
}

namespace {

// expected admitted-descendant counts, exact on the lattice
SecondMomentBound exhaustive_moments(const EnvironmentSequence& envseq,
                                     const BarrierSpec& barrier, std::size_t n,
                                     const SimulationCaps& caps, std::uint64_t budget) {
    const BarrierWindows w = make_windows(envseq, barrier, n, caps);

    // m[gen][pos] = expected number of admitted generation-n descendants
    std::vector<std::unordered_map<std::int64_t, double>> m(n + 1);
    // forward reachability for tight state sets
    std::vector<std::vector<std::int64_t>> reachable(n + 1);
    reachable[0] = {0};
    std::uint64_t states = 1;
    for (std::size_t gen = 0; gen < n; ++gen) {
        std::vector<std::int64_t> next;
        const PointProcessLaw& law = envseq.law_at_step(gen + 1);
        for (const std::int64_t pos : reachable[gen])
            for (const auto& atom : law.atoms()) {
                if (static_cast<double>(atom.offspring_count()) > caps.offspring_cap) continue;
                for (const auto& z : atom.displacements) {
                    const std::int64_t p = pos + z.num * (w.denom / z.den);
                    if (w.admitted(gen + 1, p)) next.push_back(p);
                }
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        states += next.size();
        if (states > budget)
            throw BudgetError("moment recursion needs > " + std::to_string(budget) + " states");
        reachable[gen + 1] = std::move(next);
    }
    for (const std::int64_t pos : reachable[n]) m[n][pos] = 1.0;
    for (std::size_t gen = n; gen-- > 0;) {
        const PointProcessLaw& law = envseq.law_at_step(gen + 1);
        for (const std::int64_t pos : reachable[gen]) {
            double mean = 0.0;
            for (const auto& atom : law.atoms()) {
                if (static_cast<double>(atom.offspring_count()) > caps.offspring_cap) continue;
                for (const auto& z : atom.displacements) {
                    const std::int64_t p = pos + z.num * (w.denom / z.den);
                    if (!w.admitted(gen + 1, p)) continue;
                    mean += atom.probability * m[gen + 1].at(p);
                }
            }
            m[gen][pos] = mean;
        }
    }

    // r[gen][pos] = expected number of admitted particles at (gen, pos)
    std::unordered_map<std::int64_t, double> r{{0, 1.0}};
    double cross = 0.0;  // sum over ordered pairs with split point at gen
    for (std::size_t gen = 0; gen < n; ++gen) {
        const PointProcessLaw& law = envseq.law_at_step(gen + 1);
        std::unordered_map<std::int64_t, double> r_next;
        for (const auto& [pos, weight] : r) {
            for (const auto& atom : law.atoms()) {
                if (static_cast<double>(atom.offspring_count()) > caps.offspring_cap) continue;
                // admitted children of this atom with their descendant means
                double sum_m = 0.0;
                double sum_m2 = 0.0;
                for (const auto& z : atom.displacements) {
                    const std::int64_t p = pos + z.num * (w.denom / z.den);
                    if (!w.admitted(gen + 1, p)) continue;
                    const double child_m = m[gen + 1].at(p);
                    sum_m += child_m;
                    sum_m2 += child_m * child_m;
                    r_next[p] += weight * atom.probability;
                }
                // ordered pairs of distinct children
                cross += weight * atom.probability * (sum_m * sum_m - sum_m2);
            }
        }
        r = std::move(r_next);
    }

    SecondMomentBound out;
    out.mean = m[0].at(0);
    out.second_moment = out.mean + cross;
    out.lower_bound =
        out.second_moment > 0.0 ? out.mean * out.mean / out.second_moment : 0.0;
    return out;
}

}  // namespace

SecondMomentBound second_moment_bound(const EnvironmentSequence& envseq, double vartheta,
                                      const BarrierSpec& barrier, std::size_t n, MomentMode mode,
                                      const SimulationCaps& caps, std::size_t replicates,
                                      std::uint64_t seed, int workers, std::uint64_t budget) {
    BarrierSpec b = barrier;
    b.vartheta = vartheta;
    if (mode == MomentMode::Exhaustive) return exhaustive_moments(envseq, b, n, caps, budget);

    if (replicates == 0) throw ConfigError("mc mode needs replicates > 0");
    std::vector<double> counts(replicates, 0.0);
    const std::uint64_t env_digest = envseq.digest();
    parallel_for(replicates, workers, [&](std::size_t r) {
        const std::uint64_t rep_seed = derive_seed(seed, {0x796d6f6dull, env_digest, n, r});
        const SurvivalRun run = simulate_population(envseq, &b, n, caps, rep_seed);
        counts[r] = static_cast<double>(run.sizes[n]);
    });
    RunningStats first, second;
    double cov_acc = 0.0;
    for (double y : counts) { first.add(y); second.add(y * y); }
    for (double y : counts)
        cov_acc += (y - first.mean()) * (y * y - second.mean());
    const double nrep = static_cast<double>(replicates);
    const double cov = cov_acc / (nrep - 1.0) / nrep;  // cov of the two means
    SecondMomentBound out;
    out.mean = first.mean();
    out.second_moment = second.mean();
    out.lower_bound =
        out.second_moment > 0.0 ? out.mean * out.mean / out.second_moment : 0.0;
    // delta method for g(m1, m2) = m1^2 / m2
    if (out.second_moment > 0.0) {
        const double g1 = 2.0 * out.mean / out.second_moment;
        const double g2 = -out.mean * out.mean / (out.second_moment * out.second_moment);
        const double var = g1 * g1 * first.variance() / nrep +
                           g2 * g2 * second.variance() / nrep + 2.0 * g1 * g2 * cov;
        out.bound_stderr = std::sqrt(std::max(0.0, var));
    }
    return out;
}

}  // namespace brwre
