#include "brwre/spine.hpp"

#include <algorithm>
#include <cmath>

#include "brwre/errors.hpp"
#include "brwre/lattice_dp.hpp"

namespace brwre {

void PathFunctional::validate(std::size_t n) const {
    if (windows && windows->size() != n)
        throw ConfigError("functional windows length != environment length");
    if (caps && caps->size() != n)
        throw ConfigError("functional caps length != environment length");
}

bool PathFunctional::accepts(const SpineTrajectory& traj) const {
    const std::size_t n = traj.xi.size();
    if (windows)
        for (std::size_t i = 0; i < n; ++i) {
            const double x = traj.chi[i + 1];
            if (x < (*windows)[i].first || x > (*windows)[i].second) return false;
        }
    if (caps)
        for (std::size_t i = 0; i < n; ++i)
            if (static_cast<double>(traj.xi[i]) > (*caps)[i]) return false;
    return true;
}

SpineStepTable::SpineStepTable(const EnvironmentSequence& envseq, double vartheta)
    : envseq_(&envseq), vartheta_(vartheta) {
    laws_.reserve(envseq.source->size());
    for (std::size_t c = 0; c < envseq.source->size(); ++c)
        laws_.push_back(spine_step_law(envseq.source->law(c), vartheta));
    cumulative_ = brwre::cumulative_kappa(envseq, vartheta);
}

SpineTrajectory sample_spine(const SpineStepTable& table, std::size_t n, Rng& rng) {
    if (n > table.envseq().length()) throw ConfigError("trajectory longer than environment");
    SpineTrajectory traj;
    traj.chi.resize(n + 1, 0.0);
    traj.T.resize(n + 1, 0.0);
    traj.xi.resize(n, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        const SpineStepLaw& law = table.at_step(i);
        const double u = rng.uniform01();
        double acc = 0.0;
        const SpineAtom* chosen = &law.atoms.back();
        for (const auto& atom : law.atoms) {
            acc += atom.mass;
            if (u < acc) { chosen = &atom; break; }
        }
        traj.chi[i] = traj.chi[i - 1] + chosen->x.value();
        traj.xi[i - 1] = chosen->xi;
        traj.T[i] = table.cumulative_kappa()[i] + table.vartheta() * traj.chi[i];
    }
    return traj;
}

McEstimate many_to_one_estimate(const SpineStepTable& table, const PathFunctional& functional,
                                std::size_t n, std::size_t replicates, std::uint64_t seed) {
    functional.validate(n);
    RunningStats stats;
    for (std::size_t r = 0; r < replicates; ++r) {
        Rng rng(derive_seed(seed, {0x6d746full, r}));  // "mto" stream
        const SpineTrajectory traj = sample_spine(table, n, rng);
        // exp(T_n) stays in log space until the one exponentiation here
        stats.add(functional.accepts(traj) ? std::exp(traj.T[n]) : 0.0);
    }
    return {stats.mean(), stats.stderr_of_mean(), replicates, seed};
}

namespace {

// literal lineage walk over (atom, child) choices of the original laws
double genealogy_sum(const SpineStepTable& table, const PathFunctional& functional,
                     std::size_t n, std::uint64_t budget) {
    const EnvironmentSequence& envseq = table.envseq();
    // lineage-node count: sum over depth k of prod_{i<=k} (total children of step i law)
    double nodes = 0.0;
    double lineages = 1.0;
    for (std::size_t i = 1; i <= n; ++i) {
        double children = 0.0;
        for (const auto& atom : envseq.law_at_step(i).atoms())
            children += static_cast<double>(atom.offspring_count());
        lineages *= children;
        nodes += lineages;
        if (nodes > static_cast<double>(budget))
            throw BudgetError("genealogy enumeration needs > " +
                              std::to_string(static_cast<std::uint64_t>(nodes)) +
                              " lineage states, budget " + std::to_string(budget));
    }

    struct Frame { std::size_t depth; double position; double weight; };
    double total = 0.0;
    std::vector<Frame> stack;
    stack.push_back({0, 0.0, 1.0});
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.depth == n) { total += f.weight; continue; }
        const std::size_t step = f.depth + 1;
        const PointProcessLaw& law = envseq.law_at_step(step);
        for (const auto& atom : law.atoms()) {
            if (functional.caps &&
                static_cast<double>(atom.offspring_count()) > (*functional.caps)[f.depth])
                continue;
            for (const auto& z : atom.displacements) {
                const double pos = f.position + z.value();
                if (functional.windows) {
                    const auto& w = (*functional.windows)[f.depth];
                    if (pos < w.first || pos > w.second) continue;
                }
                stack.push_back({step, pos, f.weight * atom.probability});
            }
        }
    }
    return total;
}

double spine_dp_sum(const SpineStepTable& table, const PathFunctional& functional,
                    std::size_t n, std::uint64_t budget) {
    const EnvironmentSequence& envseq = table.envseq();
    const std::int64_t denom = envseq.source->lattice_denominator();

    // per-component lattice atoms
    std::vector<std::vector<LatticeAtom>> lattice_atoms(envseq.source->size());
    for (std::size_t c = 0; c < lattice_atoms.size(); ++c) {
        const SpineStepLaw& law = spine_step_law(envseq.source->law(c), table.vartheta());
        for (const auto& atom : law.atoms)
            lattice_atoms[c].push_back({atom.x.num * (denom / atom.x.den), atom.xi, atom.mass});
    }

    std::vector<LatticeStep> steps(n);
    for (std::size_t i = 0; i < n; ++i) {
        steps[i].atoms = &lattice_atoms[envseq.indices[i]];
        if (functional.windows) {
            steps[i].allow_lo = lattice_ceil((*functional.windows)[i].first * denom);
            steps[i].allow_hi = lattice_floor((*functional.windows)[i].second * denom);
        }
        if (functional.caps) steps[i].xi_cap = (*functional.caps)[i];
    }
    const LatticeDpState state = run_lattice_dp(steps, 0, budget);
    if (state.dead) return 0.0;
    const double k_n = table.cumulative_kappa()[n];
    double total = 0.0;
    for (std::size_t i = 0; i < state.mass.size(); ++i) {
        const double chi =
            static_cast<double>(state.offset_lo + static_cast<std::int64_t>(i)) / denom;
        total += state.mass[i] * std::exp(k_n + table.vartheta() * chi + state.log_scale);
    }
    return total;
}

}  // namespace

double exhaustive_oracle(const SpineStepTable& table, const PathFunctional& functional,
                         std::size_t n, OracleMode mode, std::uint64_t budget) {
    functional.validate(n);
    if (n > table.envseq().length()) throw ConfigError("horizon longer than environment");
    return mode == OracleMode::Genealogy ? genealogy_sum(table, functional, n, budget)
                                         : spine_dp_sum(table, functional, n, budget);
}

}  // namespace brwre
