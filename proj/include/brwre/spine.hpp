#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "brwre/environment.hpp"
#include "brwre/mc.hpp"

namespace brwre {

// One realization of the tilted walk: chi_0 = 0, T_i = K_i + vartheta chi_i,
// with (chi_i - chi_{i-1}, xi_i) drawn per step from the tilted step law.
struct SpineTrajectory {
    std::vector<double> chi;
    std::vector<double> T;
    std::vector<std::uint64_t> xi;  // xi[i-1] belongs to step i
};

// Declarative path functional: product of per-generation position windows on
// chi and per-generation offspring-count caps. Absent parts default to 1.
struct PathFunctional {
    std::optional<std::vector<std::pair<double, double>>> windows;  // size n
    std::optional<std::vector<double>> caps;                        // size n

    static PathFunctional constant_one() { return {}; }
    void validate(std::size_t n) const;
    bool accepts(const SpineTrajectory& traj) const;
};

// Per-step tilted laws for an environment realization, cached per component.
class SpineStepTable {
public:
    SpineStepTable(const EnvironmentSequence& envseq, double vartheta);

    const SpineStepLaw& at_step(std::size_t step) const {  // step in 1..n
        return laws_[envseq_->indices[step - 1]];
    }
    double vartheta() const { return vartheta_; }
    const std::vector<double>& cumulative_kappa() const { return cumulative_; }
    const EnvironmentSequence& envseq() const { return *envseq_; }

private:
    const EnvironmentSequence* envseq_;
    double vartheta_;
    std::vector<SpineStepLaw> laws_;
    std::vector<double> cumulative_;
};

SpineTrajectory sample_spine(const SpineStepTable& table, std::size_t n, Rng& rng);

// Monte Carlo mean of exp(T_n) * f(chi) * 1{xi <= caps} over independent
// spine trajectories.
McEstimate many_to_one_estimate(const SpineStepTable& table, const PathFunctional& functional,
                                std::size_t n, std::size_t replicates, std::uint64_t seed);

enum class OracleMode { Genealogy, SpineDp };

// Exact value of E sum_{|u|=n} f(V(u_i)) 1{N(u_{i-1}) <= A_i} computed two
// independent ways: Genealogy walks every (atom, child) lineage of the
// original reproduction laws; SpineDp runs the tilted lattice walk with
// exp(T_n) terminal weights. The two agree by the change of measure behind
// the estimator above.
double exhaustive_oracle(const SpineStepTable& table, const PathFunctional& functional,
                         std::size_t n, OracleMode mode, std::uint64_t budget = 10'000'000);

}  // namespace brwre
