#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "brwre/environment.hpp"
#include "brwre/mc.hpp"

namespace brwre {

// Particle positions of one generation, compressed on the lattice Z/D as
// sorted (position, count) pairs.
struct PopulationSnapshot {
    std::size_t generation = 0;
    std::vector<std::pair<std::int64_t, std::uint64_t>> positions;
    bool truncated = false;

    std::uint64_t size() const;
};

struct SimulationCaps {
    std::uint64_t population_cap = 1'000'000;
    // parents with more offspring than this are erased with their children
    double offspring_cap = std::numeric_limits<double>::infinity();
    // when set, children below -floor_offset - K_i / vartheta are erased
    std::optional<double> floor_offset;
};

struct SurvivalRun {
    std::vector<std::uint64_t> sizes;        // Y_0..Y_n
    std::vector<double> min_positions;       // NaN once extinct
    bool survived = false;
    bool truncated = false;
};

// Quenched forward simulation with optional barrier pruning. A child at v in
// generation i survives iff v <= phi(i) (and v is above the floor when one is
// set). When the population cap binds the lowest positions are kept and the
// run is flagged; survival is then a lower-bound indicator.
SurvivalRun simulate_population(const EnvironmentSequence& envseq,
                                const BarrierSpec* barrier, std::size_t n,
                                const SimulationCaps& caps, std::uint64_t rep_seed);

struct SurvivalEstimate {
    McEstimate estimate;
    double truncated_fraction = 0.0;
};

SurvivalEstimate quenched_survival(const EnvironmentSequence& envseq, const BarrierSpec* barrier,
                                   std::size_t n, std::size_t replicates, std::uint64_t seed,
                                   const SimulationCaps& caps, int workers = 1);

// Exact P(Y_n > 0) by the quenched extinction recursion on the lattice
// (children of one particle behave independently). Budget counts memoized
// (generation, position) states.
double exact_survival_probability(const EnvironmentSequence& envseq, const BarrierSpec& barrier,
                                  std::size_t n, const SimulationCaps& caps,
                                  std::uint64_t budget = 10'000'000);

struct SecondMomentBound {
    double lower_bound = 0.0;   // (E Yhat)^2 / E Yhat^2
    double mean = 0.0;          // E Yhat_n
    double second_moment = 0.0; // E Yhat_n^2
    double bound_stderr = 0.0;  // 0 in exhaustive mode
};

enum class MomentMode { Exhaustive, Mc };

// Second-moment lower bound on survival for the truncated population
// (position floor -n^{1/3} - K_i/vartheta, offspring cap exp(n^{1/3}) by
// default; both configurable through caps).
SecondMomentBound second_moment_bound(const EnvironmentSequence& envseq, double vartheta,
                                      const BarrierSpec& barrier, std::size_t n, MomentMode mode,
                                      const SimulationCaps& caps, std::size_t replicates = 0,
                                      std::uint64_t seed = 0, int workers = 1,
                                      std::uint64_t budget = 10'000'000);

// Caps preset for the truncated count: floor offset n^{1/3}, offspring cap
// exp(n^{cap_exponent}).
SimulationCaps yhat_caps(std::size_t n, double cap_exponent = 1.0 / 3.0,
                         std::uint64_t population_cap = 1'000'000);

}  // namespace brwre
