#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace brwre {

// Absorbing dynamic program for a walk on the lattice Z/D. Positions are
// lattice integers; boundaries are real-valued cuts converted to inclusive
// integer intervals once per step. Mass outside the interval is killed.
struct LatticeAtom {
    std::int64_t dx = 0;
    std::uint64_t xi = 0;
    double mass = 0.0;
};

struct LatticeStep {
    const std::vector<LatticeAtom>* atoms = nullptr;
    std::int64_t allow_lo = std::numeric_limits<std::int64_t>::min();
    std::int64_t allow_hi = std::numeric_limits<std::int64_t>::max();
    double xi_cap = std::numeric_limits<double>::infinity();
};

struct LatticeDpState {
    std::vector<double> mass;   // mass[i] at position offset_lo + i
    std::int64_t offset_lo = 0;
    double log_scale = 0.0;     // accumulated renormalization
    bool dead = false;

    double total() const;
    double log_total() const;   // log of surviving mass including scale
};

// Converts a real interval to the inclusive lattice interval, with a small
// relative tolerance so that exact-rational boundaries are kept.
std::int64_t lattice_ceil(double v);
std::int64_t lattice_floor(double v);

// Runs the DP from unit mass at lattice position `start`. max_states guards
// the per-step interval width (0 disables the guard).
LatticeDpState run_lattice_dp(const std::vector<LatticeStep>& steps, std::int64_t start,
                              std::uint64_t max_states = 0);

}  // namespace brwre
