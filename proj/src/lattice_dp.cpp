#include "brwre/lattice_dp.hpp"

#include <algorithm>
#include <cmath>

#include "brwre/errors.hpp"

namespace brwre {

namespace {
constexpr double kBoundaryTol = 1e-9;
constexpr double kRenormFloor = 1e-280;
}  // namespace

std::int64_t lattice_ceil(double v) {
    return static_cast<std::int64_t>(std::ceil(v - kBoundaryTol * std::max(1.0, std::abs(v))));
}

std::int64_t lattice_floor(double v) {
    return static_cast<std::int64_t>(std::floor(v + kBoundaryTol * std::max(1.0, std::abs(v))));
}

double LatticeDpState::total() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
}

double LatticeDpState::log_total() const {
    const double t = total();
    if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
    return std::log(t) + log_scale;
}

LatticeDpState run_lattice_dp(const std::vector<LatticeStep>& steps, std::int64_t start,
                              std::uint64_t max_states) {
    LatticeDpState state;
    state.offset_lo = start;
    state.mass = {1.0};
    for (const auto& step : steps) {
        if (state.dead) break;
        std::int64_t min_dx = std::numeric_limits<std::int64_t>::max();
        std::int64_t max_dx = std::numeric_limits<std::int64_t>::min();
        for (const auto& atom : *step.atoms) {
            if (static_cast<double>(atom.xi) > step.xi_cap) continue;
            min_dx = std::min(min_dx, atom.dx);
            max_dx = std::max(max_dx, atom.dx);
        }
        if (min_dx > max_dx) { state.dead = true; break; }  // every atom capped away

        const std::int64_t cur_lo = state.offset_lo;
        const std::int64_t cur_hi = cur_lo + static_cast<std::int64_t>(state.mass.size()) - 1;
        const std::int64_t new_lo = std::max(step.allow_lo, cur_lo + min_dx);
        const std::int64_t new_hi = std::min(step.allow_hi, cur_hi + max_dx);
        if (new_lo > new_hi) { state.dead = true; break; }
        const std::uint64_t width = static_cast<std::uint64_t>(new_hi - new_lo + 1);
        if (max_states != 0 && width > max_states)
            throw BudgetError("lattice DP interval of " + std::to_string(width) +
                              " states exceeds budget " + std::to_string(max_states));

        std::vector<double> next(width, 0.0);
        for (std::size_t i = 0; i < state.mass.size(); ++i) {
            const double m = state.mass[i];
            if (m == 0.0) continue;
            const std::int64_t pos = cur_lo + static_cast<std::int64_t>(i);
            for (const auto& atom : *step.atoms) {
                if (static_cast<double>(atom.xi) > step.xi_cap) continue;
                const std::int64_t p = pos + atom.dx;
                if (p < new_lo || p > new_hi) continue;
                next[static_cast<std::size_t>(p - new_lo)] += m * atom.mass;
            }
        }
        state.mass = std::move(next);
        state.offset_lo = new_lo;

        double total = 0.0;
        for (double m : state.mass) total += m;
        if (!(total > 0.0)) { state.dead = true; break; }
        if (total < kRenormFloor) {
            const double inv = 1.0 / total;
            for (double& m : state.mass) m *= inv;
            state.log_scale += std::log(total);
        }
    }
    if (state.dead) {
        state.mass.clear();
        state.log_scale = -std::numeric_limits<double>::infinity();
    }
    return state;
}

}  // namespace brwre
