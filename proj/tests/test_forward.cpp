#include <doctest.h>

#include <cmath>

#include "brwre/criticality.hpp"
#include "brwre/errors.hpp"
#include "brwre/forward.hpp"
#include "test_laws.hpp"

using namespace brwre;
using namespace brwre::testing;

TEST_CASE("doubling without a barrier doubles every generation") {
    const auto env = degenerate_env(doubling_law());
    const auto seq = sample_environment(env, 3, 1);
    const SurvivalRun run = simulate_population(seq, nullptr, 3, SimulationCaps{}, 42);
    CHECK(run.sizes == std::vector<std::uint64_t>{1, 2, 4, 8});
    CHECK(run.survived);
    CHECK_FALSE(run.truncated);
    for (std::size_t i = 0; i <= 3; ++i) CHECK(run.min_positions[i] == 0.0);
}

TEST_CASE("a barrier below every child kills generation 1") {
    const auto env = degenerate_env(doubling_law());
    const auto seq = sample_environment(env, 3, 1);
    // phi(i) = -K_i/vt + d i^alpha with d = 0: children at 0 > phi(1) < 0
    BarrierSpec barrier{0.0, 1.0, 1.0};
    const SurvivalRun run = simulate_population(seq, &barrier, 3, SimulationCaps{}, 42);
    CHECK(run.sizes[1] == 0);
    CHECK_FALSE(run.survived);

    const SurvivalEstimate est = quenched_survival(seq, &barrier, 3, 200, 9, SimulationCaps{});
    CHECK(est.estimate.value == 0.0);
}

TEST_CASE("doubling with a generous barrier survives surely") {
    const auto env = degenerate_env(doubling_law());
    const auto seq = sample_environment(env, 4, 1);
    BarrierSpec barrier{5.0, 1.0, 1.0};
    const SurvivalEstimate est = quenched_survival(seq, &barrier, 4, 100, 9, SimulationCaps{});
    CHECK(est.estimate.value == 1.0);
    CHECK(est.estimate.stderr_ == 0.0);
}

TEST_CASE("population cap keeps the lowest positions and flags the run") {
    const auto env = degenerate_env(two_sided_law());
    const auto seq = sample_environment(env, 10, 3);
    SimulationCaps caps;
    caps.population_cap = 50;
    const SurvivalRun run = simulate_population(seq, nullptr, 10, caps, 7);
    CHECK(run.truncated);
    for (std::size_t i = 0; i <= 10; ++i) CHECK(run.sizes[i] <= 50);
    CHECK(run.survived);
}

TEST_CASE("mean growth matches the product of offspring means") {
    const auto env = two_env(0.5, two_sided_law(), mixed_law());
    const std::size_t n = 6;
    const auto seq = sample_environment(env, n, 5);
    double expected = 1.0;
    for (std::size_t i = 1; i <= n; ++i)
        expected *= laplace_profile(seq.law_at_step(i), 0.0).L;
    RunningStats sizes;
    SimulationCaps caps;  // large cap: no truncation at n = 6
    for (std::uint64_t r = 0; r < 4000; ++r) {
        const SurvivalRun run = simulate_population(seq, nullptr, n, caps, derive_seed(1234, {r}));
        sizes.add(static_cast<double>(run.sizes[n]));
    }
    CHECK(std::abs(sizes.mean() - expected) < 4.0 * sizes.stderr_of_mean());
}

TEST_CASE("raising the barrier is monotone under coupled seeds") {
    const auto env = two_env(0.5, two_sided_law(), mixed_law());
    const double vt = find_critical_theta(*env).vartheta;
    const auto seq = sample_environment(env, 12, 31);
    for (std::uint64_t r = 0; r < 300; ++r) {
        const std::uint64_t rep_seed = derive_seed(777, {r});
        BarrierSpec low{0.05, 1.0 / 3.0, vt};
        BarrierSpec high{0.8, 1.0 / 3.0, vt};
        const SurvivalRun run_low = simulate_population(seq, &low, 12, SimulationCaps{}, rep_seed);
        const SurvivalRun run_high =
            simulate_population(seq, &high, 12, SimulationCaps{}, rep_seed);
        // same random stream => superset population
        CHECK(run_high.sizes[12] >= run_low.sizes[12]);
        if (run_low.survived) CHECK(run_high.survived);
    }
}

TEST_CASE("exact survival probability agrees with Monte Carlo") {
    const auto env = two_env(0.5, two_sided_law(), mixed_law());
    const double vt = find_critical_theta(*env).vartheta;
    const auto seq = sample_environment(env, 4, 11);
    BarrierSpec barrier{0.4, 1.0 / 3.0, vt};
    const double exact = exact_survival_probability(seq, barrier, 4, SimulationCaps{});
    CHECK(exact > 0.0);
    CHECK(exact < 1.0);
    const SurvivalEstimate est =
        quenched_survival(seq, &barrier, 4, 200000, 3, SimulationCaps{});
    CHECK(std::abs(est.estimate.value - exact) < 4.0 * est.estimate.stderr_);
}

TEST_CASE("exact survival of doubling with and without room") {
    const auto env = degenerate_env(doubling_law());
    const auto seq = sample_environment(env, 3, 1);
    BarrierSpec generous{2.0, 1.0, 1.0};
    CHECK(exact_survival_probability(seq, generous, 3, SimulationCaps{}) ==
          doctest::Approx(1.0));
    BarrierSpec hopeless{0.0, 1.0, 1.0};
    CHECK(exact_survival_probability(seq, hopeless, 3, SimulationCaps{}) ==
          doctest::Approx(0.0));
}

TEST_CASE("second moment bound: zero-variance case is tight") {
    const auto env = degenerate_env(doubling_law());
    const auto seq = sample_environment(env, 2, 1);
    BarrierSpec barrier{5.0, 1.0, 1.0};
    SimulationCaps caps = yhat_caps(2);
    const SecondMomentBound bound =
        second_moment_bound(seq, 1.0, barrier, 2, MomentMode::Exhaustive, caps);
    CHECK(bound.mean == doctest::Approx(4.0));
    CHECK(bound.second_moment == doctest::Approx(16.0));
    CHECK(bound.lower_bound == doctest::Approx(1.0));
}

TEST_CASE("second moment bound sits below the exact survival probability") {
    Rng rng(55);
    int checked = 0;
    for (int trial = 0; trial < 30 && checked < 12; ++trial) {
        const auto env = random_env(rng, 2);
        double vt;
        try {
            vt = find_critical_theta(*env).vartheta;
        } catch (const NumericError&) {
            continue;
        }
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 3.0);
        const auto seq =
            sample_environment(env, n, derive_seed(55, {static_cast<std::uint64_t>(trial)}));
        BarrierSpec barrier{0.2 + rng.uniform01(), 1.0 / 3.0, vt};
        SimulationCaps caps = yhat_caps(n);
        try {
            const SecondMomentBound bound =
                second_moment_bound(seq, vt, barrier, n, MomentMode::Exhaustive, caps);
            const double exact_hat = exact_survival_probability(seq, barrier, n, caps);
            const double exact_full =
                exact_survival_probability(seq, barrier, n, SimulationCaps{});
            CHECK(bound.lower_bound <= exact_hat + 1e-9);
            CHECK(exact_hat <= exact_full + 1e-12);
            ++checked;
        } catch (const BudgetError&) {
            continue;
        }
    }
    CHECK(checked >= 10);
}

TEST_CASE("second moment bound via Monte Carlo is consistent with survival") {
    const auto env = two_env(0.5, two_sided_law(), mixed_law());
    const double vt = find_critical_theta(*env).vartheta;
    const std::size_t n = 10;
    const auto seq = sample_environment(env, n, 13);
    BarrierSpec barrier{0.5, 1.0 / 3.0, vt};
    SimulationCaps caps = yhat_caps(n);
    const SecondMomentBound bound =
        second_moment_bound(seq, vt, barrier, n, MomentMode::Mc, caps, 20000, 77);
    const SurvivalEstimate est = quenched_survival(seq, &barrier, n, 20000, 78, caps);
    CHECK(bound.lower_bound - 3.0 * bound.bound_stderr <=
          est.estimate.value + 3.0 * est.estimate.stderr_);
}

TEST_CASE("first-order drift of the minimum at desk scale") {
    // short-horizon version of the speed check; the acceptance suite runs
    // the full n = 500 configuration
    const auto env = degenerate_env(two_sided_law());
    const auto profile = find_critical_theta(*env);
    const double speed = -profile.kappa_at / profile.vartheta;
    const std::size_t n = 150;
    const auto seq = sample_environment(env, n, 7);
    SimulationCaps caps;
    caps.population_cap = 8000;
    RunningStats ratio;
    for (std::uint64_t r = 0; r < 40; ++r) {
        const SurvivalRun run = simulate_population(seq, nullptr, n, caps, derive_seed(5, {r}));
        REQUIRE(run.survived);
        ratio.add(run.min_positions[n] / static_cast<double>(n));
    }
    CHECK(std::abs(ratio.mean() - speed) < 0.1);
}
