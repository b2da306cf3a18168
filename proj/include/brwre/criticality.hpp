#pragma once

#include <optional>
#include <string>
#include <vector>

#include "brwre/environment.hpp"

namespace brwre {

// Annealed log-Laplace values kappa(theta) = E kappa_1(theta) and derivatives
// (weight-averaged over components).
struct AnnealedProfile {
    double kappa = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

AnnealedProfile annealed_profile(const EnvironmentLaw& envlaw, double theta);

// Critical tilt and the dispersion constants built from it.
struct CriticalProfile {
    double vartheta = 0.0;
    double kappa0 = 0.0;       // kappa(0)
    double kappa_at = 0.0;     // kappa(vartheta)
    double sigma2 = 0.0;       // E (kappa_1 - vartheta kappa_1')^2
    double sigma2_star = 0.0;  // vartheta^2 E kappa_1''
};

// Solves kappa(theta) = theta * kappa'(theta) by bracketing bisection on the
// strictly decreasing residual; |residual| <= 1e-10 at the returned tilt.
CriticalProfile find_critical_theta(const EnvironmentLaw& envlaw);

// (sigma^2, sigma_*^2) as exact mixture moments of per-component closed forms.
std::pair<double, double> dispersion_params(const EnvironmentLaw& envlaw, double vartheta);

// Exponents of the integrability conditions.
struct AssumptionParams {
    double lambda0 = 3.5;
    double lambda1 = 2.5;
    double lambda2 = 4.0;
    double lambda3 = 3.5;
    double lambda4 = 0.5;   // tilt margin
    double lambda5 = -8.0;  // window parameter, <= -1
    double lambda6 = 1.0;

    void validate() const;
};

enum class Verdict { Satisfied, Violated, NotApplicable };

std::string to_string(Verdict v);

struct ConditionReport {
    std::string key;      // short tag, e.g. "root", "moment-drift", "window-low"
    Verdict verdict = Verdict::NotApplicable;
    double witness = 0.0;  // the decisive numeric value
    std::string detail;
};

struct AssumptionReport {
    std::vector<ConditionReport> conditions;
    double lambda5_used = 0.0;
    bool lambda5_scanned = false;
    bool all_satisfied = false;  // obstruction not flagged, every condition satisfied

    const ConditionReport* find(const std::string& key) const;
};

// Evaluates every condition as a decidable predicate on the finite mixture
// and records witness values. When params.lambda5 is NaN the window
// parameter is searched over {-1, -2, -4, ..., -1024}.
AssumptionReport assumption_report(const EnvironmentLaw& envlaw, const CriticalProfile& profile,
                                   const AssumptionParams& params);

// Scan for a window parameter giving positive mass in both tilted windows
// for every component; nullopt when the scan is exhausted.
std::optional<double> find_feasible_lambda5(const EnvironmentLaw& envlaw, double vartheta);

// Two-environment construction: validates the shape constraints (offspring
// bound, >= 2 support points, the sign conditions on the transform
// coefficients, min total mean >= 1) and returns the mixture.
struct TwoEnvResult {
    std::optional<EnvironmentLaw> law;
    int failed_step = 0;  // 0 when accepted, else 2..5
    std::string reason;

    bool accepted() const { return law.has_value(); }
};

TwoEnvResult two_env_example(double p, const PointProcessLaw& law_a, const PointProcessLaw& law_b);

// Mixture-weight interval on which the critical tilt is guaranteed to exist
// when both laws have leading coefficient < 1. The interval refers to the
// weight of the component whose tau zero-point is the larger one; `swapped`
// reports when that component is law_b.
struct AdmissibleRange {
    double c_minus = 0.0;
    double c_plus = 1.0;
    bool swapped = false;
    double theta_bar = 0.0;
    double lambda_lead = 0.0;   // Lambda of the theta_bar-side law at theta_bar
    double lambda_other = 0.0;  // Lambda of the other law at theta_bar
};

AdmissibleRange admissible_p_range(const PointProcessLaw& law_a, const PointProcessLaw& law_b);

// Per-component Lambda(theta) = kappa(theta) - theta kappa'(theta).
double component_drift(const PointProcessLaw& law, double theta);

}  // namespace brwre
