#include "brwre/criticality.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "brwre/errors.hpp"

namespace brwre {

namespace {

constexpr double kRootTol = 1e-10;

double drift_residual(const EnvironmentLaw& envlaw, double theta) {
    const AnnealedProfile p = annealed_profile(envlaw, theta);
    return p.kappa - theta * p.d1;
}

}  // namespace

double component_drift(const PointProcessLaw& law, double theta) {
    const LaplaceProfile p = laplace_profile(law, theta);
    return p.kappa - theta * p.d1;
}

AnnealedProfile annealed_profile(const EnvironmentLaw& envlaw, double theta) {
    AnnealedProfile out;
    std::size_t index = 0;
    for (const auto& comp : envlaw.components()) {
        LaplaceProfile p;
        try {
            p = laplace_profile(comp.law, theta);
        } catch (const NumericError& e) {
            throw NumericError("component " + std::to_string(index) + ": " + e.what());
        }
        out.kappa += comp.weight * p.kappa;
        out.d1 += comp.weight * p.d1;
        out.d2 += comp.weight * p.d2;
        ++index;
    }
    return out;
}

CriticalProfile find_critical_theta(const EnvironmentLaw& envlaw) {
    const double kappa0 = annealed_profile(envlaw, 0.0).kappa;
    if (!(kappa0 > 0.0))
        throw NumericError("no critical tilt: kappa(0) = " + std::to_string(kappa0) +
                           " is not positive (mean offspring count <= 1)");
    double lo = 1e-6;
    if (drift_residual(envlaw, lo) <= 0.0)
        throw NumericError("no critical tilt: residual already non-positive at theta=1e-6");
    // grow the bracket geometrically until the strictly decreasing residual
    // changes sign; bail out once exp(-theta*zeta) would overflow
    // a genuine root needs a strict sign change; the residual can flatten to
    // +0 when the leading coefficient is exactly 1
    double hi = 1.0;
    constexpr double kThetaMax = 600.0;
    constexpr double kStrictNegative = -1e-8;
    for (;;) {
        bool crossed;
        try {
            crossed = drift_residual(envlaw, hi) < kStrictNegative;
        } catch (const NumericError&) {
            crossed = false;  // overflow guard
            hi = kThetaMax + 1.0;
        }
        if (crossed) break;
        hi *= 2.0;
        if (hi > kThetaMax)
            throw NumericError(
                "no critical tilt: kappa(theta) - theta*kappa'(theta) never turns negative "
                "(its limit, the log of the leading transform coefficient, is >= 0)");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f = drift_residual(envlaw, mid);
        if (std::abs(f) <= kRootTol) { lo = hi = mid; break; }
        if (f > 0.0) lo = mid; else hi = mid;
        if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
    }
    const double vartheta = 0.5 * (lo + hi);
    CriticalProfile profile;
    profile.vartheta = vartheta;
    profile.kappa0 = kappa0;
    profile.kappa_at = annealed_profile(envlaw, vartheta).kappa;
    const auto [s2, s2star] = dispersion_params(envlaw, vartheta);
    profile.sigma2 = s2;
    profile.sigma2_star = s2star;
    if (!(profile.sigma2_star > 0.0))
        throw NumericError("degenerate dispersion: sigma_*^2 = 0 (single support point)");
    return profile;
}

std::pair<double, double> dispersion_params(const EnvironmentLaw& envlaw, double vartheta) {
    double sigma2 = 0.0;
    double sigma2_star = 0.0;
    for (const auto& comp : envlaw.components()) {
        const LaplaceProfile p = laplace_profile(comp.law, vartheta);
        const double lambda = p.kappa - vartheta * p.d1;
        sigma2 += comp.weight * lambda * lambda;
        sigma2_star += comp.weight * p.d2;
    }
    return {sigma2, vartheta * vartheta * sigma2_star};
}

void AssumptionParams::validate() const {
    if (!(lambda5 <= -1.0)) throw ConfigError("lambda5 must be <= -1");
    if (!(lambda6 >= 1.0)) throw ConfigError("lambda6 must be >= 1");
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Satisfied: return "satisfied";
        case Verdict::Violated: return "violated";
        default: return "not-applicable";
    }
}

const ConditionReport* AssumptionReport::find(const std::string& key) const {
    for (const auto& c : conditions)
        if (c.key == key) return &c;
    return nullptr;
}

std::optional<double> find_feasible_lambda5(const EnvironmentLaw& envlaw, double vartheta) {
    for (double l5 = -1.0; l5 >= -1024.0; l5 *= 2.0) {
        bool ok = true;
        for (const auto& comp : envlaw.components()) {
            const double low = window_mass(comp.law, vartheta, -l5, l5, 1.0 / l5);
            const double high = window_mass(comp.law, vartheta, -l5, 0.0, -l5);
            if (!(low > 0.0) || !(high > 0.0)) { ok = false; break; }
        }
        if (ok) return l5;
    }
    return std::nullopt;
}

AssumptionReport assumption_report(const EnvironmentLaw& envlaw, const CriticalProfile& profile,
                                   const AssumptionParams& params) {
    AssumptionReport report;
    const double vt = profile.vartheta;

    double lambda5 = params.lambda5;
    if (std::isnan(lambda5)) {
        report.lambda5_scanned = true;
        lambda5 = find_feasible_lambda5(envlaw, vt).value_or(-1024.0);
    }
    report.lambda5_used = lambda5;

    auto add = [&report](std::string key, Verdict v, double witness, std::string detail) {
        report.conditions.push_back({std::move(key), v, witness, std::move(detail)});
    };

    // critical equation: kappa(0) > 0 and vanishing drift at the tilt
    {
        const double residual = profile.kappa_at - vt * annealed_profile(envlaw, vt).d1;
        const bool ok = profile.kappa0 > 0.0 && std::abs(residual) <= 1e-9;
        std::ostringstream os;
        os << "kappa(0)=" << profile.kappa0 << " residual=" << residual
           << " vartheta=" << vt;
        add("root", ok ? Verdict::Satisfied : Verdict::Violated, residual, os.str());
    }

    // drift moment E |kappa_1 - vartheta kappa_1'|^lambda0
    {
        double moment = 0.0;
        for (const auto& comp : envlaw.components())
            moment += comp.weight * std::pow(std::abs(component_drift(comp.law, vt)),
                                             params.lambda0);
        add("moment-drift", std::isfinite(moment) ? Verdict::Satisfied : Verdict::Violated,
            moment, "E|kappa_1 - vt*kappa_1'|^lambda0");
    }

    // centered-displacement moment:
    // E [ (E_L sum |zeta + kappa_1'|^lambda2 e^{-vt zeta} / E_L sum e^{-vt zeta})^lambda1 ]
    {
        double moment = 0.0;
        for (const auto& comp : envlaw.components()) {
            const LaplaceProfile p = laplace_profile(comp.law, vt);
            double num = 0.0;
            for (const auto& atom : comp.law.atoms())
                for (const auto& z : atom.displacements)
                    num += atom.probability *
                           std::pow(std::abs(z.value() + p.d1), params.lambda2) *
                           std::exp(-vt * z.value());
            moment += comp.weight * std::pow(num / p.L, params.lambda1);
        }
        add("moment-centered", std::isfinite(moment) ? Verdict::Satisfied : Verdict::Violated,
            moment, "E[(tilted centered |zeta|^lambda2 mean)^lambda1]");
    }

    // shifted-tilt and offspring moments
    {
        double moment = 0.0;
        double log_n_moment = 0.0;
        bool finite = true;
        for (const auto& comp : envlaw.components()) {
            try {
                const double k_shift = laplace_profile(comp.law, vt + params.lambda4).kappa;
                const double k_at = laplace_profile(comp.law, vt).kappa;
                moment += comp.weight * (std::pow(std::abs(k_shift), params.lambda3) +
                                         std::pow(std::abs(k_at), params.lambda3));
            } catch (const NumericError&) {
                finite = false;
            }
            const double n_moment = comp.law.offspring_moment(1.0 + params.lambda4);
            log_n_moment +=
                comp.weight * std::pow(std::max(0.0, std::log(std::max(1.0, n_moment))),
                                       params.lambda3);
        }
        std::ostringstream os;
        os << "kappa moments=" << moment << " log+ offspring moment=" << log_n_moment;
        add("moment-tilt", finite && std::isfinite(moment + log_n_moment)
                               ? Verdict::Satisfied
                               : Verdict::Violated,
            moment, os.str());
    }

    // window masses; for a finite mixture the log^- moments are finite iff
    // every component puts positive expected count in the window
    double min_low = std::numeric_limits<double>::infinity();
    double min_high = std::numeric_limits<double>::infinity();
    for (const auto& comp : envlaw.components()) {
        min_low = std::min(min_low, window_mass(comp.law, vt, -lambda5, lambda5, 1.0 / lambda5));
        min_high = std::min(min_high, window_mass(comp.law, vt, -lambda5, 0.0, -lambda5));
    }
    add("window-low", min_low > 0.0 ? Verdict::Satisfied : Verdict::Violated, min_low,
        "min component mass of [lambda5, 1/lambda5] tilted window");
    add("window-high", min_high > 0.0 ? Verdict::Satisfied : Verdict::Violated, min_high,
        "min component mass of [0, |lambda5|] tilted window");

    // obstruction: some component has every tilted child value bounded away
    // from (-inf, 0], so a positive fraction of environments carries zero
    // mass below any epsilon
    {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& comp : envlaw.components())
            worst = std::max(worst, min_tilted_step(comp.law, vt));
        const bool flagged = worst > 0.0;
        add("obstruction", flagged ? Verdict::Violated : Verdict::Satisfied, worst,
            "max over components of min tilted child value (positive => flagged)");
    }

    // dispersion ratio sigma^2/sigma_*^2 < (lambda2-2)/(lambda0-2)
    {
        const double ratio = profile.sigma2 / profile.sigma2_star;
        const double bound = (params.lambda2 - 2.0) / (params.lambda0 - 2.0);
        std::ostringstream os;
        os << "ratio=" << ratio << " bound=" << bound;
        add("dispersion-ratio", ratio < bound ? Verdict::Satisfied : Verdict::Violated, ratio,
            os.str());
    }

    // exponent ranges
    {
        const bool ok = params.lambda0 > 3.0 && params.lambda1 > 2.0 && params.lambda2 > 2.0 &&
                        params.lambda3 > 3.0 && params.lambda4 > 0.0 && lambda5 <= -1.0 &&
                        params.lambda6 >= 1.0;
        add("exponents", ok ? Verdict::Satisfied : Verdict::Violated, params.lambda0,
            "lambda0>3 lambda1>2 lambda2>2 lambda3>3 lambda4>0 lambda5<=-1 lambda6>=1");
    }

    report.all_satisfied = true;
    for (const auto& c : report.conditions)
        if (c.verdict == Verdict::Violated) report.all_satisfied = false;
    return report;
}

namespace {

struct ExpPolyShape {
    std::vector<ExpPolyTerm> terms;
    double coef_sum = 0.0;
    double lead_coef = 0.0;  // coefficient of the smallest displacement
    double lead_b = 0.0;     // the smallest displacement itself
};

ExpPolyShape shape_of(const PointProcessLaw& law) {
    ExpPolyShape s;
    s.terms = exponential_polynomial(law);
    for (const auto& t : s.terms) s.coef_sum += t.coefficient;
    // terms are ordered by descending exponent = ascending displacement
    s.lead_coef = s.terms.front().coefficient;
    s.lead_b = -s.terms.front().exponent.value();
    return s;
}

// tau(theta) = theta * b_1 + log L(theta); strictly decreasing when the law
// has >= 2 support points
double tau_value(const PointProcessLaw& law, double lead_b, double theta) {
    return theta * lead_b + laplace_profile(law, theta).kappa;
}

double tau_zero_point(const PointProcessLaw& law, double lead_b) {
    if (tau_value(law, lead_b, 0.0) <= 0.0) return 0.0;
    double hi = 1.0;
    while (tau_value(law, lead_b, hi) > 0.0) {
        hi *= 2.0;
        if (hi > 700.0) throw NumericError("tau has no zero point below theta=700");
    }
    double lo = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (tau_value(law, lead_b, mid) > 0.0) lo = mid; else hi = mid;
        if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TwoEnvResult two_env_example(double p, const PointProcessLaw& law_a,
                             const PointProcessLaw& law_b) {
    TwoEnvResult result;
    if (p < 0.0 || p > 1.0) throw ConfigError("mixture weight must lie in [0, 1]");

    if (law_a.max_offspring() > 2024 || law_b.max_offspring() > 2024) {
        result.failed_step = 2;
        result.reason = "offspring count exceeds 2024";
        return result;
    }
    const ExpPolyShape sa = shape_of(law_a);
    const ExpPolyShape sb = shape_of(law_b);
    if (sa.terms.size() < 2 || sb.terms.size() < 2) {
        result.failed_step = 3;
        result.reason = "law needs >= 2 distinct displacement values";
        return result;
    }
    const double growth = p * std::log(sa.coef_sum) + (1.0 - p) * std::log(sb.coef_sum);
    const double lead = p * std::log(sa.lead_coef) + (1.0 - p) * std::log(sb.lead_coef);
    if (!(growth > 0.0)) {
        std::ostringstream os;
        os << "p*log(sum a) + (1-p)*log(sum a~) = " << growth << " is not > 0";
        result.failed_step = 4;
        result.reason = os.str();
        return result;
    }
    if (!(lead < 0.0)) {
        std::ostringstream os;
        os << "p*log(a_1) + (1-p)*log(a~_1) = " << lead << " is not < 0";
        result.failed_step = 4;
        result.reason = os.str();
        return result;
    }
    if (!(std::min(sa.coef_sum, sb.coef_sum) >= 1.0)) {
        std::ostringstream os;
        os << "min coefficient sum " << std::min(sa.coef_sum, sb.coef_sum) << " < 1";
        result.failed_step = 5;
        result.reason = os.str();
        return result;
    }
    result.law = EnvironmentLaw({{p, law_a}, {1.0 - p, law_b}});
    return result;
}

AdmissibleRange admissible_p_range(const PointProcessLaw& law_a, const PointProcessLaw& law_b) {
    const ExpPolyShape sa = shape_of(law_a);
    const ExpPolyShape sb = shape_of(law_b);
    if (sa.terms.size() < 2 || sb.terms.size() < 2)
        throw NumericError("admissible_p_range: laws need >= 2 distinct displacement values");
    if (!(std::max(sa.lead_coef, sb.lead_coef) < 1.0))
        throw NumericError("admissible_p_range: leading coefficient max{a_1, a~_1} = " +
                           std::to_string(std::max(sa.lead_coef, sb.lead_coef)) + " is >= 1");
    const double theta0_a = tau_zero_point(law_a, sa.lead_b);
    const double theta0_b = tau_zero_point(law_b, sb.lead_b);

    AdmissibleRange range;
    range.swapped = theta0_b > theta0_a;
    range.theta_bar = std::max(theta0_a, theta0_b);
    const PointProcessLaw& lead_law = range.swapped ? law_b : law_a;
    const PointProcessLaw& other_law = range.swapped ? law_a : law_b;
    range.lambda_lead = component_drift(lead_law, range.theta_bar);
    range.lambda_other = component_drift(other_law, range.theta_bar);
    range.c_plus = 1.0;
    range.c_minus =
        -std::min(0.0, range.lambda_other) / (range.lambda_lead - range.lambda_other) + 0.0;
    return range;
}

}  // namespace brwre
