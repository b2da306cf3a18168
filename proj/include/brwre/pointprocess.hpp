#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "brwre/rational.hpp"
#include "brwre/rng.hpp"

namespace brwre {

// One reproduction outcome: the particle dies and leaves children at the
// listed displacements relative to it. An empty list encodes death without
// offspring.
struct OffspringAtom {
    double probability = 0.0;
    std::vector<Rational> displacements;

    std::size_t offspring_count() const { return displacements.size(); }
};

// Finite-support law of one reproduction event. Immutable after validation;
// safe to share read-only across workers.
class PointProcessLaw {
public:
    explicit PointProcessLaw(std::vector<OffspringAtom> atoms);

    const std::vector<OffspringAtom>& atoms() const { return atoms_; }

    // Largest offspring count over atoms.
    std::size_t max_offspring() const;

    // Smallest/largest displacement over all children of all atoms.
    Rational min_displacement() const;
    Rational max_displacement() const;

    // E[N^r] over atoms.
    double offspring_moment(double r) const;

    // lcm of displacement denominators; the law's positions live on Z / D.
    std::int64_t lattice_denominator() const;

private:
    std::vector<OffspringAtom> atoms_;
};

// Value and analytic derivatives of the log-Laplace transform
// kappa(theta) = log E sum_j exp(-theta * zeta_j) at one theta.
struct LaplaceProfile {
    double theta = 0.0;
    double L = 0.0;      // E sum_j exp(-theta zeta_j)
    double kappa = 0.0;  // log L
    double d1 = 0.0;
    double d2 = 0.0;
    double d4 = 0.0;
};

LaplaceProfile laplace_profile(const PointProcessLaw& law, double theta);

// The transform written as sum_i coef_i * exp(theta * exponent_i), one term
// per distinct displacement b (exponent = -b), exponents strictly decreasing.
struct ExpPolyTerm {
    double coefficient = 0.0;
    Rational exponent;  // -displacement
};
std::vector<ExpPolyTerm> exponential_polynomial(const PointProcessLaw& law);

// Draws one reproduction event; returns the displacement list of the chosen
// atom.
const std::vector<Rational>& sample_offspring(const PointProcessLaw& law, Rng& rng);
std::size_t sample_offspring_atom(const PointProcessLaw& law, double uniform);

// Joint law of (displacement X, offspring count xi) under the exp(-vartheta
// zeta) tilt, one output atom per distinct (displacement, count) pair.
struct SpineAtom {
    Rational x;
    std::uint64_t xi = 0;
    double mass = 0.0;
};

struct SpineStepLaw {
    std::vector<SpineAtom> atoms;
    double tilt = 0.0;
    double cap = std::numeric_limits<double>::infinity();

    double total_mass() const;
    double mean_x() const;
    double var_x() const;
    // E |x - E x|^p under the step masses.
    double central_abs_moment_x(double p) const;
    double xi_tail(double x) const;  // P(xi > x)
    double mgf_x(double lambda) const;  // E exp(lambda X)
};

SpineStepLaw spine_step_law(const PointProcessLaw& law, double vartheta,
                            double cap = std::numeric_limits<double>::infinity());

// Expected number of children landing in a tilted window:
//   E(1{N <= n_cap} sum_j 1{vartheta zeta_j + kappa(vartheta) in [lo, hi]}).
double window_mass(const PointProcessLaw& law, double vartheta, double n_cap,
                   double lo, double hi);

// min over all children of vartheta * zeta + kappa(vartheta); positive value
// means the tilted walk step T_1 is bounded away from (-inf, 0].
double min_tilted_step(const PointProcessLaw& law, double vartheta);

}  // namespace brwre
