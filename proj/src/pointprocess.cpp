#include "brwre/pointprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "brwre/errors.hpp"

namespace brwre {

Rational parse_rational(const std::string& text) {
    std::string s = text;
    // fraction form
    if (auto slash = s.find('/'); slash != std::string::npos) {
        const long long n = std::stoll(s.substr(0, slash));
        const long long d = std::stoll(s.substr(slash + 1));
        return Rational(n, d);
    }
    bool negative = false;
    std::size_t pos = 0;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        negative = (s[pos] == '-');
        ++pos;
    }
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool seen_digit = false;
    bool after_point = false;
    for (; pos < s.size(); ++pos) {
        const char c = s[pos];
        if (c == '.') {
            if (after_point) throw ConfigError("malformed number '" + text + "'");
            after_point = true;
            continue;
        }
        if (c < '0' || c > '9') throw ConfigError("malformed number '" + text + "'");
        seen_digit = true;
        num = num * 10 + (c - '0');
        if (after_point) den *= 10;
    }
    if (!seen_digit) throw ConfigError("malformed number '" + text + "'");
    return Rational(negative ? -num : num, den);
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    const std::int64_t scaled = a / std::gcd(a, b);
    std::int64_t out;
    if (__builtin_mul_overflow(scaled, b, &out))
        throw NumericError(
            "incommensurable displacement lattice: common denominator exceeds 64 bits");
    return out;
}

PointProcessLaw::PointProcessLaw(std::vector<OffspringAtom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw ConfigError("point process law has no atoms");
    double total = 0.0;
    bool has_offspring = false;
    for (const auto& atom : atoms_) {
        if (!(atom.probability > 0.0)) throw ConfigError("atom probability must be > 0");
        total += atom.probability;
        if (!atom.displacements.empty()) has_offspring = true;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ConfigError("atom probabilities sum to " + std::to_string(total) + ", not 1");
    if (!has_offspring)
        throw ConfigError("law has no atom with offspring; Laplace transform is identically 0");
}

std::size_t PointProcessLaw::max_offspring() const {
    std::size_t m = 0;
    for (const auto& atom : atoms_) m = std::max(m, atom.offspring_count());
    return m;
}

Rational PointProcessLaw::min_displacement() const {
    bool first = true;
    Rational best;
    for (const auto& atom : atoms_)
        for (const auto& z : atom.displacements)
            if (first || z < best) { best = z; first = false; }
    return best;
}

Rational PointProcessLaw::max_displacement() const {
    bool first = true;
    Rational best;
    for (const auto& atom : atoms_)
        for (const auto& z : atom.displacements)
            if (first || best < z) { best = z; first = false; }
    return best;
}

double PointProcessLaw::offspring_moment(double r) const {
    double sum = 0.0;
    for (const auto& atom : atoms_)
        sum += atom.probability * std::pow(static_cast<double>(atom.offspring_count()), r);
    return sum;
}

std::int64_t PointProcessLaw::lattice_denominator() const {
    std::int64_t d = 1;
    for (const auto& atom : atoms_)
        for (const auto& z : atom.displacements) d = lcm64(d, z.den);
    return d;
}

LaplaceProfile laplace_profile(const PointProcessLaw& law, double theta) {
    if (!std::isfinite(theta)) throw NumericError("laplace_profile: theta not finite");
    // L^(k)(theta) = E sum_j (-zeta_j)^k exp(-theta zeta_j), k = 0..4
    double l[5] = {0, 0, 0, 0, 0};
    for (const auto& atom : law.atoms()) {
        for (const auto& z : atom.displacements) {
            const double zeta = z.value();
            const double w = atom.probability * std::exp(-theta * zeta);
            double pow_mz = 1.0;
            for (int k = 0; k <= 4; ++k) {
                l[k] += w * pow_mz;
                pow_mz *= -zeta;
            }
        }
    }
    if (!(l[0] > 0.0) || !std::isfinite(l[0]))
        throw NumericError("laplace_profile: transform not finite and positive at theta=" +
                           std::to_string(theta));
    LaplaceProfile p;
    p.theta = theta;
    p.L = l[0];
    p.kappa = std::log(l[0]);
    const double r1 = l[1] / l[0];
    const double r2 = l[2] / l[0];
    const double r3 = l[3] / l[0];
    const double r4 = l[4] / l[0];
    // cumulants of the tilted sign-flipped displacement: kappa = log L
    p.d1 = r1;
    p.d2 = r2 - r1 * r1;
    p.d4 = r4 - 4.0 * r3 * r1 - 3.0 * r2 * r2 + 12.0 * r2 * r1 * r1 - 6.0 * r1 * r1 * r1 * r1;
    return p;
}

std::vector<ExpPolyTerm> exponential_polynomial(const PointProcessLaw& law) {
    std::map<Rational, double> coef;  // keyed by displacement b
    for (const auto& atom : law.atoms())
        for (const auto& z : atom.displacements) coef[z] += atom.probability;
    std::vector<ExpPolyTerm> terms;
    terms.reserve(coef.size());
    // displacement ascending => exponent (-b) descending
    for (const auto& [b, c] : coef) terms.push_back({c, Rational(-b.num, b.den)});
    return terms;
}

std::size_t sample_offspring_atom(const PointProcessLaw& law, double uniform) {
    double acc = 0.0;
    const auto& atoms = law.atoms();
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
        acc += atoms[i].probability;
        if (uniform < acc) return i;
    }
    return atoms.size() - 1;
}

const std::vector<Rational>& sample_offspring(const PointProcessLaw& law, Rng& rng) {
    return law.atoms()[sample_offspring_atom(law, rng.uniform01())].displacements;
}

double SpineStepLaw::total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass;
    return s;
}

double SpineStepLaw::mean_x() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass * a.x.value();
    return s;
}

double SpineStepLaw::var_x() const {
    const double m = mean_x();
    double s = 0.0;
    for (const auto& a : atoms) {
        const double d = a.x.value() - m;
        s += a.mass * d * d;
    }
    return s;
}

double SpineStepLaw::central_abs_moment_x(double p) const {
    const double m = mean_x();
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass * std::pow(std::abs(a.x.value() - m), p);
    return s;
}

double SpineStepLaw::xi_tail(double x) const {
    double s = 0.0;
    for (const auto& a : atoms)
        if (static_cast<double>(a.xi) > x) s += a.mass;
    return s;
}

double SpineStepLaw::mgf_x(double lambda) const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass * std::exp(lambda * a.x.value());
    return s;
}

SpineStepLaw spine_step_law(const PointProcessLaw& law, double vartheta, double cap) {
    const LaplaceProfile prof = laplace_profile(law, vartheta);
    std::map<std::pair<Rational, std::uint64_t>, double> mass;
    for (const auto& atom : law.atoms()) {
        const auto xi = static_cast<std::uint64_t>(atom.offspring_count());
        if (static_cast<double>(xi) > cap) continue;
        for (const auto& z : atom.displacements)
            mass[{z, xi}] += atom.probability * std::exp(-vartheta * z.value()) / prof.L;
    }
    SpineStepLaw out;
    out.tilt = vartheta;
    out.cap = cap;
    out.atoms.reserve(mass.size());
    for (const auto& [key, m] : mass) out.atoms.push_back({key.first, key.second, m});
    return out;
}

double window_mass(const PointProcessLaw& law, double vartheta, double n_cap,
                   double lo, double hi) {
    const double kappa = laplace_profile(law, vartheta).kappa;
    double s = 0.0;
    for (const auto& atom : law.atoms()) {
        if (static_cast<double>(atom.offspring_count()) > n_cap) continue;
        for (const auto& z : atom.displacements) {
            const double v = vartheta * z.value() + kappa;
            if (v >= lo && v <= hi) s += atom.probability;
        }
    }
    return s;
}

double min_tilted_step(const PointProcessLaw& law, double vartheta) {
    const double kappa = laplace_profile(law, vartheta).kappa;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& atom : law.atoms())
        for (const auto& z : atom.displacements)
            best = std::min(best, vartheta * z.value() + kappa);
    return best;
}

}  // namespace brwre
