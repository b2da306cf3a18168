#include "brwre/rwre.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "brwre/errors.hpp"
#include "brwre/lattice_dp.hpp"
#include "brwre/parallel.hpp"

namespace brwre {

void CorridorSpec::validate() const {
    if (lower.size() != length || upper.size() != length)
        throw ConfigError("corridor boundary sequences must have `length` entries");
    for (std::size_t i = 0; i < length; ++i)
        if (!(lower[i] < upper[i]))
            throw ConfigError("corridor lower boundary must stay below the upper one");
    if (length > 0) {
        // infinite terminal bounds mean "no extra restriction"
        if (std::isfinite(terminal_lo) && terminal_lo < lower[length - 1] - 1e-12)
            throw ConfigError("terminal window must sit inside the final corridor slice");
        if (std::isfinite(terminal_hi) && terminal_hi > upper[length - 1] + 1e-12)
            throw ConfigError("terminal window must sit inside the final corridor slice");
    }
    if (xi_cap && xi_cap->size() != length)
        throw ConfigError("xi cap sequence must have `length` entries");
}

CorridorSpec CorridorSpec::symmetric(std::size_t length, double half_width,
                                     std::optional<double> cap) {
    CorridorSpec spec;
    spec.length = length;
    spec.lower.assign(length, -half_width);
    spec.upper.assign(length, half_width);
    spec.terminal_lo = -half_width;
    spec.terminal_hi = half_width;
    if (cap) spec.xi_cap = std::vector<double>(length, *cap);
    return spec;
}

CorridorValue corridor_probability_exact(const EnvironmentSequence& envseq, double vartheta,
                                         const CorridorSpec& spec, std::uint64_t max_states) {
    spec.validate();
    if (envseq.length() < spec.start_index + spec.length)
        throw ConfigError("environment shorter than corridor horizon");
    const std::int64_t denom = envseq.source->lattice_denominator();

    std::vector<std::vector<LatticeAtom>> lattice_atoms(envseq.source->size());
    for (std::size_t c = 0; c < lattice_atoms.size(); ++c) {
        const SpineStepLaw law = spine_step_law(envseq.source->law(c), vartheta);
        for (const auto& atom : law.atoms)
            lattice_atoms[c].push_back({atom.x.num * (denom / atom.x.den), atom.xi, atom.mass});
    }

    const std::vector<double> cumulative = cumulative_kappa(envseq, vartheta);
    const double k0 = cumulative[spec.start_index];

    std::vector<LatticeStep> steps(spec.length);
    for (std::size_t i = 0; i < spec.length; ++i) {
        const std::size_t step_index = spec.start_index + i + 1;
        steps[i].atoms = &lattice_atoms[envseq.indices[step_index - 1]];
        // T_i = x + (K_i - K_{t0}) + vartheta * chi  with chi = delta/denom:
        // boundary cuts on the chi-lattice are real numbers per step
        const double dk = cumulative[step_index] - k0;
        double lo = (spec.lower[i] - spec.start_position - dk) / vartheta;
        double hi = (spec.upper[i] - spec.start_position - dk) / vartheta;
        if (i + 1 == spec.length) {
            lo = std::max(lo, (spec.terminal_lo - spec.start_position - dk) / vartheta);
            hi = std::min(hi, (spec.terminal_hi - spec.start_position - dk) / vartheta);
        }
        steps[i].allow_lo = lattice_ceil(lo * static_cast<double>(denom));
        steps[i].allow_hi = lattice_floor(hi * static_cast<double>(denom));
        if (spec.xi_cap) steps[i].xi_cap = (*spec.xi_cap)[i];
    }
    const LatticeDpState state = run_lattice_dp(steps, 0, max_states);
    CorridorValue out;
    out.log_p = state.dead ? -std::numeric_limits<double>::infinity() : state.log_total();
    out.p = state.dead ? 0.0 : std::exp(out.log_p);
    return out;
}

McEstimate corridor_probability_mc(const EnvironmentSequence& envseq, double vartheta,
                                   const CorridorSpec& spec, std::size_t replicates,
                                   std::uint64_t seed) {
    spec.validate();
    const SpineStepTable table(envseq, vartheta);
    const std::vector<double>& cumulative = table.cumulative_kappa();
    const double k0 = cumulative[spec.start_index];
    std::uint64_t hits = 0;
    for (std::size_t r = 0; r < replicates; ++r) {
        Rng rng(derive_seed(seed, {0x636f7272ull, r}));
        double chi = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < spec.length && ok; ++i) {
            const std::size_t step = spec.start_index + i + 1;
            const SpineStepLaw& law = table.at_step(step);
            const double u = rng.uniform01();
            double acc = 0.0;
            const SpineAtom* chosen = &law.atoms.back();
            for (const auto& atom : law.atoms) {
                acc += atom.mass;
                if (u < acc) { chosen = &atom; break; }
            }
            chi += chosen->x.value();
            if (spec.xi_cap && static_cast<double>(chosen->xi) > (*spec.xi_cap)[i]) ok = false;
            const double t = spec.start_position + (cumulative[step] - k0) + vartheta * chi;
            if (t < spec.lower[i] || t > spec.upper[i]) ok = false;
            if (i + 1 == spec.length && (t < spec.terminal_lo || t > spec.terminal_hi))
                ok = false;
        }
        if (ok) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(replicates);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(replicates)), replicates, seed};
}

WalkDecomposition walk_decomposition(const EnvironmentSequence& envseq, double vartheta,
                                     double lambda2) {
    const std::size_t n = envseq.length();
    const std::size_t k = envseq.source->size();
    std::vector<double> step_mean(k), step_var(k), step_psi(k);
    for (std::size_t c = 0; c < k; ++c) {
        const LaplaceProfile p = laplace_profile(envseq.source->law(c), vartheta);
        step_mean[c] = p.kappa - vartheta * p.d1;  // E(T-step) = kappa + vt E X
        step_var[c] = vartheta * vartheta * p.d2;
        const SpineStepLaw law = spine_step_law(envseq.source->law(c), vartheta);
        step_psi[c] = std::pow(vartheta, lambda2) * law.central_abs_moment_x(lambda2);
    }
    WalkDecomposition out;
    out.M.assign(n + 1, 0.0);
    out.Gamma.assign(n + 1, 0.0);
    out.psi.assign(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const std::uint32_t c = envseq.indices[i - 1];
        out.M[i] = out.M[i - 1] + step_mean[c];
        out.Gamma[i] = out.Gamma[i - 1] + step_var[c];  // independent increments
        out.psi[i] = out.psi[i - 1] + step_psi[c];
    }
    return out;
}

RegenerationStructure regeneration_structure(const std::vector<double>& m_path, std::size_t n,
                                             double delta, const EnvironmentSequence& envseq,
                                             const RegenConstants& constants) {
    if (m_path.size() < n + 1) throw ConfigError("drift path must cover 0..n");
    RegenerationStructure out;
    out.delta = delta;
    const double threshold = delta * std::sqrt(static_cast<double>(n));
    const std::size_t data_end = m_path.size() - 1;

    out.q_n = constants.q_n > 0.0
                  ? constants.q_n
                  : static_cast<double>(n) /
                        (constants.c2 * std::log(std::max(3.0, static_cast<double>(n))));
    const double blocks = std::ceil(static_cast<double>(n) / out.q_n);
    out.q_star_n = blocks * blocks;

    out.tau = {0};
    out.rho = {0};
    // extend while data lasts, far enough for both N_n (tau past n) and the
    // H_n window (q*_n blocks)
    while (out.tau.back() < data_end &&
           (out.tau.back() <= n ||
            static_cast<double>(out.tau.size()) <= out.q_star_n + 1.0)) {
        const std::size_t prev = out.tau.back();
        std::size_t next = std::min(prev + n, data_end);
        for (std::size_t i = prev + 1; i <= data_end; ++i) {
            if (std::abs(m_path[i] - m_path[prev]) > threshold) {
                next = std::min(i - 1, prev + n);
                break;
            }
        }
        if (next <= prev) next = prev + 1;  // excursion at the first step: block of 1
        out.tau.push_back(next);
        out.rho.push_back(next - prev);
    }
    out.count = 0;
    for (std::size_t k = 1; k < out.tau.size(); ++k)
        if (out.tau[k] <= n && k <= n) out.count = k;

    // flags over the 2n data window
    out.flag_h = true;
    for (std::size_t k = 1; k < out.rho.size() && static_cast<double>(k) <= out.q_star_n; ++k)
        if (static_cast<double>(out.rho[k]) < out.q_n) out.flag_h = false;

    const WalkDecomposition dec =
        walk_decomposition(envseq, constants.vartheta, constants.lambda2);
    const std::size_t window = std::min<std::size_t>(2 * n, dec.Gamma.size() - 1);
    const double c3 = constants.c3 > 0.0 ? constants.c3 : constants.sigma2_star / 2024.0;
    out.flag_j = true;
    for (std::size_t i = 0; i <= window; ++i)
        if (std::abs(dec.Gamma[i] - constants.sigma2_star * static_cast<double>(i)) >
            c3 * out.q_n) {
            out.flag_j = false;
            break;
        }

    double e_psi1 = constants.e_psi1;
    if (e_psi1 <= 0.0) {
        e_psi1 = 0.0;
        for (std::size_t c = 0; c < envseq.source->size(); ++c) {
            const SpineStepLaw law = spine_step_law(envseq.source->law(c), constants.vartheta);
            e_psi1 += envseq.source->weight(c) * std::pow(constants.vartheta, constants.lambda2) *
                      law.central_abs_moment_x(constants.lambda2);
        }
    }
    out.flag_j_tilde = dec.psi[window] <= 3.0 * e_psi1 * static_cast<double>(n);

    const double vt = constants.vartheta;
    const double l4 = constants.lambda4;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    bool flag_i = true;
    for (std::size_t c = 0; c < envseq.source->size(); ++c) {
        const PointProcessLaw& law = envseq.source->law(c);
        bool used = false;
        for (std::size_t i = 1; i <= std::min(n, envseq.length()); ++i)
            if (envseq.indices[i - 1] == c) { used = true; break; }
        if (!used) continue;
        if (law.offspring_moment(1.0 + l4) > std::exp(l4 * sqrt_n / 3.0)) flag_i = false;
        const double k_shift = laplace_profile(law, vt + l4).kappa;
        const double k_at = laplace_profile(law, vt).kappa;
        if (vt / (vt + l4) * k_shift - k_at > l4 * l4 * sqrt_n / (3.0 * (vt + l4)))
            flag_i = false;
    }
    out.flag_i = flag_i;
    out.flag_q = out.flag_h && out.flag_j && out.flag_j_tilde && out.flag_i;
    return out;
}

namespace {

CorridorSpec small_dev_corridor(const SmallDevSpec& spec, std::size_t n, double y_n,
                                bool inf_form, double start) {
    CorridorSpec c;
    c.length = n;
    c.lower.assign(n, spec.b1 * y_n);
    c.upper.assign(n, spec.b2 * y_n);
    if (inf_form) {
        c.terminal_lo = spec.ap1 * y_n;
        c.terminal_hi = spec.ap2 * y_n;
    }
    if (spec.xi_cap_exponent > 0.0) {
        const double cap = std::exp(std::pow(static_cast<double>(n), spec.xi_cap_exponent));
        c.xi_cap = std::vector<double>(n, cap);
    }
    c.start_position = start;
    return c;
}

}  // namespace

std::vector<SmallDevRateRow> small_deviation_rate(std::shared_ptr<const EnvironmentLaw> envlaw,
                                                  double vartheta, const SmallDevSpec& spec,
                                                  std::uint64_t seed, int workers) {
    if (!(spec.y_exponent > 0.0) || spec.y_exponent > 0.5)
        throw ConfigError("y exponent must lie in (0, 1/2]");
    struct Task { std::size_t n_index; std::size_t env_index; };
    std::vector<Task> tasks;
    for (std::size_t ni = 0; ni < spec.n_grid.size(); ++ni)
        for (std::size_t e = 0; e < spec.env_replicates; ++e) tasks.push_back({ni, e});

    std::vector<std::array<SmallDevRateRow, 2>> results(tasks.size());
    parallel_for(tasks.size(), workers, [&](std::size_t t) {
        const std::size_t n = spec.n_grid[tasks[t].n_index];
        const std::size_t e = tasks[t].env_index;
        const double y_n = std::pow(static_cast<double>(n), spec.y_exponent);
        const EnvironmentSequence envseq =
            sample_environment(envlaw, n, derive_seed(seed, {0x72617465ull, e}));
        const double scale = y_n * y_n / static_cast<double>(n);  // 1 / (n y^-2)

        auto eval = [&](const CorridorSpec& c) -> double {
            if (spec.path_replicates == 0)
                return corridor_probability_exact(envseq, vartheta, c).log_p;
            const McEstimate est = corridor_probability_mc(
                envseq, vartheta, c, spec.path_replicates,
                derive_seed(seed, {0x72617465ull, e, n}));
            return est.value > 0.0 ? std::log(est.value)
                                   : -std::numeric_limits<double>::infinity();
        };

        // sup form: best over a small start grid around the corridor middle
        double sup_log = -std::numeric_limits<double>::infinity();
        const double mid = 0.5 * (spec.b1 + spec.b2) * y_n;
        for (const double start : {mid, 0.0})
            sup_log = std::max(sup_log, eval(small_dev_corridor(spec, n, y_n, false, start)));
        // inf form: worst over a start grid in the a-window
        double inf_log = std::numeric_limits<double>::infinity();
        for (const double frac : {0.0, 0.5, 1.0}) {
            const double start = (spec.a1 + frac * (spec.a2 - spec.a1)) * y_n;
            inf_log = std::min(inf_log, eval(small_dev_corridor(spec, n, y_n, true, start)));
        }
        results[t][0] = {n, y_n, e, sup_log, sup_log * scale, "sup"};
        results[t][1] = {n, y_n, e, inf_log, inf_log * scale, "inf"};
    });

    std::vector<SmallDevRateRow> rows;
    rows.reserve(tasks.size() * 2);
    for (const auto& pair : results) {
        rows.push_back(pair[0]);
        rows.push_back(pair[1]);
    }
    return rows;
}

double brownian_strip_rate(double sigma_q2, double b1, double b2) {
    const double width = b2 - b1;
    const double pi = 3.14159265358979323846;
    return -sigma_q2 * (pi * pi / 2.0) / (width * width);
}

}  // namespace brwre
