#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brwre/environment.hpp"
#include "brwre/mc.hpp"
#include "brwre/spine.hpp"

namespace brwre {

// Corridor event for the associated walk: given T_{t0} = x,
//   for i = 1..length: T_{t0+i} in [lower[i-1], upper[i-1]],
//   T_{t0+length} in [terminal_lo, terminal_hi],
//   xi_{t0+i} <= xi_cap[i-1] when caps are present.
struct CorridorSpec {
    std::size_t start_index = 0;
    std::size_t length = 0;
    std::vector<double> lower;
    std::vector<double> upper;
    double terminal_lo = -std::numeric_limits<double>::infinity();
    double terminal_hi = std::numeric_limits<double>::infinity();
    std::optional<std::vector<double>> xi_cap;
    double start_position = 0.0;

    void validate() const;

    // |T_i| <= half_width for all i, no terminal restriction, optional cap.
    static CorridorSpec symmetric(std::size_t length, double half_width,
                                  std::optional<double> cap = std::nullopt);
};

struct CorridorValue {
    double log_p = 0.0;
    double p = 0.0;
};

enum class CorridorMode { Exact, Mc };

// Exact mode runs the absorbing lattice DP (start position shifts all
// boundary cuts); MC mode counts spine trajectories satisfying the event.
CorridorValue corridor_probability_exact(const EnvironmentSequence& envseq, double vartheta,
                                         const CorridorSpec& spec,
                                         std::uint64_t max_states = 0);
McEstimate corridor_probability_mc(const EnvironmentSequence& envseq, double vartheta,
                                   const CorridorSpec& spec, std::size_t replicates,
                                   std::uint64_t seed);

// Quenched mean / variance / lambda2-moment path of the associated walk:
// M_i = E T_i, Gamma_i = Var T_i, psi_i = sum of per-step lambda2 central
// absolute moments. All from per-component closed forms.
struct WalkDecomposition {
    std::vector<double> M;
    std::vector<double> Gamma;
    std::vector<double> psi;
};

WalkDecomposition walk_decomposition(const EnvironmentSequence& envseq, double vartheta,
                                     double lambda2);

struct RegenConstants {
    double vartheta = 1.0;
    double lambda2 = 4.0;
    double lambda4 = 0.5;
    double sigma2_star = 1.0;
    double c3 = 0.0;        // 0 => sigma2_star / 2024
    double q_n = 0.0;       // 0 => n / (c2 log n)
    double c2 = 10.0;
    double e_psi1 = 0.0;    // annealed E psi_1; 0 => computed from the law
};

struct RegenerationStructure {
    std::vector<std::size_t> tau;  // tau_{n,0} = 0 first
    std::vector<std::size_t> rho;
    std::size_t count = 0;         // N_n
    double delta = 0.0;
    bool flag_h = false;
    bool flag_j = false;
    bool flag_j_tilde = false;
    bool flag_i = false;
    bool flag_q = false;
    double q_n = 0.0;
    double q_star_n = 0.0;
};

// Blocks of nearly-constant quenched drift: tau_{n,k} = min(min{i >
// tau_{n,k-1}: |M_i - M_{tau_{n,k-1}}| > delta sqrt n} - 1, tau_{n,k-1} + n),
// plus the environment event flags evaluated over the 2n data window.
RegenerationStructure regeneration_structure(const std::vector<double>& m_path, std::size_t n,
                                             double delta, const EnvironmentSequence& envseq,
                                             const RegenConstants& constants);

// Small-deviation rate experiment: for each n and sampled environment,
// normalized log corridor probabilities in the sup form (free start, no
// terminal window) and the inf form (worst start in the a-window, terminal
// window).
struct SmallDevSpec {
    double b1 = -1.0, b2 = 1.0;    // corridor [b1 y_n, b2 y_n]
    double a1 = -0.5, a2 = 0.5;    // start window
    double ap1 = -0.5, ap2 = 0.5;  // terminal window (inf form)
    double y_exponent = 0.5;       // y_n = n^y_exponent, in (0, 1/2]
    double xi_cap_exponent = 0.5;  // cap = exp(n^e); <= 0 disables the cap
    std::vector<std::size_t> n_grid;
    std::size_t env_replicates = 1;
    std::size_t path_replicates = 0;  // 0 => exact DP
};

struct SmallDevRateRow {
    std::size_t n = 0;
    double y_n = 0.0;
    std::size_t env_index = 0;
    double log_p = 0.0;
    double normalized = 0.0;  // log_p / (n y_n^{-2})
    std::string mode;         // "sup" or "inf"
};

std::vector<SmallDevRateRow> small_deviation_rate(std::shared_ptr<const EnvironmentLaw> envlaw,
                                                  double vartheta, const SmallDevSpec& spec,
                                                  std::uint64_t seed, int workers = 1);

// Degenerate-environment reference: the corridor decay rate of a Brownian
// strip, -sigma_q^2 (pi^2/2) / (b2 - b1)^2 per unit of n y_n^{-2}.
double brownian_strip_rate(double sigma_q2, double b1, double b2);

}  // namespace brwre
