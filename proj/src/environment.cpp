#include "brwre/environment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "brwre/errors.hpp"

namespace brwre {

EnvironmentLaw::EnvironmentLaw(std::vector<Component> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw ConfigError("environment law has no components");
    double total = 0.0;
    for (const auto& c : components_) {
        if (c.weight < 0.0) throw ConfigError("component weight must be >= 0");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "weights sum " << total << " != 1";
        throw ConfigError(os.str());
    }
}

std::int64_t EnvironmentLaw::lattice_denominator() const {
    std::int64_t d = 1;
    for (const auto& c : components_) d = lcm64(d, c.law.lattice_denominator());
    return d;
}

std::uint64_t EnvironmentSequence::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a 64
    for (std::uint32_t idx : indices) {
        h ^= idx;
        h *= 0x100000001b3ull;
    }
    return h;
}

EnvironmentSequence sample_environment(std::shared_ptr<const EnvironmentLaw> envlaw,
                                       std::size_t n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("environment length must be >= 1");
    EnvironmentSequence seq;
    seq.seed = seed;
    seq.source = envlaw;
    seq.indices.resize(n);
    Rng rng(derive_seed(seed, {0x656e76ull}));  // "env" stream
    const auto& comps = envlaw->components();
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        double acc = 0.0;
        std::uint32_t pick = static_cast<std::uint32_t>(comps.size() - 1);
        for (std::size_t c = 0; c + 1 < comps.size(); ++c) {
            acc += comps[c].weight;
            if (u < acc) { pick = static_cast<std::uint32_t>(c); break; }
        }
        seq.indices[i] = pick;
    }
    return seq;
}

std::vector<double> cumulative_kappa(const EnvironmentSequence& envseq, double vartheta) {
    const std::size_t n = envseq.length();
    // kappa per component, computed once
    std::vector<double> comp_kappa(envseq.source->size());
    for (std::size_t c = 0; c < comp_kappa.size(); ++c)
        comp_kappa[c] = laplace_profile(envseq.source->law(c), vartheta).kappa;
    std::vector<double> cumulative(n + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i)
        cumulative[i] = cumulative[i - 1] + comp_kappa[envseq.indices[i - 1]];
    return cumulative;
}

std::vector<double> barrier_curve(const std::vector<double>& cumulative,
                                  const BarrierSpec& barrier) {
    std::vector<double> phi(cumulative.size());
    for (std::size_t i = 0; i < cumulative.size(); ++i)
        phi[i] = -cumulative[i] / barrier.vartheta +
                 barrier.d * std::pow(static_cast<double>(i), barrier.alpha);
    return phi;
}

std::vector<double> barrier_curve(const EnvironmentSequence& envseq, const BarrierSpec& barrier) {
    return barrier_curve(cumulative_kappa(envseq, barrier.vartheta), barrier);
}

void save_environment(const EnvironmentSequence& envseq, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << "BRWRE-ENV v1 seed=" << envseq.seed << " n=" << envseq.length()
        << " components=" << envseq.source->size() << "\n";
    for (std::uint32_t idx : envseq.indices) out << idx << "\n";
    if (!out.good()) throw ConfigError("failed writing '" + path + "'");
}

EnvironmentSequence load_environment(std::shared_ptr<const EnvironmentLaw> envlaw,
                                     const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::string header;
    std::getline(in, header);
    std::uint64_t seed = 0;
    std::size_t n = 0, k = 0;
    if (std::sscanf(header.c_str(), "BRWRE-ENV v1 seed=%llu n=%zu components=%zu",
                    reinterpret_cast<unsigned long long*>(&seed), &n, &k) != 3)
        throw ConfigError("'" + path + "': bad replay header '" + header + "'");
    if (k != envlaw->size())
        throw ConfigError("'" + path + "': replay expects " + std::to_string(k) +
                          " components, law has " + std::to_string(envlaw->size()));
    EnvironmentSequence seq;
    seq.seed = seed;
    seq.source = envlaw;
    seq.indices.reserve(n);
    std::uint64_t idx;
    while (in >> idx) {
        if (idx >= envlaw->size())
            throw ConfigError("'" + path + "': component index " + std::to_string(idx) +
                              " out of range");
        seq.indices.push_back(static_cast<std::uint32_t>(idx));
    }
    if (seq.indices.size() != n)
        throw ConfigError("'" + path + "': expected " + std::to_string(n) + " indices, got " +
                          std::to_string(seq.indices.size()));
    return seq;
}

}  // namespace brwre
