#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "brwre/pointprocess.hpp"

namespace brwre {

// Finite mixture over reproduction laws: each generation draws one component
// independently with the listed weights.
class EnvironmentLaw {
public:
    struct Component {
        double weight = 0.0;
        PointProcessLaw law;
    };

    explicit EnvironmentLaw(std::vector<Component> components);

    const std::vector<Component>& components() const { return components_; }
    std::size_t size() const { return components_.size(); }
    const PointProcessLaw& law(std::size_t index) const { return components_[index].law; }
    double weight(std::size_t index) const { return components_[index].weight; }

    // lcm of the component lattice denominators.
    std::int64_t lattice_denominator() const;

private:
    std::vector<Component> components_;
};

// A realized draw L_1..L_n of component indices, replayable from
// (source, seed, n) bit-exactly.
struct EnvironmentSequence {
    std::vector<std::uint32_t> indices;  // indices[i] drives generation i+1
    std::uint64_t seed = 0;
    std::shared_ptr<const EnvironmentLaw> source;

    std::size_t length() const { return indices.size(); }
    const PointProcessLaw& law_at_step(std::size_t step) const {  // step in 1..n
        return source->law(indices[step - 1]);
    }
    // 64-bit content digest of the index sequence; quenched simulation
    // streams key on this so that equal environments get equal draws.
    std::uint64_t digest() const;
};

EnvironmentSequence sample_environment(std::shared_ptr<const EnvironmentLaw> envlaw,
                                       std::size_t n, std::uint64_t seed);

// Cumulative tilted log-Laplace path: K_0 = 0, K_i = K_{i-1} + kappa_i(vartheta).
std::vector<double> cumulative_kappa(const EnvironmentSequence& envseq, double vartheta);

// Barrier phi(i) = -K_i / vartheta + d * i^alpha.
struct BarrierSpec {
    double d = 0.0;
    double alpha = 1.0;
    double vartheta = 1.0;
};

std::vector<double> barrier_curve(const EnvironmentSequence& envseq, const BarrierSpec& barrier);
std::vector<double> barrier_curve(const std::vector<double>& cumulative, const BarrierSpec& barrier);

// Replay file: header "BRWRE-ENV v1 seed=<u64> n=<len> components=<k>"
// followed by one decimal component index per line.
void save_environment(const EnvironmentSequence& envseq, const std::string& path);
EnvironmentSequence load_environment(std::shared_ptr<const EnvironmentLaw> envlaw,
                                     const std::string& path);

}  // namespace brwre
