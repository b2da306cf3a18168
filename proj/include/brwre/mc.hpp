#pragma once

#include <cmath>
#include <cstdint>

namespace brwre {

// Every Monte Carlo output carries its uncertainty and provenance.
struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t replicates = 0;
    std::uint64_t seed = 0;
};

// Running mean/variance accumulator (Welford).
class RunningStats {
public:
    void add(double x) {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }
    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
    double stderr_of_mean() const {
        return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    }

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace brwre
