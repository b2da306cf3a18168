#pragma once

#include <stdexcept>
#include <string>

namespace brwre {

// Error taxonomy mirrored by the CLI exit codes: config = 2, budget = 3,
// numeric = 4.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace brwre
