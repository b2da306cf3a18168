#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace brwre {

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    int workers = 1;
    std::string out_dir = ".";
    bool dry_run = false;

    // survival-specific overrides
    std::optional<std::string> env_replay;
    std::optional<std::string> env_out;
    std::optional<double> d_override;
    std::optional<double> alpha_override;
    std::optional<std::size_t> n_override;
    std::optional<std::size_t> replicates_override;
    std::optional<std::uint64_t> population_cap_override;
};

// Runs one subcommand end to end (config -> computation -> CSV + manifest).
// Returns the process exit code; module errors are thrown and mapped by the
// caller (config = 2, budget = 3, numeric = 4).
int run_subcommand(const std::string& name, const RunOptions& options);

extern const char* const kSubcommands[9];
extern const char* const kArtifactVersion;

}  // namespace brwre
