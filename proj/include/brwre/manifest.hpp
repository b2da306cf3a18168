#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace brwre {

// Provenance record emitted alongside every CSV.
struct RunManifest {
    std::string config_digest;  // FNV-1a 64 of the config bytes, hex
    std::uint64_t root_seed = 0;
    std::string version;
    std::string timestamp;  // ISO 8601 UTC; excluded from determinism checks
    std::string subcommand;
    std::vector<std::string> outputs;
};

std::string fnv1a_hex(const std::string& bytes);

void save_manifest(const RunManifest& manifest, const std::string& path);

// Loads and re-verifies the digest against the given config bytes.
RunManifest load_manifest(const std::string& path, const std::string& config_bytes);

// CSV formatting helpers: '.' decimal separator, '\n' line endings, no
// locale dependence. Doubles are emitted with round-trip precision.
std::string format_double(double value);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    const std::string& path() const { return path_; }
    void close();

private:
    std::string path_;
    std::string buffer_;
    std::size_t columns_ = 0;
    bool closed_ = false;
};

}  // namespace brwre
