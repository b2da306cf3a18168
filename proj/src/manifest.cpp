#include "brwre/manifest.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "brwre/errors.hpp"

namespace brwre {

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json j;
    j["config_digest"] = manifest.config_digest;
    j["root_seed"] = manifest.root_seed;
    j["version"] = manifest.version;
    j["timestamp"] = manifest.timestamp;
    j["subcommand"] = manifest.subcommand;
    j["outputs"] = manifest.outputs;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write manifest '" + path + "'");
    out << j.dump(2) << "\n";
}

RunManifest load_manifest(const std::string& path, const std::string& config_bytes) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open manifest '" + path + "'");
    nlohmann::json j;
    in >> j;
    RunManifest m;
    m.config_digest = j.at("config_digest").get<std::string>();
    m.root_seed = j.at("root_seed").get<std::uint64_t>();
    m.version = j.at("version").get<std::string>();
    m.timestamp = j.at("timestamp").get<std::string>();
    m.subcommand = j.at("subcommand").get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    if (m.config_digest != fnv1a_hex(config_bytes))
        throw ConfigError("manifest digest does not match the config contents");
    return m;
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += header[i];
    }
    buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw ConfigError("CSV row width " + std::to_string(cells.size()) + " != header width " +
                          std::to_string(columns_));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += cells[i];
    }
    buffer_ += '\n';
}

void CsvWriter::close() {
    if (closed_) return;
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path_ + "'");
    out << buffer_;
    if (!out.good()) throw ConfigError("failed writing '" + path_ + "'");
    closed_ = true;
}

}  // namespace brwre
