#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "brwre/environment.hpp"

namespace brwre {

// Parsed experiment configuration. Sections: [environment] declares the
// mixture (`component = w` opening a component, `atom = p : [d1, d2, ...]`
// rows under it), [barrier] the (d, alpha) grids, [experiment] the run
// parameters, [seeds] the root seed. Unknown sections or keys are
// line-numbered errors.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text, const std::string& origin = "<config>");

    std::shared_ptr<const EnvironmentLaw> environment() const;

    bool has(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    double require_double(const std::string& section, const std::string& key) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    std::vector<double> fallback) const;
    std::vector<std::size_t> get_sizes(const std::string& section, const std::string& key,
                                       std::vector<std::size_t> fallback) const;

    std::uint64_t root_seed() const { return get_u64("seeds", "root", 1); }
    const std::string& text() const { return text_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> values_;  // "section.key" -> entry
    std::shared_ptr<const EnvironmentLaw> envlaw_;
    std::string text_;
};

}  // namespace brwre
