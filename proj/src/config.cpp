#include "brwre/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "brwre/errors.hpp"

namespace brwre {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) { out.push_back(trim(cur)); cur.clear(); }
        else cur += c;
    }
    out.push_back(trim(cur));
    return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"environment", {"component", "atom"}},
        {"barrier", {"d", "alpha"}},
        {"experiment",
         {"n", "replicates", "environments", "moment_p", "population_cap",
          "offspring_cap_exponent", "y_exponent", "xi_cap_exponent", "corridor_b", "corridor_a",
          "corridor_c", "mode", "l", "m", "beta", "iota", "v_values", "v_probs", "lambda0",
          "lambda1", "lambda2", "lambda3", "lambda4", "lambda5", "lambda6", "mto_n", "budget",
          "delta"}},
        {"seeds", {"root"}},
    };
    return keys;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
    Config config;
    config.text_ = text;

    struct PendingComponent {
        double weight = 1.0;
        std::vector<OffspringAtom> atoms;
        int line = 0;
    };
    std::vector<PendingComponent> components;
    bool saw_environment_section = false;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_keys().count(section))
                fail(origin, line_no, "unknown section [" + section + "]");
            if (section == "environment") saw_environment_section = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected key = value");
        if (section.empty()) fail(origin, line_no, "key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().at(section).count(key))
            fail(origin, line_no, "unknown key '" + key + "' in [" + section + "]");

        if (section == "environment") {
            if (key == "component") {
                PendingComponent comp;
                try {
                    comp.weight = std::stod(value);
                } catch (const std::exception&) {
                    fail(origin, line_no, "component weight '" + value + "' is not a number");
                }
                comp.line = line_no;
                components.push_back(std::move(comp));
            } else {  // atom = p : [d1, d2, ...]
                const auto colon = value.find(':');
                if (colon == std::string::npos)
                    fail(origin, line_no, "atom needs the form 'p : [d1, d2, ...]'");
                OffspringAtom atom;
                try {
                    atom.probability = std::stod(trim(value.substr(0, colon)));
                } catch (const std::exception&) {
                    fail(origin, line_no, "atom probability is not a number");
                }
                std::string list = trim(value.substr(colon + 1));
                if (list.size() < 2 || list.front() != '[' || list.back() != ']')
                    fail(origin, line_no, "atom displacements need brackets");
                list = trim(list.substr(1, list.size() - 2));
                if (!list.empty()) {
                    for (const std::string& tok : split(list, ',')) {
                        try {
                            atom.displacements.push_back(parse_rational(tok));
                        } catch (const ConfigError& e) {
                            fail(origin, line_no, e.what());
                        }
                    }
                }
                if (components.empty()) {
                    PendingComponent comp;
                    comp.weight = 1.0;
                    comp.line = line_no;
                    components.push_back(std::move(comp));
                }
                components.back().atoms.push_back(std::move(atom));
            }
            continue;
        }
        config.values_[section + "." + key] = {value, line_no};
    }

    if (saw_environment_section) {
        if (components.empty()) throw ConfigError(origin + ": [environment] has no components");
        std::vector<EnvironmentLaw::Component> built;
        for (const auto& comp : components) {
            if (comp.atoms.empty())
                fail(origin, comp.line, "component has no atoms");
            try {
                built.push_back({comp.weight, PointProcessLaw(comp.atoms)});
            } catch (const ConfigError& e) {
                fail(origin, comp.line, e.what());
            }
        }
        try {
            config.envlaw_ = std::make_shared<const EnvironmentLaw>(std::move(built));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ": [environment]: " + e.what());
        }
    }
    return config;
}

std::shared_ptr<const EnvironmentLaw> Config::environment() const {
    if (!envlaw_) throw ConfigError("config declares no [environment]");
    return envlaw_;
}

bool Config::has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) > 0;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    try {
        return std::stod(it->second.value);
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "]." + key + " (line " +
                          std::to_string(it->second.line) + "): not a number");
    }
}

double Config::require_double(const std::string& section, const std::string& key) const {
    if (!has(section, key))
        throw ConfigError("missing required key '" + key + "' in [" + section + "]");
    return get_double(section, key, 0.0);
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoull(it->second.value);
    } catch (const std::exception&) {
        throw ConfigError("[" + section + "]." + key + " (line " +
                          std::to_string(it->second.line) + "): not an unsigned integer");
    }
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : it->second.value;
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        std::vector<double> fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    for (const std::string& tok : split(it->second.value, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("[" + section + "]." + key + " (line " +
                              std::to_string(it->second.line) + "): '" + tok +
                              "' is not a number");
        }
    }
    return out;
}

std::vector<std::size_t> Config::get_sizes(const std::string& section, const std::string& key,
                                           std::vector<std::size_t> fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    std::vector<std::size_t> out;
    for (const std::string& tok : split(it->second.value, ',')) {
        try {
            out.push_back(static_cast<std::size_t>(std::stoull(tok)));
        } catch (const std::exception&) {
            throw ConfigError("[" + section + "]." + key + " (line " +
                              std::to_string(it->second.line) + "): '" + tok +
                              "' is not an unsigned integer");
        }
    }
    return out;
}

}  // namespace brwre
