#include "fadecode/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fadecode {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        auto& sec = cfg.sections_[section];
        if (sec.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                              "'");
        sec[key] = ConfigEntry{value, lineno};
    }
    return cfg;
}

bool ConfigFile::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) return fallback;
    auto kit = it->second.find(key);
    return kit == it->second.end() ? fallback : kit->second.value;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    if (!has(section, key)) return fallback;
    const auto& entry = sections_.at(section).at(key);
    try {
        std::size_t used = 0;
        double v = std::stod(entry.value, &used);
        if (used != entry.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": key '" + key +
                          "' is not a number: '" + entry.value + "'");
    }
}

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key,
                                 std::int64_t fallback) const {
    if (!has(section, key)) return fallback;
    const auto& entry = sections_.at(section).at(key);
    try {
        std::size_t used = 0;
        long long v = std::stoll(entry.value, &used);
        if (used != entry.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": key '" + key +
                          "' is not an integer: '" + entry.value + "'");
    }
}

std::vector<std::size_t> ConfigFile::get_size_list(const std::string& section,
                                                   const std::string& key) const {
    std::vector<std::size_t> out;
    if (!has(section, key)) return out;
    const auto& entry = sections_.at(section).at(key);
    std::stringstream ss(entry.value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::size_t(std::stoull(tok)));
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": key '" + key +
                              "' has a bad list entry: '" + tok + "'");
        }
    }
    return out;
}

void ConfigFile::check_keys(const std::string& section,
                            const std::vector<std::string>& allowed) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) return;
    for (const auto& [key, entry] : it->second) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(origin_ + ":" + std::to_string(entry.line) + ": unknown key '" + key +
                              "' in section [" + section + "]");
    }
}

}  // namespace fadecode
