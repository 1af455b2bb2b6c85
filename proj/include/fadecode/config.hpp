/*
Flat key-value experiment config files with one [section] per command.
Unknown keys are rejected with line diagnostics.
*/

#ifndef FADECODE_CONFIG_HPP
#define FADECODE_CONFIG_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fadecode {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigEntry {
    std::string value;
    int line = 0;
};

class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text, const std::string& origin = "<config>");

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;

    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const;
    std::vector<std::size_t> get_size_list(const std::string& section, const std::string& key) const;

    // throws ConfigError naming the first key not in `allowed` (with its line)
    void check_keys(const std::string& section, const std::vector<std::string>& allowed) const;

private:
    std::string origin_;
    std::map<std::string, std::map<std::string, ConfigEntry>> sections_;
};

}  // namespace fadecode

#endif
