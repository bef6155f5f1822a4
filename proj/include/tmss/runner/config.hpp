#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tmss/errors.hpp"

namespace tmss::runner {

// Bad config file, unknown key, unparsable value. Maps to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class ValueKind { Real, Integer, Text, RealList, TextList };

struct KeySpec {
    std::string name;
    ValueKind kind;
    std::string default_value;
    std::string help;
};

const std::vector<std::string>& experiment_names();
// Keys valid for every experiment (out, format, seed, tail_tol, backend).
const std::vector<KeySpec>& common_keys();
// Experiment-specific keys; throws ConfigError for an unknown experiment.
const std::vector<KeySpec>& experiment_keys(const std::string& experiment);

// Parsed `key = value` file. Keys before any [section] header live in section "".
struct ConfigFile {
    std::map<std::string, std::map<std::string, std::string>> sections;
};

ConfigFile parse_config(std::istream& in, const std::string& origin);
ConfigFile load_config_file(const std::filesystem::path& path);

// $TMSS_CONFIG_DIR/tmss.conf when the variable is set and the file exists.
std::optional<std::filesystem::path> default_config_path();

class Config {
public:
    // Precedence: built-in defaults < file top level < file [experiment] section < overrides.
    // Every value is validated against its key's kind.
    static Config resolve(const std::string& experiment, const ConfigFile* file,
                          const std::map<std::string, std::string>& overrides);

    const std::string& experiment() const { return experiment_; }
    const std::map<std::string, std::string>& values() const { return values_; }

    const std::string& text(const std::string& key) const;
    double real(const std::string& key) const;
    long integer(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
    std::vector<std::string> texts(const std::string& key) const;
    std::uint64_t seed() const;

private:
    std::string experiment_;
    std::map<std::string, std::string> values_;
};

// Evenly spaced grid, both ends included, interior points rounded to 12
// significant digits; count == 1 gives {lo}.
std::vector<double> linspace(double lo, double hi, long count);

}  // namespace tmss::runner
