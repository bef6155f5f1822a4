#include "tmss/runner/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tmss::runner {
namespace {

using K = ValueKind;

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_real(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
    }
}

long parse_integer(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const long x = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    }
}

void validate(const KeySpec& spec, const std::string& value)
{
    switch (spec.kind) {
    case K::Real: parse_real(spec.name, value); break;
    case K::Integer: parse_integer(spec.name, value); break;
    case K::RealList:
        for (const auto& item : split_list(value)) parse_real(spec.name, item);
        break;
    case K::Text:
    case K::TextList: break;
    }
}

const std::map<std::string, std::vector<KeySpec>>& registry()
{
    static const std::map<std::string, std::vector<KeySpec>> keys{
        {"populations-wigner",
         {
             {"r", K::Real, "1.5", "squeezing magnitude"},
             {"families", K::TextList, "thermal,even,odd", "reduced states: thermal, even, odd"},
             {"n_max", K::Integer, "30", "largest Fock number in the populations table"},
             {"cutoff", K::Integer, "0", "Fock cutoff (0 picks it from tail_tol)"},
             {"grid_min", K::Real, "-3", "lower edge of the q and p grid"},
             {"grid_max", K::Real, "3", "upper edge of the q and p grid"},
             {"grid_points", K::Integer, "61", "points per axis"},
         }},
        {"g2-sweep",
         {
             {"lambda_min", K::Real, "0.05", "first lambda_r"},
             {"lambda_max", K::Real, "0.905", "last lambda_r"},
             {"lambda_points", K::Integer, "20", "grid size"},
             {"numeric_tail_tol", K::Real, "1e-15", "truncation tail for the state-based g2 columns"},
         }},
        {"odd-source",
         {
             {"lambda_min", K::Real, "0", "first lambda_r"},
             {"lambda_max", K::Real, "0.95", "last lambda_r"},
             {"lambda_points", K::Integer, "20", "grid size"},
         }},
        {"entanglement-map",
         {
             {"lambda_min", K::Real, "0.01", "first lambda_r"},
             {"lambda_max", K::Real, "0.95", "last lambda_r"},
             {"lambda_points", K::Integer, "48", "lambda grid size"},
             {"phi_points", K::Integer, "49", "phi grid size over [0, 2 pi]"},
             {"boundary_points", K::Integer, "200", "lambda samples of the E_phi = E_TMSS boundary"},
         }},
        {"entanglement-slice",
         {
             {"beta", K::Real, "0.314159265358979", "phi = pi + beta"},
             {"lambda_min", K::Real, "0", "first lambda_r"},
             {"lambda_max", K::Real, "0.95", "last lambda_r"},
             {"lambda_points", K::Integer, "96", "grid size"},
             {"r", K::Text, "auto", "squeezing for the populations table (auto = beta / 2)"},
             {"theta", K::Real, "0", "squeezing angle for the numeric entanglement check"},
             {"n_max", K::Integer, "10", "largest Fock number in the populations table"},
         }},
        {"qfi-sweep",
         {
             {"families", K::TextList, "thermal,even,odd,smss", "thermal, even, odd, smss"},
             {"lambda_min", K::Real, "0", "first lambda_r"},
             {"lambda_max", K::Real, "0.95", "last lambda_r"},
             {"lambda_points", K::Integer, "20", "grid size"},
             {"direction", K::Real, "0", "displacement direction in phase space"},
             {"smss_angles", K::RealList, "0", "squeezing angles averaged for the smss curve"},
         }},
        {"ion-sim",
         {
             {"omega_x", K::Real, "1.0", "trap frequency of mode a"},
             {"omega_y", K::Real, "1.2", "trap frequency of mode b"},
             {"Omega", K::Real, "0.05", "carrier Rabi frequency"},
             {"eta_x", K::Real, "0.1", "Lamb-Dicke parameter of mode a"},
             {"eta_y", K::Real, "0.1", "Lamb-Dicke parameter of mode b"},
             {"tones", K::TextList, "plus,minus", "laser tones: plus, minus"},
             {"chi_t_max", K::Real, "1", "final chi t"},
             {"samples", K::Integer, "100", "recorded intervals"},
             {"cutoff", K::Integer, "30", "Fock cutoff per mode"},
             {"dt", K::Real, "0", "RK4 step (0 = 0.01 / max(omega_x, omega_y))"},
         }},
        {"probe-scan",
         {
             {"r", K::Real, "1.5", "squeezing magnitude of the probed state"},
             {"families", K::TextList, "even,odd", "thermal, even, odd"},
             {"alpha_max", K::Real, "3", "largest |alpha|"},
             {"alpha_points", K::Integer, "50", "radial points"},
             {"alpha_phase", K::Real, "0", "arg(alpha) of the scan"},
             {"eta_x", K::Real, "0.1", "Lamb-Dicke parameter hint (snapped to a parity readout)"},
             {"Omega", K::Real, "0.05", "carrier Rabi frequency"},
             {"threshold", K::Real, "0.5", "detection threshold as a fraction of |P_eg(0)|"},
             {"shots", K::Integer, "0", "binomial shots per point (0 = noiseless)"},
         }},
    };
    return keys;
}

const KeySpec* find_key(const std::string& experiment, const std::string& key)
{
    for (const auto& spec : experiment_keys(experiment))
        if (spec.name == key) return &spec;
    for (const auto& spec : common_keys())
        if (spec.name == key) return &spec;
    return nullptr;
}

}  // namespace

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names{"populations-wigner", "g2-sweep",  "odd-source", "entanglement-map",
                                                "entanglement-slice", "qfi-sweep", "ion-sim",    "probe-scan"};
    return names;
}

const std::vector<KeySpec>& common_keys()
{
    static const std::vector<KeySpec> keys{
        {"out", K::Text, "results", "output directory"},
        {"format", K::Text, "csv", "csv or json"},
        {"seed", K::Integer, "0", "seed for sampled measurement noise"},
        {"tail_tol", K::Real, "1e-10", "largest probability allowed outside a truncated Fock space"},
        {"backend", K::Text, "omp", "omp or serial kernels"},
    };
    return keys;
}

const std::vector<KeySpec>& experiment_keys(const std::string& experiment)
{
    const auto it = registry().find(experiment);
    if (it == registry().end()) throw ConfigError("unknown experiment '" + experiment + "'");
    return it->second;
}

ConfigFile parse_config(std::istream& in, const std::string& origin)
{
    ConfigFile file;
    std::string section;
    file.sections[section];
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (std::find(experiment_names().begin(), experiment_names().end(), section) == experiment_names().end())
                throw ConfigError(where + ": unknown experiment section [" + section + "]");
            file.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        file.sections[section][key] = value;
    }
    return file;
}

ConfigFile load_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in, path.string());
}

std::optional<std::filesystem::path> default_config_path()
{
    const char* dir = std::getenv("TMSS_CONFIG_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    std::filesystem::path path = std::filesystem::path(dir) / "tmss.conf";
    if (!std::filesystem::exists(path)) return std::nullopt;
    return path;
}

Config Config::resolve(const std::string& experiment, const ConfigFile* file,
                       const std::map<std::string, std::string>& overrides)
{
    Config cfg;
    cfg.experiment_ = experiment;
    for (const auto& spec : common_keys()) cfg.values_[spec.name] = spec.default_value;
    for (const auto& spec : experiment_keys(experiment)) cfg.values_[spec.name] = spec.default_value;

    const auto apply = [&](const std::map<std::string, std::string>& layer, const std::string& origin,
                           bool common_only) {
        for (const auto& [key, value] : layer) {
            const bool common = std::any_of(common_keys().begin(), common_keys().end(),
                                            [&](const KeySpec& s) { return s.name == key; });
            if (common_only && !common)
                throw ConfigError(origin + ": key '" + key + "' is experiment-specific; put it in a section");
            if (find_key(experiment, key) == nullptr)
                throw ConfigError(origin + ": unknown key '" + key + "' for experiment " + experiment);
            cfg.values_[key] = value;
        }
    };
    if (file != nullptr) {
        for (const auto& [section, layer] : file->sections) {
            if (section.empty()) apply(layer, "config file", true);
        }
        const auto it = file->sections.find(experiment);
        if (it != file->sections.end()) apply(it->second, "config section [" + experiment + "]", false);
        // Sections of other experiments are checked too, so typos never pass silently.
        for (const auto& [section, layer] : file->sections) {
            if (section.empty() || section == experiment) continue;
            for (const auto& [key, value] : layer)
                if (find_key(section, key) == nullptr)
                    throw ConfigError("config section [" + section + "]: unknown key '" + key + "'");
        }
    }
    apply(overrides, "command line", false);

    for (const auto& [key, value] : cfg.values_) validate(*find_key(experiment, key), value);
    const std::string& format = cfg.values_.at("format");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json, got '" + format + "'");
    const std::string& backend = cfg.values_.at("backend");
    if (backend != "omp" && backend != "serial")
        throw ConfigError("backend must be omp or serial, got '" + backend + "'");
    if (cfg.integer("seed") < 0) throw ConfigError("seed must be non-negative");
    return cfg;
}

const std::string& Config::text(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("internal: key '" + key + "' not in resolved config");
    return it->second;
}

double Config::real(const std::string& key) const { return parse_real(key, text(key)); }

long Config::integer(const std::string& key) const { return parse_integer(key, text(key)); }

std::vector<double> Config::reals(const std::string& key) const
{
    std::vector<double> out;
    for (const auto& item : split_list(text(key))) out.push_back(parse_real(key, item));
    return out;
}

std::vector<std::string> Config::texts(const std::string& key) const { return split_list(text(key)); }

std::uint64_t Config::seed() const { return static_cast<std::uint64_t>(integer("seed")); }

std::vector<double> linspace(double lo, double hi, long count)
{
    if (count < 1) throw ConfigError("grid needs at least one point");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    // Rounded to 12 significant digits so decimal grid points (0.5, 0.05, ...) come out exact.
    char buf[32];
    for (long i = 0; i < count; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        std::snprintf(buf, sizeof buf, "%.12g", x);
        out[i] = std::strtod(buf, nullptr);
    }
    out.back() = hi;
    return out;
}

}  // namespace tmss::runner
