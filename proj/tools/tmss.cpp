// tmss: runs one experiment and writes its data tables plus run.json.
//
//   tmss run g2-sweep --out results/g2
//   tmss run populations-wigner --r 0 --set families=thermal,even
//   tmss list
//
// Exit codes: 0 success, 2 configuration or domain error, 3 numerical guard.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tmss/errors.hpp"
#include "tmss/runner/config.hpp"
#include "tmss/runner/experiments.hpp"
#include "tmss/runner/output.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;

std::string quoted(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out;
}

int fail(const char* kind, int code, const std::string& message)
{
    std::fprintf(stderr, "tmss: error=%s exit=%d message=\"%s\"\n", kind, code, quoted(message).c_str());
    return code;
}

void print_keys()
{
    std::printf("common keys:\n");
    for (const auto& k : tmss::runner::common_keys())
        std::printf("  %-18s %-24s %s\n", k.name.c_str(), k.default_value.c_str(), k.help.c_str());
    for (const auto& name : tmss::runner::experiment_names()) {
        std::printf("%s:\n", name.c_str());
        for (const auto& k : tmss::runner::experiment_keys(name))
            std::printf("  %-18s %-24s %s\n", k.name.c_str(), k.default_value.c_str(), k.help.c_str());
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-mode squeezed state toolkit: experiment runner"};
    app.set_version_flag("--version", tmss::runner::artifact_version());
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "List experiments and their config keys");
    auto* run = app.add_subcommand("run", "Run one experiment");

    std::string experiment;
    std::optional<std::string> out, format, config_path;
    std::optional<long> seed;
    std::optional<std::string> r, theta, phi, cutoff, tail_tol;
    std::vector<std::string> sets;
    run->add_option("experiment", experiment, "Experiment name (see `tmss list`)")->required();
    run->add_option("--out", out, "Output directory");
    run->add_option("--format", format, "csv or json");
    run->add_option("--config", config_path, "Config file (default $TMSS_CONFIG_DIR/tmss.conf)");
    run->add_option("--seed", seed, "Seed for sampled measurement noise");
    run->add_option("--set", sets, "Override a config key, key=value (repeatable)");
    run->add_option("--r", r, "Squeezing magnitude");
    run->add_option("--theta", theta, "Squeezing angle");
    run->add_option("--phi", phi, "Relative phase (entanglement-slice: sets beta = phi - pi)");
    run->add_option("--cutoff", cutoff, "Fock cutoff");
    run->add_option("--tail-tol", tail_tol, "Truncation tail tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (*list) {
        print_keys();
        return 0;
    }

    try {
        std::map<std::string, std::string> overrides;
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || eq == 0) throw tmss::runner::ConfigError("--set expects key=value, got '" + s + "'");
            overrides[s.substr(0, eq)] = s.substr(eq + 1);
        }
        if (out) overrides["out"] = *out;
        if (format) overrides["format"] = *format;
        if (seed) overrides["seed"] = std::to_string(*seed);
        if (r) overrides["r"] = *r;
        if (theta) overrides["theta"] = *theta;
        if (cutoff) overrides["cutoff"] = *cutoff;
        if (tail_tol) overrides["tail_tol"] = *tail_tol;
        if (phi) {
            if (experiment != "entanglement-slice")
                throw tmss::runner::ConfigError("--phi applies to entanglement-slice only");
            overrides["beta"] = tmss::runner::format_number(std::stod(*phi) - 3.14159265358979323846);
        }

        std::optional<tmss::runner::ConfigFile> file;
        if (config_path) {
            file = tmss::runner::load_config_file(*config_path);
        } else if (const auto path = tmss::runner::default_config_path()) {
            file = tmss::runner::load_config_file(*path);
        }
        const tmss::runner::Config config =
            tmss::runner::Config::resolve(experiment, file ? &*file : nullptr, overrides);
        const tmss::runner::RunSummary summary = tmss::runner::run_and_write(config);
        std::printf("tmss: experiment=%s out=%s files=%zu warnings=%d\n", experiment.c_str(),
                    config.text("out").c_str(), summary.files.size() + 1, summary.warnings);
        return 0;
    } catch (const tmss::runner::ConfigError& e) {
        return fail("config", kExitConfig, e.what());
    } catch (const tmss::DomainError& e) {
        return fail("domain", kExitConfig, e.what());
    } catch (const tmss::ShapeError& e) {
        return fail("shape", kExitConfig, e.what());
    } catch (const tmss::NumericalGuardError& e) {
        return fail("numerical_guard", kExitGuard, e.what());
    } catch (const tmss::TruncationError& e) {
        return fail("truncation", kExitGuard, e.what());
    } catch (const std::invalid_argument& e) {
        return fail("config", kExitConfig, e.what());
    } catch (const std::exception& e) {
        return fail("internal", 1, e.what());
    }
}
