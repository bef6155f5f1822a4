#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "tmss/runner/config.hpp"

namespace tmss::runner {

using Cell = std::variant<double, std::string>;

struct Table {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

enum class Format { Csv, Json };

Format parse_format(const std::string& name);

// %.15g; non-finite values print as nan / inf / -inf.
std::string format_number(double x);

// CSV: header row then one line per record. JSON: {"columns": [...], "records": [{...}]}
// holding the same 15-digit values (non-finite numbers become null).
std::string render(const Table& table, Format format);

// Writes <dir>/<name>.<csv|json> and returns the file name.
std::string write_table(const Table& table, const std::filesystem::path& dir, Format format);

// run.json: artifact version, experiment, seed, resolved config and data files.
// Keys are sorted and nothing time-dependent is recorded.
void write_manifest(const std::filesystem::path& dir, const Config& config, const std::vector<std::string>& files,
                    int warnings);

std::string artifact_version();

}  // namespace tmss::runner
