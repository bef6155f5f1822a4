#include "tmss/runner/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tmss::runner {
namespace {

using json = nlohmann::json;

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json json_cell(const Cell& cell)
{
    if (const auto* text = std::get_if<std::string>(&cell)) return *text;
    const double x = std::get<double>(cell);
    if (!std::isfinite(x)) return nullptr;
    // Same digits as the CSV
    return std::strtod(format_number(x).c_str(), nullptr);
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace

void Table::add_row(std::vector<Cell> row)
{
    if (row.size() != columns.size()) throw std::logic_error("table " + name + ": row width mismatch");
    rows.push_back(std::move(row));
}

Format parse_format(const std::string& name)
{
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw ConfigError("format must be csv or json, got '" + name + "'");
}

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";  // folds -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string render(const Table& table, Format format)
{
    if (format == Format::Csv) {
        std::ostringstream out;
        for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << csv_field(table.columns[c]);
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << ',';
                if (const auto* text = std::get_if<std::string>(&row[c]))
                    out << csv_field(*text);
                else
                    out << format_number(std::get<double>(row[c]));
            }
            out << '\n';
        }
        return out.str();
    }
    json doc;
    doc["columns"] = table.columns;
    json records = json::array();
    for (const auto& row : table.rows) {
        json record = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) record[table.columns[c]] = json_cell(row[c]);
        records.push_back(std::move(record));
    }
    doc["records"] = std::move(records);
    return doc.dump(1) + "\n";
}

std::string write_table(const Table& table, const std::filesystem::path& dir, Format format)
{
    const std::string file = table.name + (format == Format::Csv ? ".csv" : ".json");
    write_file(dir / file, render(table, format));
    return file;
}

std::string artifact_version() { return TMSS_VERSION; }

void write_manifest(const std::filesystem::path& dir, const Config& config, const std::vector<std::string>& files,
                    int warnings)
{
    json doc;
    doc["artifact"] = "tmss";
    doc["version"] = artifact_version();
    doc["experiment"] = config.experiment();
    doc["seed"] = config.seed();
    json resolved = json::object();
    for (const auto& [key, value] : config.values()) resolved[key] = value;
    doc["config"] = std::move(resolved);
    doc["files"] = files;
    doc["warnings"] = warnings;
    write_file(dir / "run.json", doc.dump(2) + "\n");
}

}  // namespace tmss::runner
