#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fdcell/common.hpp"

namespace fdcell {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Rectangular result table. Column names carry their unit suffix
/// (`_hz`, `_bps`, ...); dimensionless columns have none.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    /// Run metadata echoed into JSON output (seed, parameters, mode).
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    /// Throws std::invalid_argument if the row width does not match.
    void add_row(std::vector<Cell> row);
    std::size_t column_index(const std::string& name) const;
    const Cell& at(std::size_t row, const std::string& column) const;
    double number(std::size_t row, const std::string& column) const;

    bool operator==(const Table& other) const;
};

/// Shortest round-trip decimal form, independent of the locale.
std::string format_double(double v);

std::string to_csv(const Table& t);
nlohmann::ordered_json to_json(const Table& t);
/// Inverse of to_json.
Table table_from_json(const nlohmann::ordered_json& j);

/// Writes the table to `path`, or to stdout when the path is empty.
/// Throws std::runtime_error naming the path on I/O failure.
void emit(const Table& t, OutputFormat format, const std::string& path);

inline constexpr int kSchemaVersion = 1;

}  // namespace fdcell
