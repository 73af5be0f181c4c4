#include "fdcell/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace fdcell {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return v;
        },
        c);
}

const char* type_name(const Cell& c) {
    switch (c.index()) {
        case 0: return "float";
        case 1: return "int";
        case 2: return "bool";
        default: return "string";
    }
}

bool same_cell(const Cell& a, const Cell& b) {
    if (a.index() != b.index()) return false;
    if (const double* x = std::get_if<double>(&a)) {
        const double y = std::get<double>(b);
        return (std::isnan(*x) && std::isnan(y)) || *x == y;
    }
    return a == b;
}

nlohmann::ordered_json cell_json(const Cell& c) {
    if (const double* x = std::get_if<double>(&c)) {
        if (std::isnan(*x)) return nullptr;
        if (std::isinf(*x)) return *x > 0 ? "inf" : "-inf";
        return *x;
    }
    if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
    if (const bool* b = std::get_if<bool>(&c)) return *b;
    return std::get<std::string>(c);
}

Cell cell_from_json(const nlohmann::ordered_json& j, const std::string& type) {
    if (type == "float") {
        if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
        if (j.is_string()) {
            const auto s = j.get<std::string>();
            if (s == "inf") return std::numeric_limits<double>::infinity();
            if (s == "-inf") return -std::numeric_limits<double>::infinity();
            throw std::invalid_argument("bad float cell '" + s + "'");
        }
        return j.get<double>();
    }
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number()) return j.get<double>();
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<std::string>();
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                    std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw std::out_of_range("no column '" + name + "'");
}

const Cell& Table::at(std::size_t row, const std::string& column) const { return rows.at(row)[column_index(column)]; }

double Table::number(std::size_t row, const std::string& column) const {
    const Cell& c = at(row, column);
    if (const double* x = std::get_if<double>(&c)) return *x;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw std::invalid_argument("column '" + column + "' is not numeric");
}

bool Table::operator==(const Table& other) const {
    if (columns != other.columns || rows.size() != other.rows.size() || metadata != other.metadata) return false;
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (!same_cell(rows[r][c], other.rows[r][c])) return false;
    return true;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_field(t.columns[i]);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cell_text(row[i]));
        }
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json to_json(const Table& t) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = "fdcell";
    j["version"] = std::string(kVersion);
    j["metadata"] = t.metadata;
    j["columns"] = t.columns;
    auto types = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        types.push_back(t.rows.empty() ? "float" : type_name(t.rows.front()[c]));
    j["column_types"] = types;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

Table table_from_json(const nlohmann::ordered_json& j) {
    if (j.value("schema_version", 0) != kSchemaVersion) throw std::invalid_argument("unsupported schema_version");
    Table t;
    t.columns = j.at("columns").get<std::vector<std::string>>();
    t.metadata = j.value("metadata", nlohmann::ordered_json::object());
    const auto types = j.at("column_types").get<std::vector<std::string>>();
    if (types.size() != t.columns.size()) throw std::invalid_argument("column_types width mismatch");
    for (const auto& r : j.at("rows")) {
        std::vector<Cell> row;
        if (r.size() != t.columns.size()) throw std::invalid_argument("row width mismatch");
        for (std::size_t c = 0; c < r.size(); ++c) row.push_back(cell_from_json(r[c], types[c]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void emit(const Table& t, OutputFormat format, const std::string& path) {
    const std::string text = format == OutputFormat::Csv ? to_csv(t) : to_json(t).dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw std::runtime_error("cannot write to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace fdcell
