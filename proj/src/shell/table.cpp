#include "screening/shell/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "screening/error.hpp"

namespace screening::shell {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("row has " + std::to_string(row.size()) + " cells, expected " +
                               std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

Format format_from_string(const std::string& name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw SchemaError("unknown output format '" + name + "' (expected csv or json)");
}

const char* to_string(Format format) noexcept {
    return format == Format::csv ? "csv" : "json";
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::string>) {
                if (v.find_first_of(",\"\n") == std::string::npos) return v;
                std::string quoted = "\"";
                for (char ch : v) {
                    if (ch == '"') quoted += '"';
                    quoted += ch;
                }
                return quoted + "\"";
            } else return std::to_string(v);
        },
        cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                // JSON has no nan/inf; keep them as strings so nothing is lost.
                if (!std::isfinite(v)) return format_double(v);
                return v;
            } else return v;
        },
        cell);
}

}  // namespace

std::string to_csv(const Table& table) {
    std::string out = "# columns: ";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& note : table.notes) out += "# " + note + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += cell_text(row[i]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json to_json(const Table& table) {
    nlohmann::ordered_json doc;
    doc["columns"] = table.columns;
    doc["notes"] = table.notes;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

std::string render(const Table& table, Format format) {
    return format == Format::csv ? to_csv(table) : to_json(table).dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move output into place at " + path.string() + ": " + ec.message());
}

}  // namespace screening::shell
