#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

namespace screening::shell {

using Cell = std::variant<double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;  // extra '#' lines after the column line

    void add_row(std::vector<Cell> row);
};

enum class Format { csv, json };

Format format_from_string(const std::string& name);
const char* to_string(Format format) noexcept;

// Shortest decimal string that parses back to the same double; nan, inf, -inf
// for non-finite values.
std::string format_double(double value);

// "# columns: a,b,c", then notes, then the header and rows.
std::string to_csv(const Table& table);
nlohmann::ordered_json to_json(const Table& table);
std::string render(const Table& table, Format format);

// Writes atomically enough for our purposes: to <path>.tmp, then rename.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace screening::shell
