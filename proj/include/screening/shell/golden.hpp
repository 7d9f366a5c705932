#pragma once

// Registry of reference values from the worked examples, each with the
// tolerance it is held to.

#include <filesystem>
#include <string>
#include <vector>

#include "screening/shell/table.hpp"

namespace screening::shell {

struct GoldenRow {
    std::string id;
    std::string quantity;
    double computed = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool relative = false;  // tolerance is a fraction of |target|
    bool pass = false;
};

struct GoldenReport {
    std::vector<GoldenRow> rows;
    double tolerance_scale = 1.0;
    bool all_pass() const noexcept;
    Table table() const;
};

// Every tolerance is multiplied by tolerance_scale; 0 demands exact equality.
GoldenReport reference_examples(double tolerance_scale = 1.0);

// Writes the report; returns whether every row passed.
bool write_reference_examples(const std::filesystem::path& out, Format format, double tolerance_scale = 1.0);

}  // namespace screening::shell
