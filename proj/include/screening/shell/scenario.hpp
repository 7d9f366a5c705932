#pragma once

// Scenario files are JSON:
//   {"name": "...", "kind": "tail", "parameters": {...},
//    "output": {"path": "out.csv", "format": "csv"}}
// Unknown keys at any level are schema errors.

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "screening/shell/table.hpp"

namespace screening::shell {

using Json = nlohmann::ordered_json;

enum class ScenarioKind { tail, system, phase, lifetime, cohort, bayes, effdim, simulate };

ScenarioKind kind_from_string(const std::string& name);
const char* to_string(ScenarioKind kind) noexcept;
std::vector<std::string> parameter_names(ScenarioKind kind);

struct OutputSpec {
    std::filesystem::path path;
    Format format = Format::csv;
};

struct Scenario {
    std::string name;
    ScenarioKind kind = ScenarioKind::tail;
    Json parameters = Json::object();
    std::optional<OutputSpec> output;
};

Scenario parse_scenario(const Json& doc);
Scenario load_scenario(const std::filesystem::path& path);

// Type-checks parameters against the kind's schema and fills defaults.
Json resolve_parameters(ScenarioKind kind, const Json& parameters);

struct Evaluation {
    Table table;
    Json summary = Json::object();
};

// Resolves, then dispatches to the numerical module.
Evaluation evaluate(ScenarioKind kind, const Json& parameters);

struct RunManifest {
    std::string scenario;
    std::string kind;
    Json parameters;
    std::optional<std::uint64_t> seed;
    std::string version;
    std::filesystem::path output_path;
    std::string format;
    std::string checksum;  // sha256 of the output file
    Json summary;
};

Json to_json(const RunManifest& manifest);
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

// Validates and evaluates before touching the file system, so a rejected
// scenario leaves no output behind. Writes the output and its manifest.
RunManifest run_scenario(const Scenario& scenario);

// Recomputes the checksum of the file a manifest describes.
bool verify_manifest(const std::filesystem::path& manifest_path);

std::string artifact_version();

}  // namespace screening::shell
