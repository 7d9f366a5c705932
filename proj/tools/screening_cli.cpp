#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "screening/error.hpp"
#include "screening/shell/figures.hpp"
#include "screening/shell/golden.hpp"
#include "screening/shell/scenario.hpp"

namespace sh = screening::shell;

namespace {

enum Exit { kOk = 0, kFailure = 1, kSchema = 2, kDomain = 3, kBudget = 4 };

int report(const char* category, const std::string& message, int code) {
    std::string escaped;
    for (char ch : message) {
        if (ch == '"' || ch == '\\') escaped += '\\';
        escaped += ch == '\n' ? ' ' : ch;
    }
    std::fprintf(stderr, "screening: error=%s message=\"%s\"\n", category, escaped.c_str());
    return code;
}

struct ScenarioFlags {
    std::string config;
    std::vector<std::string> params;
    std::string out;
    std::string format;
    std::uint64_t runs = 0;
    std::uint64_t seed = 0;
    double criterion_level = 1.0;
    CLI::Option* runs_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* level_opt = nullptr;
};

sh::Json parse_value(const std::string& text) {
    try {
        return sh::Json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
        return text;
    }
}

int run_kind(sh::ScenarioKind kind, const ScenarioFlags& f) {
    sh::Scenario s;
    if (!f.config.empty()) {
        s = sh::load_scenario(f.config);
        if (s.kind != kind) {
            throw screening::SchemaError("config is a '" + std::string(sh::to_string(s.kind)) +
                                         "' scenario, not '" + sh::to_string(kind) + "'");
        }
    } else {
        s.name = sh::to_string(kind);
        s.kind = kind;
    }
    for (const auto& kv : f.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw screening::SchemaError("parameter '" + kv + "' is not key=value");
        }
        s.parameters[kv.substr(0, eq)] = parse_value(kv.substr(eq + 1));
    }
    if (f.runs_opt && f.runs_opt->count()) s.parameters["runs"] = f.runs;
    if (f.seed_opt && f.seed_opt->count()) s.parameters["seed"] = f.seed;
    if (f.level_opt && f.level_opt->count()) s.parameters["criterion_level"] = f.criterion_level;
    if (!f.out.empty()) {
        sh::OutputSpec spec = s.output.value_or(sh::OutputSpec{});
        spec.path = f.out;
        s.output = spec;
    }
    if (!f.format.empty()) {
        sh::OutputSpec spec = s.output.value_or(sh::OutputSpec{});
        spec.format = sh::format_from_string(f.format);
        s.output = spec;
    }

    if (s.output && !s.output->path.empty()) {
        const sh::RunManifest m = sh::run_scenario(s);
        std::cout << m.output_path.string() << " sha256=" << m.checksum << "\n";
    } else {
        const sh::Format format = s.output ? s.output->format : sh::Format::csv;
        std::cout << sh::render(sh::evaluate(kind, s.parameters).table, format);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"False-alert risk of large-scale screening systems"};
    app.set_version_flag("--version", sh::artifact_version());
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads for parallel kernels (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);

    std::map<std::string, ScenarioFlags> flags;
    const std::pair<const char*, sh::ScenarioKind> kinds[] = {
        {"tail", sh::ScenarioKind::tail},         {"system", sh::ScenarioKind::system},
        {"phase-scan", sh::ScenarioKind::phase},  {"lifetime", sh::ScenarioKind::lifetime},
        {"cohort", sh::ScenarioKind::cohort},     {"bayes", sh::ScenarioKind::bayes},
        {"effdim", sh::ScenarioKind::effdim},     {"simulate", sh::ScenarioKind::simulate}};
    std::vector<std::pair<CLI::App*, sh::ScenarioKind>> commands;
    for (const auto& [name, kind] : kinds) {
        auto& f = flags[name];
        auto* sub = app.add_subcommand(name, std::string("run a scenario of kind ") + sh::to_string(kind));
        sub->add_option("--config", f.config, "scenario JSON file");
        sub->add_option("-p,--param", f.params, "parameter override key=value (value parsed as JSON)");
        sub->add_option("--out", f.out, "output file (stdout if omitted); a manifest is written beside it");
        sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        if (kind == sh::ScenarioKind::simulate) {
            f.runs_opt = sub->add_option("--runs", f.runs, "Monte Carlo trials")->check(CLI::PositiveNumber);
            f.seed_opt = sub->add_option("--seed", f.seed, "RNG seed");
        }
        if (kind == sh::ScenarioKind::lifetime) {
            f.level_opt = sub->add_option("--criterion-level", f.criterion_level,
                                          "failure criterion: n q(t) reaches this level");
        }
        commands.emplace_back(sub, kind);
    }

    std::string fig_out = "figures";
    std::uint64_t fig_runs = 5000, fig_seed = 0;
    auto* fig = app.add_subcommand("figures", "write the four panel datasets and a manifest");
    fig->add_option("--out", fig_out, "output directory");
    fig->add_option("--runs", fig_runs, "Monte Carlo trials per panel A point")->check(CLI::PositiveNumber);
    fig->add_option("--seed", fig_seed, "RNG seed");

    std::string golden_out, golden_format = "csv";
    double tolerance_scale = 1.0;
    auto* golden = app.add_subcommand("golden", "recompute the worked-example reference values");
    golden->add_option("--out", golden_out, "report file (stdout if omitted)");
    golden->add_option("--format", golden_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    golden->add_option("--tolerance-scale", tolerance_scale, "multiply every tolerance")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("schema", e.what(), kSchema);
    }
    if (threads > 0) omp_set_num_threads(threads);

    try {
        for (const auto& [sub, kind] : commands) {
            if (sub->parsed()) return run_kind(kind, flags[sub->get_name()]);
        }
        if (fig->parsed()) {
            const auto manifest = sh::figure_panels(fig_out, fig_runs, fig_seed);
            std::cout << fig_out << "/figures.manifest.json panel_a_mae="
                      << sh::format_double(manifest["summary"]["panel_a_mae_poisson"].get<double>()) << "\n";
            return kOk;
        }
        if (golden->parsed()) {
            const auto format = sh::format_from_string(golden_format);
            const auto rep = sh::reference_examples(tolerance_scale);
            const std::string text = sh::render(rep.table(), format);
            if (golden_out.empty()) {
                std::cout << text;
            } else {
                sh::write_text(golden_out, text);
            }
            if (!rep.all_pass()) return report("golden", "one or more reference values out of tolerance", kFailure);
            return kOk;
        }
    } catch (const screening::SchemaError& e) {
        return report("schema", e.what(), kSchema);
    } catch (const screening::BudgetExceeded& e) {
        return report("budget", e.what(), kBudget);
    } catch (const std::domain_error& e) {
        return report("domain", e.what(), kDomain);
    } catch (const std::range_error& e) {
        return report("range", e.what(), kDomain);
    } catch (const screening::IoError& e) {
        return report("io", e.what(), kFailure);
    } catch (const std::exception& e) {
        return report("internal", e.what(), kFailure);
    }
    return kFailure;
}
