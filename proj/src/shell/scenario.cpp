#include "screening/shell/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "screening/cohorts.hpp"
#include "screening/effdim.hpp"
#include "screening/error.hpp"
#include "screening/lifetime.hpp"
#include "screening/posterior.hpp"
#include "screening/reliability.hpp"
#include "screening/shell/checksum.hpp"
#include "screening/simkit.hpp"
#include "screening/tailcore.hpp"

#ifndef SCREENING_VERSION
#define SCREENING_VERSION "0.0.0"
#endif

namespace screening::shell {

namespace {

enum class Type { real, count, boolean, text, real_list, groups };

struct Param {
    std::string name;
    Type type;
    bool required;
    Json fallback = nullptr;  // default when not required; null means "absent"
};

const char* type_name(Type t) {
    switch (t) {
        case Type::real: return "number";
        case Type::count: return "nonnegative integer";
        case Type::boolean: return "boolean";
        case Type::text: return "string";
        case Type::real_list: return "array of numbers";
        case Type::groups: return "array of {label, size, p} objects";
    }
    return "?";
}

const std::vector<Param>& schema(ScenarioKind kind) {
    static const std::vector<Param> tail = {
        {"lambda", Type::real, false}, {"k", Type::count, false},
        {"p", Type::real, false},      {"m", Type::count, true}};
    static const std::vector<Param> system = {
        {"k", Type::count, true}, {"p", Type::real, true}, {"m", Type::count, false},
        {"c", Type::real, false}, {"n", Type::count, true}};
    static const std::vector<Param> phase = {
        {"lambdas", Type::real_list, true},
        {"c", Type::real, true},
        {"alphas", Type::real_list, true},
        {"max_population", Type::real, false, kMaxPhasePopulation}};
    static const std::vector<Param> lifetime = {
        {"k0", Type::real, true},
        {"gamma", Type::real, true},
        {"p", Type::real, true},
        {"m", Type::count, true},
        {"n", Type::count, false, 1},
        {"criterion_level", Type::real, false, 1.0},
        {"times", Type::real_list, false}};
    static const std::vector<Param> cohort = {
        {"k", Type::count, true}, {"m", Type::count, true}, {"groups", Type::groups, true}};
    static const std::vector<Param> bayes = {
        {"r", Type::real, true},
        {"s", Type::real, true},
        {"alpha", Type::real, false, 0.5},
        {"q", Type::real, true},
        {"n", Type::count, true}};
    static const std::vector<Param> effdim = {
        {"k", Type::count, true},     {"p", Type::real, true},     {"c", Type::real, true},
        {"k_eff", Type::real, false}, {"area", Type::real, false}, {"xi", Type::real, false},
        {"tau", Type::real, false},   {"rhos", Type::real_list, false},
        {"nonnegative", Type::boolean, false, true}};
    static const std::vector<Param> simulate = {
        {"k", Type::count, true},
        {"p", Type::real, true},
        {"m", Type::count, true},
        {"n", Type::count, false, 1},
        {"runs", Type::count, false, 5000},
        {"seed", Type::count, false, 0},
        {"mode", Type::text, false, "binomial-exact"},
        {"target", Type::text, false, "per-person"},
        {"correlation", Type::text, false, "exchangeable"},
        {"rho", Type::real, false, 0.0},
        {"analytic_composite", Type::boolean, false, false}};
    switch (kind) {
        case ScenarioKind::tail: return tail;
        case ScenarioKind::system: return system;
        case ScenarioKind::phase: return phase;
        case ScenarioKind::lifetime: return lifetime;
        case ScenarioKind::cohort: return cohort;
        case ScenarioKind::bayes: return bayes;
        case ScenarioKind::effdim: return effdim;
        case ScenarioKind::simulate: return simulate;
    }
    throw std::logic_error("unhandled scenario kind");
}

bool matches(Type t, const Json& v) {
    switch (t) {
        case Type::real: return v.is_number();
        case Type::count: return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
        case Type::boolean: return v.is_boolean();
        case Type::text: return v.is_string();
        case Type::real_list:
            if (!v.is_array()) return false;
            for (const auto& x : v) {
                if (!x.is_number()) return false;
            }
            return true;
        case Type::groups:
            if (!v.is_array() || v.empty()) return false;
            for (const auto& g : v) {
                if (!g.is_object() || g.size() != 3 || !g.contains("label") || !g.contains("size") ||
                    !g.contains("p")) {
                    return false;
                }
                if (!g["label"].is_string() || !matches(Type::count, g["size"]) || !g["p"].is_number()) {
                    return false;
                }
            }
            return true;
    }
    return false;
}

void check_allowed_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) throw SchemaError("unknown key '" + it.key() + "' in " + where);
    }
}

double real(const Json& p, const char* key) { return p.at(key).get<double>(); }
std::uint64_t count(const Json& p, const char* key) { return p.at(key).get<std::uint64_t>(); }
bool has(const Json& p, const char* key) { return p.contains(key); }

std::vector<double> reals(const Json& p, const char* key) {
    return p.at(key).get<std::vector<double>>();
}

void require_exactly_one(const Json& p, std::initializer_list<const char*> keys, const std::string& what) {
    int present = 0;
    for (const char* k : keys) present += has(p, k) ? 1 : 0;
    if (present != 1) throw SchemaError(what);
}

Evaluation eval_tail(const Json& p) {
    const bool kp = has(p, "k") || has(p, "p");
    if (kp == has(p, "lambda") || (kp && !(has(p, "k") && has(p, "p")))) {
        throw SchemaError("tail needs either lambda or both k and p");
    }
    const std::uint64_t m = count(p, "m");
    double binom = NAN;
    double lambda = 0.0;
    if (kp) {
        lambda = static_cast<double>(count(p, "k")) * real(p, "p");
        binom = binomial_tail(count(p, "k"), real(p, "p"), m);
    } else {
        lambda = real(p, "lambda");
    }
    const TailEstimate est = tail_estimate(lambda, m);
    Evaluation ev;
    ev.table.columns = {"lambda", "m", "q", "log_q", "binomial_q", "chernoff_upper", "robbins_lower",
                        "exponent", "bounds_apply"};
    ev.table.add_row({est.lambda, est.m, est.exact, est.log_exact, binom, est.chernoff_upper,
                      est.robbins_lower, est.exponent, est.bounds_apply});
    ev.summary["q"] = est.exact;
    ev.summary["log_q"] = est.log_exact;
    return ev;
}

Evaluation eval_system(const Json& p) {
    require_exactly_one(p, {"m", "c"}, "system needs exactly one of m or c");
    const ScreeningConfig cfg =
        has(p, "m") ? ScreeningConfig::with_threshold(count(p, "k"), real(p, "p"), count(p, "m"), count(p, "n"))
                    : ScreeningConfig::with_ratio(count(p, "k"), real(p, "p"), real(p, "c"), count(p, "n"));
    const SystemRisk r = system_risk(cfg);
    const double lambda = cfg.lambda();
    const double c = static_cast<double>(cfg.m) / lambda;
    double n_crit = NAN, n_crit_sqrt = NAN;
    if (c > 1.0) {
        const CriticalPopulation cp = critical_population(lambda, c);
        n_crit = cp.refined;
        n_crit_sqrt = cp.sqrt_scale;
    }
    Evaluation ev;
    ev.table.columns = {"k", "p", "m", "n", "lambda", "q", "expected_false_alerts",
                        "prob_at_least_one", "log_complement", "lower_bound", "upper_bound",
                        "n_crit", "n_crit_sqrt_scale"};
    ev.table.add_row({cfg.k, cfg.p, cfg.m, cfg.n, lambda, r.per_person_q, r.expected_false_alerts,
                      r.prob_at_least_one, r.log_complement, r.lower_bound, r.upper_bound, n_crit,
                      n_crit_sqrt});
    ev.summary["expected_false_alerts"] = r.expected_false_alerts;
    ev.summary["prob_at_least_one"] = r.prob_at_least_one;
    ev.summary["log_complement"] = r.log_complement;
    return ev;
}

Evaluation eval_phase(const Json& p) {
    const auto lambdas = reals(p, "lambdas");
    const auto alphas = reals(p, "alphas");
    const double c = real(p, "c");
    const auto grid = phase_grid(lambdas, c, alphas, real(p, "max_population"));
    Evaluation ev;
    ev.table.columns = {"lambda", "alpha", "n", "m", "q", "expected_false_alerts", "prob_at_least_one",
                        "log_complement", "lower_bound", "upper_bound"};
    for (const auto& pt : grid) {
        ev.table.add_row({pt.lambda, pt.alpha, pt.n, pt.m, pt.risk.per_person_q,
                          pt.risk.expected_false_alerts, pt.risk.prob_at_least_one,
                          pt.risk.log_complement, pt.risk.lower_bound, pt.risk.upper_bound});
    }
    Json widths = Json::object();
    for (double lambda : lambdas) {
        widths[format_double(lambda)] = transition_width(lambda, c);
    }
    ev.summary["transition_width_0.1_0.9"] = widths;
    return ev;
}

Evaluation eval_lifetime(const Json& p) {
    const GrowthModel model{real(p, "k0"), real(p, "gamma"), real(p, "p")};
    const std::uint64_t m = count(p, "m");
    const std::uint64_t n = count(p, "n");
    Evaluation ev;
    if (has(p, "times")) {
        const auto times = reals(p, "times");
        ev.table.columns = {"t", "lambda", "q", "expected_false_alerts", "prob_at_least_one"};
        for (const auto& pt : lifetime_series(model, m, n, times)) {
            ev.table.add_row({pt.t, pt.lambda, pt.q, pt.expected_false_alerts, pt.prob_at_least_one});
        }
        ev.summary["t_star_analytic"] = critical_time_analytic(model, m);
        return ev;
    }
    const LifetimeReport r = critical_time_corrected(model, m, n, real(p, "criterion_level"));
    ev.table.columns = {"k0", "gamma", "p", "m", "n", "criterion_level", "t_star_analytic",
                        "t_star_corrected", "lambda_at_failure", "closed_form_lambda",
                        "correction_magnitude", "residual", "status"};
    ev.table.add_row({model.k0, model.gamma, model.p, m, n, r.criterion_level, r.t_star_analytic,
                      r.t_star_corrected, r.lambda_at_failure, r.closed_form_lambda,
                      r.correction_magnitude, r.residual, std::string(to_string(r.status))});
    ev.summary["t_star_analytic"] = r.t_star_analytic;
    ev.summary["status"] = to_string(r.status);
    return ev;
}

Evaluation eval_cohort(const Json& p) {
    CohortProfile profile;
    for (const auto& g : p.at("groups")) {
        profile.groups.push_back({g["label"].get<std::string>(), g["size"].get<std::uint64_t>(),
                                  g["p"].get<double>()});
    }
    const std::uint64_t k = count(p, "k"), m = count(p, "m");
    const CohortRisk risk = cohort_system_risk(profile, k, m);
    const DominanceReport dom = dominance_decomposition(profile, k, m);
    Evaluation ev;
    ev.table.columns = {"label", "size", "p", "lambda", "q", "mass", "share", "dominant"};
    for (std::size_t i = 0; i < risk.groups.size(); ++i) {
        const auto& g = risk.groups[i];
        ev.table.add_row({g.label, g.size, profile.groups[i].p, g.lambda, g.q, g.mass, g.share,
                          i == dom.dominant_index});
    }
    ev.table.notes.push_back("system_prob=" + format_double(risk.exact) +
                             " log_complement=" + format_double(risk.log_complement));
    ev.summary["system_prob"] = risk.exact;
    ev.summary["log_complement"] = risk.log_complement;
    ev.summary["exponential_approx"] = risk.exponential_approx;
    ev.summary["dominant"] = dom.dominant_label;
    ev.summary["main_term"] = dom.main_term;
    ev.summary["correction_bound"] = dom.correction_bound;
    return ev;
}

Evaluation eval_bayes(const Json& p) {
    const BayesContext ctx{real(p, "r"), real(p, "s"), real(p, "alpha"), real(p, "q"), count(p, "n")};
    const PpvResult r = ppv(ctx);
    const RegimeVerdict v = classify_regime(ctx);
    const double odds = posterior_odds(likelihood_ratio(ctx.s, ctx.q), prior_odds_from_base_rate(ctx.base_rate()));
    const double n_bayes = bayes_critical_population(ctx.r, ctx.s, ctx.alpha, ctx.q);
    Evaluation ev;
    ev.table.columns = {"r", "s", "alpha", "q", "n", "ppv", "fdr", "ppv_sparse", "fdr_sparse",
                        "sparse_target", "posterior_odds", "bayes_critical_population", "nq", "rs",
                        "regime", "frequentist_reliable"};
    ev.table.add_row({ctx.r, ctx.s, ctx.alpha, ctx.q, ctx.n, r.ppv, r.fdr, r.ppv_sparse, r.fdr_sparse,
                      r.sparse_target, odds, n_bayes, v.nq, v.rs, std::string(to_string(v.regime)),
                      v.frequentist_reliable});
    ev.summary["ppv"] = r.ppv;
    ev.summary["regime"] = to_string(v.regime);
    return ev;
}

Evaluation eval_effdim(const Json& p) {
    const std::uint64_t k = count(p, "k");
    double k_eff = 0.0;
    std::string source;
    const int sources = has(p, "k_eff") + (has(p, "area") || has(p, "xi")) + has(p, "tau") + has(p, "rhos");
    if (sources != 1) throw SchemaError("effdim needs exactly one of k_eff, area+xi, tau or rhos");
    double half_tau = NAN;
    if (has(p, "k_eff")) {
        k_eff = real(p, "k_eff");
        source = "given";
    } else if (has(p, "area") || has(p, "xi")) {
        if (!(has(p, "area") && has(p, "xi"))) throw SchemaError("spatial k_eff needs both area and xi");
        k_eff = k_eff_spatial({real(p, "area"), real(p, "xi")});
        source = "spatial";
    } else if (has(p, "tau")) {
        const TemporalEstimate t = k_eff_temporal_exponential(k, real(p, "tau"));
        k_eff = t.k_eff;
        half_tau = t.half_tau_form;
        source = "temporal";
    } else {
        k_eff = k_eff_temporal(k, reals(p, "rhos"));
        source = "explicit-rho";
    }
    const CorrelationAdjusted a = adjusted_limits(k, real(p, "p"), real(p, "c"), k_eff, p.at("nonnegative").get<bool>());
    Evaluation ev;
    ev.table.columns = {"k", "k_eff", "k_eff_source", "k_over_2tau", "reduction_factor",
                        "exponent_indep", "exponent_corr", "tail_lower_corr", "n_crit_indep",
                        "n_crit_corr", "heuristic"};
    ev.table.add_row({k, a.k_eff, source, half_tau, a.reduction_factor, a.exponent_independent,
                      a.adjusted_exponent, a.adjusted_tail_lower, a.n_crit_independent,
                      a.adjusted_n_crit, a.heuristic});
    ev.summary["k_eff"] = a.k_eff;
    ev.summary["heuristic"] = true;
    return ev;
}

Evaluation eval_simulate(const Json& p) {
    SimPlan plan;
    plan.config = {count(p, "k"), real(p, "p"), count(p, "m"), count(p, "n")};
    plan.runs = count(p, "runs");
    plan.seed = count(p, "seed");
    plan.mode = sim_mode_from_string(p.at("mode").get<std::string>());
    plan.analytic_composite = p.at("analytic_composite").get<bool>();
    const std::string corr = p.at("correlation").get<std::string>();
    if (corr != "exchangeable" && corr != "ar1") {
        throw SchemaError("correlation must be exchangeable or ar1");
    }
    if (plan.mode == SimMode::copula_correlated) {
        plan.correlation = CorrelationSpec{
            corr == "ar1" ? CorrelationSpec::Kind::ar1 : CorrelationSpec::Kind::exchangeable, real(p, "rho")};
    }
    const std::string target = p.at("target").get<std::string>();
    if (target != "per-person" && target != "system") throw SchemaError("target must be per-person or system");

    Evaluation ev;
    ev.table.columns = {"target", "mode", "runs", "seed", "hits", "estimate", "std_error", "analytic",
                        "abs_error", "z_score", "mean_y", "var_y", "analytic_composite"};
    double mean = NAN, var = NAN;
    SimReport r;
    if (target == "system") {
        r = simulate_system(plan);
    } else if (plan.mode == SimMode::copula_correlated) {
        const CorrelatedReport c = simulate_correlated(plan);
        r = c.tail;
        mean = c.mean;
        var = c.variance;
    } else {
        r = simulate_per_person(plan);
    }
    ev.table.add_row({target, std::string(to_string(plan.mode)), r.runs, plan.seed, r.hits, r.estimate,
                      r.std_error, r.analytic, r.abs_error, r.z_score, mean, var, r.analytic_composite});
    ev.summary["estimate"] = r.estimate;
    ev.summary["analytic"] = r.analytic;
    return ev;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

}  // namespace

std::string artifact_version() { return SCREENING_VERSION; }

ScenarioKind kind_from_string(const std::string& name) {
    static const std::pair<const char*, ScenarioKind> kKinds[] = {
        {"tail", ScenarioKind::tail},         {"system", ScenarioKind::system},
        {"phase", ScenarioKind::phase},       {"lifetime", ScenarioKind::lifetime},
        {"cohort", ScenarioKind::cohort},     {"bayes", ScenarioKind::bayes},
        {"effdim", ScenarioKind::effdim},     {"simulate", ScenarioKind::simulate}};
    for (const auto& [n, k] : kKinds) {
        if (name == n) return k;
    }
    throw SchemaError("unknown scenario kind '" + name + "'");
}

const char* to_string(ScenarioKind kind) noexcept {
    switch (kind) {
        case ScenarioKind::tail: return "tail";
        case ScenarioKind::system: return "system";
        case ScenarioKind::phase: return "phase";
        case ScenarioKind::lifetime: return "lifetime";
        case ScenarioKind::cohort: return "cohort";
        case ScenarioKind::bayes: return "bayes";
        case ScenarioKind::effdim: return "effdim";
        case ScenarioKind::simulate: return "simulate";
    }
    return "unknown";
}

std::vector<std::string> parameter_names(ScenarioKind kind) {
    std::vector<std::string> names;
    for (const auto& p : schema(kind)) names.push_back(p.name);
    return names;
}

Json resolve_parameters(ScenarioKind kind, const Json& parameters) {
    if (!parameters.is_object()) throw SchemaError("parameters must be an object");
    const auto& spec = schema(kind);
    std::set<std::string> allowed;
    for (const auto& p : spec) allowed.insert(p.name);
    check_allowed_keys(parameters, allowed, std::string(to_string(kind)) + " parameters");

    Json out = Json::object();
    for (const auto& p : spec) {
        if (parameters.contains(p.name)) {
            const Json& v = parameters[p.name];
            if (!matches(p.type, v)) {
                throw SchemaError("parameter '" + p.name + "' must be a " + type_name(p.type));
            }
            out[p.name] = v;
        } else if (p.required) {
            throw SchemaError("missing required parameter '" + p.name + "'");
        } else if (!p.fallback.is_null()) {
            out[p.name] = p.fallback;
        }
    }
    return out;
}

Evaluation evaluate(ScenarioKind kind, const Json& parameters) {
    const Json p = resolve_parameters(kind, parameters);
    switch (kind) {
        case ScenarioKind::tail: return eval_tail(p);
        case ScenarioKind::system: return eval_system(p);
        case ScenarioKind::phase: return eval_phase(p);
        case ScenarioKind::lifetime: return eval_lifetime(p);
        case ScenarioKind::cohort: return eval_cohort(p);
        case ScenarioKind::bayes: return eval_bayes(p);
        case ScenarioKind::effdim: return eval_effdim(p);
        case ScenarioKind::simulate: return eval_simulate(p);
    }
    throw std::logic_error("unhandled scenario kind");
}

Scenario parse_scenario(const Json& doc) {
    if (!doc.is_object()) throw SchemaError("scenario must be a JSON object");
    check_allowed_keys(doc, {"name", "kind", "parameters", "output"}, "scenario");
    Scenario s;
    if (!doc.contains("name") || !doc["name"].is_string()) throw SchemaError("scenario needs a string 'name'");
    if (!doc.contains("kind") || !doc["kind"].is_string()) throw SchemaError("scenario needs a string 'kind'");
    s.name = doc["name"].get<std::string>();
    s.kind = kind_from_string(doc["kind"].get<std::string>());
    if (doc.contains("parameters")) s.parameters = doc["parameters"];
    resolve_parameters(s.kind, s.parameters);
    if (doc.contains("output")) {
        const Json& out = doc["output"];
        if (!out.is_object()) throw SchemaError("output must be an object");
        check_allowed_keys(out, {"path", "format"}, "output");
        if (!out.contains("path") || !out["path"].is_string()) throw SchemaError("output needs a string 'path'");
        OutputSpec spec;
        spec.path = out["path"].get<std::string>();
        if (out.contains("format")) {
            if (!out["format"].is_string()) throw SchemaError("output format must be a string");
            spec.format = format_from_string(out["format"].get<std::string>());
        }
        s.output = spec;
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_json_file(path));
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
    auto p = output;
    p += ".manifest.json";
    return p;
}

Json to_json(const RunManifest& m) {
    Json doc;
    doc["scenario"] = m.scenario;
    doc["kind"] = m.kind;
    doc["parameters"] = m.parameters;
    doc["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
    doc["version"] = m.version;
    doc["output"] = {{"path", m.output_path.filename().string()}, {"format", m.format}, {"sha256", m.checksum}};
    doc["summary"] = m.summary;
    return doc;
}

RunManifest run_scenario(const Scenario& scenario) {
    if (!scenario.output) throw SchemaError("scenario has no output path");
    const Json resolved = resolve_parameters(scenario.kind, scenario.parameters);
    const Evaluation ev = evaluate(scenario.kind, resolved);
    const std::string content = render(ev.table, scenario.output->format);

    RunManifest m;
    m.scenario = scenario.name;
    m.kind = to_string(scenario.kind);
    m.parameters = resolved;
    if (resolved.contains("seed")) m.seed = resolved["seed"].get<std::uint64_t>();
    m.version = artifact_version();
    m.output_path = scenario.output->path;
    m.format = to_string(scenario.output->format);
    m.checksum = sha256_hex(content);
    m.summary = ev.summary;

    write_text(m.output_path, content);
    write_text(manifest_path_for(m.output_path), to_json(m).dump(2) + "\n");
    return m;
}

bool verify_manifest(const std::filesystem::path& manifest_path) {
    const Json doc = read_json_file(manifest_path);
    std::vector<Json> entries;
    if (doc.contains("outputs")) {
        for (const auto& e : doc["outputs"]) entries.push_back(e);
    } else {
        entries.push_back(doc.at("output"));
    }
    for (const auto& e : entries) {
        const auto file = manifest_path.parent_path() / e.at("path").get<std::string>();
        if (sha256_file(file) != e.at("sha256").get<std::string>()) return false;
    }
    return !entries.empty();
}

}  // namespace screening::shell
