#include "screening/shell/figures.hpp"

#include <cmath>

#include "screening/cohorts.hpp"
#include "screening/error.hpp"
#include "screening/lifetime.hpp"
#include "screening/reliability.hpp"
#include "screening/shell/checksum.hpp"
#include "screening/tailcore.hpp"

namespace screening::shell {

namespace {

constexpr double kPanelAP = 0.001;
constexpr std::uint64_t kPanelAM = 2;
constexpr std::uint64_t kPanelAN = 200;
constexpr std::uint64_t kPanelAKMin = 50, kPanelAKMax = 300, kPanelAKStep = 10;

constexpr double kPanelBC = 1.5;
constexpr double kPanelBLambdas[] = {25.0, 50.0, 100.0};
constexpr double kPanelBLogMax = 12.0, kPanelBLogStep = 0.25;

const GrowthModel kPanelCModel{100.0, 1.5, 0.01};
constexpr std::uint64_t kPanelCM = 5;
constexpr std::uint64_t kPanelCPopulations[] = {1, 100, 10000};
constexpr double kPanelCTMax = 10.0, kPanelCTStep = 0.05;

constexpr double kPanelDP1 = 0.005, kPanelDP2 = 0.02;
constexpr std::uint64_t kPanelDN = 100000, kPanelDM = 7;
constexpr std::uint64_t kPanelDKMin = 50, kPanelDKMax = 2000, kPanelDKStep = 25;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::size_t steps(double max, double step) {
    return static_cast<std::size_t>(std::llround(max / step));
}

}  // namespace

PanelA panel_a(std::uint64_t runs, std::uint64_t seed, ExecPolicy policy) {
    PanelA out;
    out.table.columns = {"k", "lambda", "analytic_poisson", "analytic_binomial", "mc_estimate",
                         "mc_std_error", "mc_z", "mc_hits"};
    out.table.notes.push_back("p=0.001 m=2 n=200 runs=" + std::to_string(runs) +
                              " seed=" + std::to_string(seed) + " mode=binomial-exact");
    double err_p = 0.0, err_b = 0.0;
    std::size_t count = 0;
    for (std::uint64_t k = kPanelAKMin; k <= kPanelAKMax; k += kPanelAKStep, ++count) {
        SimPlan plan;
        plan.config = ScreeningConfig::with_threshold(k, kPanelAP, kPanelAM, kPanelAN);
        plan.runs = runs;
        plan.seed = splitmix64(seed ^ splitmix64(k));
        const SimReport sim = simulate_system(plan, policy);
        const double poisson = system_risk(plan.config).prob_at_least_one;
        const double binom = sim.analytic;
        err_p += std::abs(sim.estimate - poisson);
        err_b += std::abs(sim.estimate - binom);
        out.table.add_row({k, plan.config.lambda(), poisson, binom, sim.estimate, sim.std_error,
                           sim.z_score, sim.hits});
    }
    out.mae_poisson = err_p / static_cast<double>(count);
    out.mae_binomial = err_b / static_cast<double>(count);
    return out;
}

Table panel_b() {
    Table t;
    t.columns = {"lambda", "m", "log10_n", "n", "q", "expected_false_alerts", "prob_at_least_one",
                 "log_complement", "lower_bound", "upper_bound", "n_crit_sqrt_scale"};
    t.notes.push_back("c=1.5");
    for (double lambda : kPanelBLambdas) {
        const std::uint64_t m = threshold_from_ratio(kPanelBC, lambda);
        const double scale = critical_population(lambda, kPanelBC).sqrt_scale;
        for (std::size_t i = 0; i <= steps(kPanelBLogMax, kPanelBLogStep); ++i) {
            const double log10_n = static_cast<double>(i) * kPanelBLogStep;
            const double n = std::pow(10.0, log10_n);
            const SystemRisk r = system_risk_at_scale(lambda, m, n);
            t.add_row({lambda, m, log10_n, n, r.per_person_q, r.expected_false_alerts,
                       r.prob_at_least_one, r.log_complement, r.lower_bound, r.upper_bound, scale});
        }
    }
    return t;
}

Table panel_c() {
    Table t;
    t.columns = {"n", "t", "lambda", "q", "expected_false_alerts", "prob_at_least_one", "t_star_analytic"};
    t.notes.push_back("k0=100 gamma=1.5 p=0.01 m=5");
    const double t_star = critical_time_analytic(kPanelCModel, kPanelCM);
    std::vector<double> times;
    for (std::size_t i = 0; i <= steps(kPanelCTMax, kPanelCTStep); ++i) {
        times.push_back(static_cast<double>(i) * kPanelCTStep);
    }
    for (std::uint64_t n : kPanelCPopulations) {
        for (const auto& pt : lifetime_series(kPanelCModel, kPanelCM, n, times)) {
            t.add_row({n, pt.t, pt.lambda, pt.q, pt.expected_false_alerts, pt.prob_at_least_one, t_star});
        }
    }
    return t;
}

Table panel_d() {
    Table t;
    t.columns = {"k", "lambda_1", "lambda_2", "q_1", "q_2", "log_ratio", "ratio", "mass_1", "mass_2",
                 "share_2", "system_prob", "in_window"};
    t.notes.push_back("p_1=0.005 p_2=0.02 n_1=n_2=100000 m=7");
    const AmplificationWindow w = amplification_window(kPanelDP1, kPanelDP2, kPanelDM);
    for (std::uint64_t k = kPanelDKMin; k <= kPanelDKMax; k += kPanelDKStep) {
        const CohortProfile profile{{{"group_1", kPanelDN, kPanelDP1}, {"group_2", kPanelDN, kPanelDP2}}};
        const CohortRisk risk = cohort_system_risk(profile, k, kPanelDM);
        const auto& g1 = risk.groups[0];
        const auto& g2 = risk.groups[1];
        const double ratio = disparity_ratio(kPanelDP1, kPanelDP2, k, kPanelDM);
        const double kd = static_cast<double>(k);
        t.add_row({k, g1.lambda, g2.lambda, g1.q, g2.q, std::log(ratio), ratio, g1.mass, g2.mass,
                   g2.share, risk.exact, kd > w.k_low && kd < w.k_high});
    }
    return t;
}

double first_crossing(std::span<const double> xs, std::span<const double> ys, double level) {
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (ys[i] >= level) {
            if (i == 0) return xs[0];
            const double f = (level - ys[i - 1]) / (ys[i] - ys[i - 1]);
            return xs[i - 1] + f * (xs[i] - xs[i - 1]);
        }
    }
    return NAN;
}

Json figure_panels(const std::filesystem::path& out_dir, std::uint64_t runs, std::uint64_t seed,
                   ExecPolicy policy) {
    if (runs < 1) throw DomainError("runs must be at least 1");
    const PanelA a = panel_a(runs, seed, policy);
    const std::pair<std::string, Table> panels[] = {
        {"panel_a.csv", a.table}, {"panel_b.csv", panel_b()}, {"panel_c.csv", panel_c()}, {"panel_d.csv", panel_d()}};

    Json manifest;
    manifest["scenario"] = "figures";
    manifest["kind"] = "figures";
    manifest["runs"] = runs;
    manifest["seed"] = seed;
    manifest["version"] = artifact_version();
    manifest["defaults"] = {
        {"panel_a", {{"p", kPanelAP}, {"m", kPanelAM}, {"n", kPanelAN}, {"k", {kPanelAKMin, kPanelAKMax, kPanelAKStep}}}},
        {"panel_b", {{"c", kPanelBC}, {"lambdas", kPanelBLambdas}, {"log10_n", {0.0, kPanelBLogMax, kPanelBLogStep}}}},
        {"panel_c", {{"k0", kPanelCModel.k0}, {"gamma", kPanelCModel.gamma}, {"p", kPanelCModel.p},
                     {"m", kPanelCM}, {"n", kPanelCPopulations}, {"t", {0.0, kPanelCTMax, kPanelCTStep}}}},
        {"panel_d", {{"p_1", kPanelDP1}, {"p_2", kPanelDP2}, {"n_each", kPanelDN}, {"m", kPanelDM},
                     {"k", {kPanelDKMin, kPanelDKMax, kPanelDKStep}}}}};
    Json outputs = Json::array();
    for (const auto& [name, table] : panels) {
        const std::string content = to_csv(table);
        write_text(out_dir / name, content);
        outputs.push_back({{"path", name}, {"format", "csv"}, {"sha256", sha256_hex(content)}, {"columns", table.columns}});
    }
    manifest["outputs"] = outputs;
    manifest["summary"] = {{"panel_a_mae_poisson", a.mae_poisson}, {"panel_a_mae_binomial", a.mae_binomial}};
    write_text(out_dir / "figures.manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

}  // namespace screening::shell
