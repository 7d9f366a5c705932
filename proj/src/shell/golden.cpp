#include "screening/shell/golden.hpp"

#include <cmath>

#include "screening/cohorts.hpp"
#include "screening/effdim.hpp"
#include "screening/error.hpp"
#include "screening/lifetime.hpp"
#include "screening/posterior.hpp"
#include "screening/reliability.hpp"
#include "screening/tailcore.hpp"

namespace screening::shell {

namespace {

struct Builder {
    double scale;
    std::vector<GoldenRow> rows;

    void add(std::string id, std::string quantity, double computed, double target, double tol, bool relative) {
        GoldenRow r{std::move(id), std::move(quantity), computed, target, tol, relative, false};
        const double allowed = tol * scale * (relative ? std::abs(target) : 1.0);
        r.pass = std::isfinite(computed) && std::abs(computed - target) <= allowed;
        rows.push_back(std::move(r));
    }
};

}  // namespace

bool GoldenReport::all_pass() const noexcept {
    for (const auto& r : rows) {
        if (!r.pass) return false;
    }
    return !rows.empty();
}

Table GoldenReport::table() const {
    Table t;
    t.columns = {"id", "quantity", "computed", "target", "tolerance", "tolerance_kind", "scaled_tolerance", "pass"};
    t.notes.push_back("tolerance_scale=" + format_double(tolerance_scale));
    for (const auto& r : rows) {
        t.add_row({r.id, r.quantity, r.computed, r.target, r.tolerance,
                   std::string(r.relative ? "relative" : "absolute"), r.tolerance * tolerance_scale, r.pass});
    }
    return t;
}

GoldenReport reference_examples(double tolerance_scale) {
    if (!(tolerance_scale >= 0.0)) throw DomainError("tolerance scale must be nonnegative");
    Builder b{tolerance_scale, {}};

    // Single-screen headline: k = 1000, p = 0.005, m = 15, n = 10^6.
    const auto headline = system_risk(ScreeningConfig::with_threshold(1000, 0.005, 15, 1000000));
    b.add("intro_q", "Pr(Pois(5) >= 15)", poisson_tail(5.0, 15), 2.26e-4, 0.01, true);
    b.add("intro_expected_alerts", "n q", headline.expected_false_alerts, 226.0, 1.0, false);
    b.add("intro_log_complement", "n log(1 - q)", headline.log_complement, -226.0, 1.0, false);
    b.add("intro_log10_no_alert", "log10 Pr(no alert)", headline.log_complement / std::log(10.0),
          std::log10(7e-99), 0.2, false);
    b.add("intro_prob_reported", "Pr(at least one alert)", headline.prob_at_least_one, 1.0, 0.0, false);

    // Lifetime under k(t) = 100 gamma^t, p = 0.01.
    const GrowthModel g15{100.0, 1.5, 0.01}, g20{100.0, 2.0, 0.01};
    b.add("lifetime_m3", "T* (m=3, gamma=1.5)", critical_time_analytic(g15, 3), 2.7, 0.05, false);
    b.add("lifetime_m5", "T* (m=5, gamma=1.5)", critical_time_analytic(g15, 5), 4.0, 0.05, false);
    b.add("lifetime_m10", "T* (m=10, gamma=1.5)", critical_time_analytic(g15, 10), 5.7, 0.05, false);
    b.add("lifetime_gamma2", "T* (m=5, gamma=2)", critical_time_analytic(g20, 5), 2.3, 0.05, false);

    // Two neighbourhoods of 10^5 people, k = 100, m = 3.
    const CohortProfile hoods{{{"A", 100000, 0.005}, {"B", 100000, 0.02}}};
    const CohortRisk cr = cohort_system_risk(hoods, 100, 3);
    b.add("cohort_qA", "q_A", cr.groups[0].q, 0.014, 0.001, false);
    b.add("cohort_qB", "q_B", cr.groups[1].q, 0.323, 0.001, false);
    b.add("cohort_alerts_A", "n_A q_A", cr.groups[0].mass, 1400.0, 0.01, true);
    b.add("cohort_alerts_B", "n_B q_B", cr.groups[1].mass, 32300.0, 0.01, true);
    b.add("cohort_ratio", "q_B / q_A", disparity_ratio(0.005, 0.02, 100, 3), 23.0, 0.05, true);
    b.add("cohort_dominant_B", "dominant group is B",
          dominance_decomposition(hoods, 100, 3).dominant_label == "B" ? 1.0 : 0.0, 1.0, 0.0, false);

    // Forensic database search.
    const RegimeVerdict dna = classify_regime({1.0, 1.0, 0.5, 1e-12, 1000000});
    b.add("dna_nq", "n q (DNA search)", dna.nq, 1e-6, 0.01, true);
    b.add("dna_evidential", "DNA regime is evidential", dna.regime == Regime::evidential ? 1.0 : 0.0, 1.0, 0.0, false);

    // Spatial correlation: A = 10^8 m^2, xi = 500 m, k = 10^4, p = 0.005, c = 1.5.
    const double k_sp = k_eff_spatial({1e8, 500.0});
    const auto sp = adjusted_limits(10000, 0.005, 1.5, k_sp);
    b.add("spatial_k_eff", "k_eff (spatial)", k_sp, 64.0, 0.01, true);
    b.add("spatial_exponent", "adjusted exponent (spatial)", sp.adjusted_exponent, 0.0345, 0.02, true);
    b.add("spatial_n_crit_indep", "n_crit (lambda=50, c=1.5)", critical_population(50.0, 1.5).sqrt_scale,
          1560.0, 0.05, true);
    b.add("spatial_n_crit_corr", "adjusted n_crit (spatial)", sp.adjusted_n_crit, 7.0, 0.10, true);

    // Temporal correlation: k = 365 days, tau = 30, p = 0.02, c = 1.644.
    const auto te = k_eff_temporal_exponential(365, 30.0);
    const auto tp = adjusted_limits(365, 0.02, 1.644, te.half_tau_form);
    b.add("temporal_k_eff", "k_eff = k / (2 tau)", te.half_tau_form, 6.0, 0.1, false);
    b.add("temporal_exponent", "adjusted exponent (temporal)", tp.adjusted_exponent, 0.021, 0.02, true);
    b.add("temporal_n_crit_indep", "n_crit (lambda=7.3, c=1.644)", critical_population(7.3, 1.644).sqrt_scale,
          9.5, 0.05, true);
    b.add("temporal_n_crit_corr", "adjusted n_crit (temporal)", tp.adjusted_n_crit, 2.8, 0.10, true);

    return {std::move(b.rows), tolerance_scale};
}

bool write_reference_examples(const std::filesystem::path& out, Format format, double tolerance_scale) {
    const GoldenReport report = reference_examples(tolerance_scale);
    write_text(out, render(report.table(), format));
    return report.all_pass();
}

}  // namespace screening::shell
