#include "screening/cohorts.hpp"

#include <cmath>
#include <set>

#include "screening/error.hpp"
#include "screening/reliability.hpp"
#include "screening/tailcore.hpp"

namespace screening {

namespace {

void require_ordered_exposures(double p1, double p2) {
    if (!(p1 > 0.0 && p1 < 1.0 && p2 > 0.0 && p2 < 1.0)) {
        throw DomainError("exposure probabilities must lie in (0, 1)");
    }
    if (!(p1 < p2)) throw DomainError("disparity analysis needs p1 < p2");
}

}  // namespace

void CohortProfile::validate() const {
    if (groups.empty()) throw DomainError("cohort profile needs at least one group");
    std::set<std::string> seen;
    for (const auto& g : groups) {
        if (!seen.insert(g.label).second) throw DomainError("duplicate cohort label '" + g.label + "'");
        if (g.size == 0) throw DomainError("cohort '" + g.label + "' has zero size");
        if (!(g.p > 0.0 && g.p < 1.0)) throw DomainError("cohort '" + g.label + "' needs p in (0, 1)");
    }
}

CohortRisk cohort_system_risk(const CohortProfile& profile, std::uint64_t k, std::uint64_t m) {
    profile.validate();
    if (k == 0 || m == 0) throw DomainError("k and m must be positive");

    CohortRisk risk;
    risk.groups.reserve(profile.groups.size());
    for (const auto& g : profile.groups) {
        GroupRisk row;
        row.label = g.label;
        row.size = g.size;
        row.lambda = static_cast<double>(k) * g.p;
        row.q = poisson_tail(row.lambda, m);
        row.mass = static_cast<double>(g.size) * row.q;
        risk.log_complement += static_cast<double>(g.size) * std::log1p(-row.q);
        risk.total_mass += row.mass;
        risk.groups.push_back(std::move(row));
    }
    for (auto& row : risk.groups) {
        row.share = risk.total_mass > 0.0 ? row.mass / risk.total_mass : 0.0;
    }
    risk.exact = at_least_one_from_log_complement(risk.log_complement);
    risk.exponential_approx = at_least_one_from_log_complement(-risk.total_mass);
    return risk;
}

DominanceReport dominance_decomposition(const CohortProfile& profile, std::uint64_t k,
                                        std::uint64_t m) {
    const CohortRisk risk = cohort_system_risk(profile, k, m);
    DominanceReport out;
    for (std::size_t i = 0; i < risk.groups.size(); ++i) {
        if (risk.groups[i].mass > risk.groups[out.dominant_index].mass) out.dominant_index = i;
    }
    out.dominant_label = risk.groups[out.dominant_index].label;
    out.dominant_mass = risk.groups[out.dominant_index].mass;
    for (std::size_t i = 0; i < risk.groups.size(); ++i) {
        if (i != out.dominant_index) out.other_mass += risk.groups[i].mass;
    }
    out.main_term = -std::expm1(-out.dominant_mass);
    out.correction_bound = out.other_mass * std::exp(-out.dominant_mass);
    return out;
}

double disparity_ratio(double p1, double p2, std::uint64_t k, std::uint64_t m) {
    require_ordered_exposures(p1, p2);
    if (k == 0) throw DomainError("k must be positive");
    const double kd = static_cast<double>(k);
    return std::exp(log_poisson_tail(kd * p2, m) - log_poisson_tail(kd * p1, m));
}

AmplificationWindow amplification_window(double p1, double p2, std::uint64_t m) {
    require_ordered_exposures(p1, p2);
    if (m == 0) throw DomainError("threshold m must be positive");
    const double md = static_cast<double>(m);
    return {md / p2, md / p1};
}

}  // namespace screening
