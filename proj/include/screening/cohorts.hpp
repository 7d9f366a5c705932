#pragma once

// Heterogeneous populations: groups share the attribute set and threshold but
// differ in per-attribute exposure p_g.

#include <cstdint>
#include <string>
#include <vector>

namespace screening {

struct CohortGroup {
    std::string label;
    std::uint64_t size = 0;  // n_g
    double p = 0.0;          // p_g
};

struct CohortProfile {
    std::vector<CohortGroup> groups;

    // At least one group, unique labels, sizes > 0, p_g in (0, 1).
    void validate() const;
};

struct GroupRisk {
    std::string label;
    std::uint64_t size = 0;
    double lambda = 0.0;  // k p_g
    double q = 0.0;
    double mass = 0.0;    // n_g q_g
    double share = 0.0;   // mass / total mass
};

struct CohortRisk {
    double exact = 0.0;               // 1 - prod (1 - q_g)^{n_g}
    double log_complement = 0.0;      // sum n_g log1p(-q_g)
    double exponential_approx = 0.0;  // 1 - exp(-sum n_g q_g)
    double total_mass = 0.0;
    std::vector<GroupRisk> groups;    // input order
};

CohortRisk cohort_system_risk(const CohortProfile& profile, std::uint64_t k, std::uint64_t m);

struct DominanceReport {
    std::string dominant_label;
    std::size_t dominant_index = 0;
    double dominant_mass = 0.0;     // n_g* q_g*
    double other_mass = 0.0;        // sum over g != g*
    double main_term = 0.0;         // 1 - exp(-dominant_mass)
    double correction_bound = 0.0;  // other_mass exp(-dominant_mass)
};

// g* = argmax n_g q_g, first in input order on ties.
DominanceReport dominance_decomposition(const CohortProfile& profile, std::uint64_t k,
                                        std::uint64_t m);

// q(k p2, m) / q(k p1, m) evaluated through logs; requires p1 < p2.
double disparity_ratio(double p1, double p2, std::uint64_t k, std::uint64_t m);

struct AmplificationWindow {
    double k_low = 0.0;   // m / p2: the more exposed group reaches lambda = m
    double k_high = 0.0;  // m / p1
};

AmplificationWindow amplification_window(double p1, double p2, std::uint64_t m);

}  // namespace screening
