#pragma once

// System-level false-alert probability for n independent innocents screened
// with the rule "at least m of k attributes match".

#include <cstdint>
#include <span>
#include <vector>

namespace screening {

struct ScreeningConfig {
    std::uint64_t k = 0;  // attribute count
    double p = 0.0;       // per-attribute chance match probability
    std::uint64_t m = 0;  // alert threshold
    std::uint64_t n = 0;  // population

    static ScreeningConfig with_threshold(std::uint64_t k, double p, std::uint64_t m,
                                          std::uint64_t n);
    // m = ceil(c k p); requires c > 1.
    static ScreeningConfig with_ratio(std::uint64_t k, double p, double c, std::uint64_t n);

    double lambda() const noexcept { return static_cast<double>(k) * p; }
    void validate() const;
};

struct SystemRisk {
    double per_person_q = 0.0;
    double expected_false_alerts = 0.0;  // n q
    // 1 - (1-q)^n, reported as exactly 1 once it exceeds 1 - 1e-15; the
    // information survives in log_complement = n log1p(-q).
    double prob_at_least_one = 0.0;
    double log_complement = 0.0;
    double lower_bound = 0.0;  // Robbins tail bound pushed through 1 - e^{-nq}
    double upper_bound = 1.0;  // Chernoff tail bound pushed through 1 - e^{-nq/(1-q)}
    bool bounds_apply = false;  // m > lambda
};

SystemRisk system_risk(const ScreeningConfig& config);

// Same quantity with a real-valued population scale; used by scans where n
// is a scale rather than a head count.
SystemRisk system_risk_at_scale(double lambda, std::uint64_t m, double n);

// 1 - exp(log_complement) with the near-one snapping used by system_risk.
double at_least_one_from_log_complement(double log_complement);

struct CriticalPopulation {
    double refined = 0.0;     // sqrt(2 pi c lambda) exp(lambda D + 1/(12 c lambda))
    double sqrt_scale = 0.0;  // sqrt(lambda) exp(lambda D)
    double rough_scale = 0.0; // exp(lambda D)
    double exponent = 0.0;    // lambda D(c||1)
};

CriticalPopulation critical_population(double lambda, double c);

struct PhasePoint {
    double lambda = 0.0;
    double alpha = 0.0;
    double n = 0.0;  // round(sqrt(lambda) exp(alpha lambda D)), held as a real
    std::uint64_t m = 0;
    SystemRisk risk;
};

inline constexpr double kMaxPhasePopulation = 1e30;

// One point per lambda at population n = round(sqrt(lambda) e^{alpha lambda D}),
// m = ceil(c lambda). Results are ordered like the input.
std::vector<PhasePoint> phase_scan(std::span<const double> lambdas, double c, double alpha,
                                   double max_population = kMaxPhasePopulation);

// Cartesian product of lambdas x alphas, lambda-major, evaluated in parallel.
std::vector<PhasePoint> phase_grid(std::span<const double> lambdas, double c,
                                   std::span<const double> alphas,
                                   double max_population = kMaxPhasePopulation);

// Width in alpha of the band where the phase-scan probability lies in
// [low, high], located by bisection.
double transition_width(double lambda, double c, double low = 0.1, double high = 0.9);

}  // namespace screening
