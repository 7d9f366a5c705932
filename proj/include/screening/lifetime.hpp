#pragma once

// Operating lifetime of a fixed-threshold screen while the attribute count
// grows as k(t) = k0 gamma^t.

#include <cstdint>
#include <span>
#include <vector>

namespace screening {

struct GrowthModel {
    double k0 = 0.0;     // attributes at t = 0, >= 1
    double gamma = 0.0;  // growth factor per time unit, > 1
    double p = 0.0;      // per-attribute match probability in (0, 1)

    void validate() const;
};

// k0 p gamma^t.
double lambda_at(const GrowthModel& model, double t);

// log(m / (k0 p)) / log(gamma), or 0 when the threshold is already reached.
double critical_time_analytic(const GrowthModel& model, std::uint64_t m);

enum class RootStatus {
    converged,
    failed_at_deployment,  // n q(0) already meets the criterion
    unreachable,           // n q(t) stays below the criterion across the bracket
};

const char* to_string(RootStatus status);

struct LifetimeReport {
    double t_star_analytic = 0.0;
    double t_star_corrected = 0.0;     // +inf when unreachable
    double lambda_at_failure = 0.0;    // NaN when unreachable
    double correction_magnitude = 0.0; // t_star_analytic - t_star_corrected
    double closed_form_lambda = 0.0;   // m - sqrt(2 m ln n), for comparison only
    double criterion_level = 1.0;
    double residual = 0.0;             // n q(t*) - criterion_level at the root
    RootStatus status = RootStatus::converged;
};

// Solves n q(lambda(t), m) = criterion_level by bisection on
// [0, t_analytic + 10 / log(gamma)] to 1e-12 in t.
LifetimeReport critical_time_corrected(const GrowthModel& model, std::uint64_t m,
                                       std::uint64_t n, double criterion_level = 1.0);

struct LifetimePoint {
    double t = 0.0;
    double lambda = 0.0;
    double q = 0.0;
    double expected_false_alerts = 0.0;
    double prob_at_least_one = 0.0;
};

std::vector<LifetimePoint> lifetime_series(const GrowthModel& model, std::uint64_t m,
                                           std::uint64_t n, std::span<const double> times);

}  // namespace screening
