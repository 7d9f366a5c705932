#include "screening/lifetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "screening/error.hpp"
#include "screening/reliability.hpp"
#include "screening/tailcore.hpp"

namespace screening {

void GrowthModel::validate() const {
    if (!(k0 >= 1.0) || !std::isfinite(k0)) throw DomainError("k0 must be >= 1");
    if (!(gamma > 1.0) || !std::isfinite(gamma)) throw DomainError("growth factor gamma must exceed 1");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("match probability p must lie in (0, 1)");
}

double lambda_at(const GrowthModel& model, double t) {
    model.validate();
    if (!(t >= 0.0)) throw DomainError("time must be nonnegative, got " + std::to_string(t));
    const double log_lambda = std::log(model.k0 * model.p) + t * std::log(model.gamma);
    if (log_lambda > std::log(std::numeric_limits<double>::max())) {
        throw RangeError("lambda(t) overflows at t = " + std::to_string(t));
    }
    return std::exp(log_lambda);
}

double critical_time_analytic(const GrowthModel& model, std::uint64_t m) {
    model.validate();
    const double lambda0 = model.k0 * model.p;
    const double md = static_cast<double>(m);
    if (md <= lambda0) return 0.0;
    return std::log(md / lambda0) / std::log(model.gamma);
}

const char* to_string(RootStatus status) {
    switch (status) {
        case RootStatus::converged: return "converged";
        case RootStatus::failed_at_deployment: return "failed_at_deployment";
        case RootStatus::unreachable: return "unreachable";
    }
    return "unknown";
}

LifetimeReport critical_time_corrected(const GrowthModel& model, std::uint64_t m,
                                       std::uint64_t n, double criterion_level) {
    model.validate();
    if (m == 0) throw DomainError("threshold m must be positive");
    if (n == 0) throw DomainError("population n must be positive");
    if (!(criterion_level > 0.0)) throw DomainError("criterion level must be positive");

    LifetimeReport report;
    report.criterion_level = criterion_level;
    report.t_star_analytic = critical_time_analytic(model, m);
    const double md = static_cast<double>(m);
    const double log_n = std::log(static_cast<double>(n));
    report.closed_form_lambda = md - std::sqrt(2.0 * md * log_n);

    const double log_level = std::log(criterion_level);
    const auto excess = [&](double t) {
        return log_n + log_poisson_tail(lambda_at(model, t), m) - log_level;
    };
    const auto finish = [&](double t) {
        report.t_star_corrected = t;
        report.lambda_at_failure = lambda_at(model, t);
        report.correction_magnitude = report.t_star_analytic - t;
        report.residual = static_cast<double>(n) * poisson_tail(report.lambda_at_failure, m) -
                          criterion_level;
        return report;
    };

    const auto unreachable = [&] {
        report.status = RootStatus::unreachable;
        report.t_star_corrected = std::numeric_limits<double>::infinity();
        report.lambda_at_failure = std::numeric_limits<double>::quiet_NaN();
        report.correction_magnitude = std::numeric_limits<double>::quiet_NaN();
        report.residual = std::numeric_limits<double>::quiet_NaN();
        return report;
    };
    // q < 1 for every finite lambda, so n q never reaches a level >= n; deep
    // in the bracket q rounds to 1 and would fake a root.
    if (static_cast<double>(n) <= criterion_level) return unreachable();

    if (excess(0.0) >= 0.0) {
        report.status = RootStatus::failed_at_deployment;
        return finish(0.0);
    }

    double lo = 0.0;
    double hi = report.t_star_analytic + 10.0 / std::log(model.gamma);
    if (excess(hi) < 0.0) return unreachable();
    for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    report.status = RootStatus::converged;
    return finish(0.5 * (lo + hi));
}

std::vector<LifetimePoint> lifetime_series(const GrowthModel& model, std::uint64_t m,
                                           std::uint64_t n, std::span<const double> times) {
    model.validate();
    if (m == 0 || n == 0) throw DomainError("threshold and population must be positive");
    std::vector<LifetimePoint> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        LifetimePoint& pt = out[i];
        pt.t = times[i];
        pt.lambda = lambda_at(model, pt.t);
        const SystemRisk risk = system_risk_at_scale(pt.lambda, m, static_cast<double>(n));
        pt.q = risk.per_person_q;
        pt.expected_false_alerts = risk.expected_false_alerts;
        pt.prob_at_least_one = risk.prob_at_least_one;
    }
    return out;
}

}  // namespace screening
