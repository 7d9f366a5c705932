#include "screening/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>

#include "screening/error.hpp"
#include "screening/tailcore.hpp"

namespace screening {

namespace {

constexpr double kSnapToOne = 1.0 - 1e-15;

double snap(double prob) { return prob > kSnapToOne ? 1.0 : prob; }

double phase_population(double lambda, double alpha, double exponent, double cap) {
    const double log_n = 0.5 * std::log(lambda) + alpha * exponent;
    if (log_n > std::log(cap)) {
        throw RangeError("phase-scan population exceeds supported range (lambda=" +
                         std::to_string(lambda) + ", alpha=" + std::to_string(alpha) + ")");
    }
    return std::max(1.0, std::round(std::exp(log_n)));
}

PhasePoint phase_point(double lambda, double c, double alpha, double cap) {
    PhasePoint pt;
    pt.lambda = lambda;
    pt.alpha = alpha;
    pt.m = threshold_from_ratio(c, lambda);
    pt.n = phase_population(lambda, alpha, lambda * rate_function(c), cap);
    pt.risk = system_risk_at_scale(lambda, pt.m, pt.n);
    return pt;
}

}  // namespace

ScreeningConfig ScreeningConfig::with_threshold(std::uint64_t k, double p, std::uint64_t m,
                                                std::uint64_t n) {
    ScreeningConfig config{k, p, m, n};
    config.validate();
    return config;
}

ScreeningConfig ScreeningConfig::with_ratio(std::uint64_t k, double p, double c,
                                            std::uint64_t n) {
    if (!(c > 1.0)) throw DomainError("threshold ratio c must exceed 1");
    ScreeningConfig config{k, p, 1, n};
    config.validate();
    config.m = threshold_from_ratio(c, config.lambda());
    return config;
}

void ScreeningConfig::validate() const {
    if (k == 0) throw DomainError("attribute count k must be positive");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("match probability p must lie in (0, 1)");
    if (m == 0) throw DomainError("threshold m must be positive");
    if (n == 0) throw DomainError("population n must be positive");
}

double at_least_one_from_log_complement(double log_complement) {
    return snap(-std::expm1(log_complement));
}

SystemRisk system_risk_at_scale(double lambda, std::uint64_t m, double n) {
    if (!(n >= 1.0) || !std::isfinite(n)) throw RangeError("population must be finite and >= 1");
    const TailEstimate tail = tail_estimate(lambda, m);

    SystemRisk risk;
    risk.per_person_q = tail.exact;
    risk.expected_false_alerts = n * tail.exact;
    risk.log_complement = n * std::log1p(-tail.exact);
    risk.prob_at_least_one = at_least_one_from_log_complement(risk.log_complement);
    risk.bounds_apply = tail.bounds_apply;
    if (tail.bounds_apply) {
        risk.lower_bound = snap(-std::expm1(-n * tail.robbins_lower));
        const double qu = tail.chernoff_upper;
        risk.upper_bound = qu >= 1.0 ? 1.0 : snap(-std::expm1(-n * qu / (1.0 - qu)));
    }
    return risk;
}

SystemRisk system_risk(const ScreeningConfig& config) {
    config.validate();
    return system_risk_at_scale(config.lambda(), config.m, static_cast<double>(config.n));
}

CriticalPopulation critical_population(double lambda, double c) {
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    if (!(c > 1.0)) throw DomainError("critical population needs c > 1");
    CriticalPopulation out;
    out.exponent = lambda * rate_function(c);
    const double cl = c * lambda;
    out.refined = std::sqrt(2.0 * std::numbers::pi * cl) * std::exp(out.exponent + 1.0 / (12.0 * cl));
    out.sqrt_scale = std::sqrt(lambda) * std::exp(out.exponent);
    out.rough_scale = std::exp(out.exponent);
    if (!std::isfinite(out.refined)) throw RangeError("critical population overflows double");
    return out;
}

std::vector<PhasePoint> phase_scan(std::span<const double> lambdas, double c, double alpha,
                                   double max_population) {
    const double alphas[] = {alpha};
    return phase_grid(lambdas, c, alphas, max_population);
}

std::vector<PhasePoint> phase_grid(std::span<const double> lambdas, double c,
                                   std::span<const double> alphas, double max_population) {
    if (!(c > 1.0)) throw DomainError("phase scan needs c > 1");
    for (double a : alphas) {
        if (!(a > 0.0)) throw DomainError("phase scan needs alpha > 0");
    }
    for (double l : lambdas) {
        if (!(l > 0.0)) throw DomainError("phase scan needs lambda > 0");
    }

    const std::size_t na = alphas.size();
    const std::size_t total = lambdas.size() * na;
    std::vector<PhasePoint> out(total);

    // Exceptions may not cross the parallel region; record the first failure
    // by index and rethrow after the join.
    std::vector<std::exception_ptr> errors(total);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < total; ++i) {
        try {
            out[i] = phase_point(lambdas[i / na], c, alphas[i % na], max_population);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

double transition_width(double lambda, double c, double low, double high) {
    if (!(low > 0.0 && low < high && high < 1.0)) throw DomainError("need 0 < low < high < 1");
    const double exponent = lambda * rate_function(c);
    const std::uint64_t m = threshold_from_ratio(c, lambda);
    const double cap = kMaxPhasePopulation;
    const auto prob = [&](double alpha) {
        const double n = phase_population(lambda, alpha, exponent, cap);
        return system_risk_at_scale(lambda, m, n).prob_at_least_one;
    };

    double alpha_max = 1.0;
    while (prob(alpha_max) < high) {
        alpha_max *= 1.5;
        if (0.5 * std::log(lambda) + alpha_max * exponent > std::log(cap)) {
            throw RangeError("transition band lies beyond the supported population range");
        }
    }
    const auto crossing = [&](double level) {
        double lo = 0.0;
        double hi = alpha_max;
        if (prob(lo) >= level) return lo;
        for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
            const double mid = 0.5 * (lo + hi);
            (prob(mid) < level ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    return crossing(high) - crossing(low);
}

}  // namespace screening
