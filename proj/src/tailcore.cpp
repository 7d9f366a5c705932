#include "screening/tailcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "screening/error.hpp"
#include "screening/special.hpp"

namespace screening {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 10'000'000;

void require_positive_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("lambda must be positive and finite, got " + std::to_string(lambda));
    }
}

void require_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("probability must lie in [0, 1], got " + std::to_string(p));
    }
}

// log P(m, lambda) by the power series, lambda < m + 1.
double log_lower_gamma_series(double lambda, std::uint64_t m) {
    const double a = static_cast<double>(m);
    double term = 1.0;
    special::CompensatedSum sum;
    sum.add(1.0);
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= lambda / (a + n);
        sum.add(term);
        if (term < sum.value() * kEpsilon * 0.5) break;
    }
    return special::log_poisson_pmf(m, lambda) + std::log(sum.value());
}

// Q(m, lambda) = Pr(Poisson(lambda) < m) by the Lentz continued fraction,
// lambda >= m + 1.
double upper_gamma_fraction(double lambda, std::uint64_t m) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
    const double a = static_cast<double>(m);
    double b = lambda + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon) break;
    }
    // lambda^m e^-lambda / Gamma(m) = m * pmf(m).
    return std::exp(std::log(a) + special::log_poisson_pmf(m, lambda)) * h;
}

}  // namespace

double rate_function(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw DomainError("rate function needs c > 0, got " + std::to_string(c));
    }
    return c * std::log(c) - (c - 1.0);
}

double log_poisson_tail(double lambda, std::uint64_t m) {
    require_positive_lambda(lambda);
    if (m == 0) return 0.0;
    if (lambda < static_cast<double>(m) + 1.0) return log_lower_gamma_series(lambda, m);
    return std::log1p(-upper_gamma_fraction(lambda, m));
}

double poisson_tail(double lambda, std::uint64_t m) {
    return std::exp(log_poisson_tail(lambda, m));
}

double binomial_tail(std::uint64_t k, double p, std::uint64_t m) {
    require_probability(p);
    if (m == 0) return 1.0;
    if (m > k) return 0.0;
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;

    const double mean = static_cast<double>(k) * p;
    special::CompensatedSum sum;
    if (static_cast<double>(m) > mean) {
        for (std::uint64_t j = m; j <= k; ++j) {
            const double term = special::binomial_pmf(j, k, p);
            sum.add(term);
            if (static_cast<double>(j) > mean && term < sum.value() * kEpsilon * 1e-3) break;
        }
        return std::min(1.0, sum.value());
    }
    for (std::uint64_t j = 0; j < m; ++j) sum.add(special::binomial_pmf(j, k, p));
    return std::max(0.0, 1.0 - sum.value());
}

double chernoff_upper(double lambda, double m) {
    require_positive_lambda(lambda);
    if (!(m > lambda)) {
        throw DomainError("Chernoff bound needs m > lambda (upper tail only)");
    }
    return std::min(1.0, std::exp(-lambda * rate_function(m / lambda)));
}

double log_robbins_lower(double lambda, double c) {
    require_positive_lambda(lambda);
    if (!(c > 1.0)) throw DomainError("Robbins bound needs c > 1, got " + std::to_string(c));
    const double cl = c * lambda;
    return -0.5 * std::log(2.0 * std::numbers::pi * cl) - lambda * rate_function(c) -
           1.0 / (12.0 * cl);
}

double robbins_lower(double lambda, double c) {
    return std::min(1.0, std::exp(log_robbins_lower(lambda, c)));
}

TailEstimate tail_estimate(double lambda, std::uint64_t m) {
    TailEstimate est;
    est.lambda = lambda;
    est.m = m;
    est.log_exact = log_poisson_tail(lambda, m);
    est.exact = std::exp(est.log_exact);
    const double md = static_cast<double>(m);
    if (md > lambda) {
        est.bounds_apply = true;
        est.exponent = lambda * rate_function(md / lambda);
        est.chernoff_upper = std::min(1.0, std::exp(-est.exponent));
        est.robbins_lower = robbins_lower(lambda, md / lambda);
    }
    return est;
}

std::uint64_t threshold_from_ratio(double c, double lambda) {
    require_positive_lambda(lambda);
    if (!(c > 0.0)) throw DomainError("threshold ratio must be positive");
    const double x = c * lambda;
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 8.0 * kEpsilon * std::max(1.0, x)) {
        return static_cast<std::uint64_t>(nearest);
    }
    return static_cast<std::uint64_t>(std::ceil(x));
}

double overlap_probability(const OverlapInput& input) {
    const auto v = input.domain_size;
    const auto t = input.person_list;
    const auto s = input.suspicious_list;
    if (t > v || s > v) throw DomainError("list sizes must not exceed the domain size");
    if (t == 0 || s == 0) return 0.0;
    if (s > v - t) return 1.0;

    // log prod_{l < s} (1 - t / (V - l))
    double log_miss = 0.0;
    for (std::uint64_t l = 0; l < s; ++l) {
        log_miss += std::log1p(-static_cast<double>(t) / static_cast<double>(v - l));
    }
    return -std::expm1(log_miss);
}

double lecam_bound(std::uint64_t k, double p) {
    require_probability(p);
    return 2.0 * static_cast<double>(k) * p * p;
}

}  // namespace screening
