#include "screening/special.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace screening::special {

namespace {

constexpr double kLog2Pi = 1.837877066409345483560659472811;

// stirling_error(n) for n = 0..15.
constexpr std::array<double, 16> kSmallStirling = {
    0.0,
    0.08106146679532725821967026,
    0.04134069595540929409382208,
    0.02767792568499833914878929,
    0.02079067210376509311152277,
    0.01664469118982119216319487,
    0.01387612882307074799874573,
    0.01189670994589177009505572,
    0.01041126526197209649747857,
    0.009255462182712732917728637,
    0.008330563433362871256469319,
    0.007573675487951840794972024,
    0.006942840107209529865664153,
    0.006408994188004207068439631,
    0.005951370112758847735624416,
    0.00555473355196280137103869,
};

}  // namespace

double stirling_error(std::uint64_t n) {
    if (n < kSmallStirling.size()) return kSmallStirling[n];

    constexpr double s0 = 1.0 / 12.0;
    constexpr double s1 = 1.0 / 360.0;
    constexpr double s2 = 1.0 / 1260.0;
    constexpr double s3 = 1.0 / 1680.0;
    constexpr double s4 = 1.0 / 1188.0;
    constexpr double s5 = 691.0 / 360360.0;

    const double x = static_cast<double>(n);
    const double xx = x * x;
    if (n > 500) return (s0 - s1 / xx) / x;
    if (n > 80) return (s0 - (s1 - s2 / xx) / xx) / x;
    if (n > 35) return (s0 - (s1 - (s2 - s3 / xx) / xx) / xx) / x;
    return (s0 - (s1 - (s2 - (s3 - (s4 - s5 / xx) / xx) / xx) / xx) / xx) / x;
}

double deviance_term(double x, double mean) {
    if (std::abs(x - mean) < 0.1 * (x + mean)) {
        double v = (x - mean) / (x + mean);
        double s = (x - mean) * v;
        double ej = 2.0 * x * v;
        const double v2 = v * v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v2;
            const double next = s + ej / (2 * j + 1);
            if (next == s) return next;
            s = next;
        }
        return s;
    }
    return x * std::log(x / mean) + mean - x;
}

double log_poisson_pmf(std::uint64_t j, double lambda) {
    if (j == 0) return -lambda;
    const double x = static_cast<double>(j);
    return -stirling_error(j) - deviance_term(x, lambda) - 0.5 * (kLog2Pi + std::log(x));
}

double poisson_pmf(std::uint64_t j, double lambda) { return std::exp(log_poisson_pmf(j, lambda)); }

double log_binomial_pmf(std::uint64_t j, std::uint64_t k, double p) {
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (j > k) return neg_inf;
    const double q = 1.0 - p;
    if (p == 0.0) return j == 0 ? 0.0 : neg_inf;
    if (q == 0.0) return j == k ? 0.0 : neg_inf;

    const double n = static_cast<double>(k);
    if (j == 0) {
        if (k == 0) return 0.0;
        return p < 0.1 ? -deviance_term(n, n * q) - n * p : n * std::log(q);
    }
    if (j == k) {
        return q < 0.1 ? -deviance_term(n, n * p) - n * q : n * std::log(p);
    }
    const double x = static_cast<double>(j);
    const double lc = stirling_error(k) - stirling_error(j) - stirling_error(k - j) -
                      deviance_term(x, n * p) - deviance_term(n - x, n * q);
    const double lf = kLog2Pi + std::log(x) + std::log1p(-x / n);
    return lc - 0.5 * lf;
}

double binomial_pmf(std::uint64_t j, std::uint64_t k, double p) {
    return std::exp(log_binomial_pmf(j, k, p));
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

}  // namespace screening::special
