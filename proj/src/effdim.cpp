#include "screening/effdim.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "screening/error.hpp"
#include "screening/special.hpp"
#include "screening/tailcore.hpp"

namespace screening {

double design_effect(std::span<const double> off_diagonal_row_sums, std::uint64_t k) {
    if (k == 0) throw DomainError("k must be positive");
    if (off_diagonal_row_sums.size() != k) throw DomainError("need one row sum per indicator");
    special::CompensatedSum total;
    for (double s : off_diagonal_row_sums) total.add(s);
    return total.value() / static_cast<double>(k);
}

double exchangeable_design_effect(std::uint64_t k, double rho) {
    if (k == 0) throw DomainError("k must be positive");
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("correlation must lie in [-1, 1]");
    return static_cast<double>(k - 1) * rho;
}

double correlated_variance(std::uint64_t k, double p, double deff) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
    return static_cast<double>(k) * p * (1.0 - p) * (1.0 + deff);
}

double k_eff_from_design_effect(std::uint64_t k, double deff) {
    if (!(deff > -1.0)) throw DomainError("design effect must exceed -1");
    return static_cast<double>(k) / (1.0 + deff);
}

double k_eff_spatial(const SpatialCorrelation& corr) {
    if (!(corr.area > 0.0)) throw DomainError("area must be positive");
    if (!(corr.correlation_length > 0.0)) throw DomainError("correlation length must be positive");
    return corr.area / (2.0 * std::numbers::pi * corr.correlation_length * corr.correlation_length);
}

double k_eff_temporal(std::uint64_t k, std::span<const double> lag_correlations) {
    if (k == 0) throw DomainError("k must be positive");
    const double kd = static_cast<double>(k);
    special::CompensatedSum sum;
    for (std::size_t i = 0; i < lag_correlations.size(); ++i) {
        const double rho = lag_correlations[i];
        if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("lag correlations must lie in [-1, 1]");
        const double h = static_cast<double>(i + 1);
        if (h >= kd) break;
        sum.add(rho * (1.0 - h / kd));
    }
    const double denom = 1.0 + 2.0 * sum.value();
    return denom <= 1.0 ? kd : kd / denom;
}

TemporalEstimate k_eff_temporal_exponential(std::uint64_t k, double tau) {
    if (k == 0) throw DomainError("k must be positive");
    if (!(tau > 0.0)) throw DomainError("correlation time tau must be positive");
    std::vector<double> rho;
    rho.reserve(k > 0 ? k - 1 : 0);
    for (std::uint64_t h = 1; h < k; ++h) rho.push_back(std::exp(-static_cast<double>(h) / tau));

    const double kd = static_cast<double>(k);
    const double decay = std::exp(-1.0 / tau);
    return {k_eff_temporal(k, rho), kd * (1.0 - decay) / (1.0 + decay), kd / (2.0 * tau)};
}

CorrelationAdjusted adjusted_limits(std::uint64_t k, double p, double c, double k_eff,
                                    bool nonnegative_correlation) {
    if (k == 0) throw DomainError("k must be positive");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
    if (!(c > 1.0)) throw DomainError("threshold ratio c must exceed 1");
    if (!(k_eff > 0.0)) throw DomainError("k_eff must be positive");
    const double kd = static_cast<double>(k);
    if (nonnegative_correlation && k_eff > kd) {
        throw DomainError("k_eff exceeds k although correlations are nonnegative");
    }

    const double rate = rate_function(c);
    const double lambda = kd * p;
    CorrelationAdjusted out;
    out.k_eff = k_eff;
    out.reduction_factor = k_eff / kd;
    out.exponent_independent = lambda * rate;
    out.adjusted_exponent = k_eff * p * rate;
    out.adjusted_tail_lower = std::exp(-out.adjusted_exponent);
    out.n_crit_independent = std::sqrt(lambda) * std::exp(out.exponent_independent);
    out.adjusted_n_crit = std::sqrt(lambda) * std::exp(out.adjusted_exponent);
    return out;
}

}  // namespace screening
