#pragma once

// Correlation-corrected effective dimensionality. Adjusted exponents and
// critical populations are a design-effect heuristic: the rate is scaled by
// k_eff / k, which is not a large-deviation principle under dependence.

#include <cstdint>
#include <span>

namespace screening {

// DEFF = sum_{i != j} rho_ij / k, from per-row off-diagonal sums.
double design_effect(std::span<const double> off_diagonal_row_sums, std::uint64_t k);

// Exchangeable correlation rho: DEFF = (k - 1) rho.
double exchangeable_design_effect(std::uint64_t k, double rho);

// Var(Y) = k p (1 - p) (1 + DEFF).
double correlated_variance(std::uint64_t k, double p, double deff);

// Number of independent indicators whose mean has the same variance: k / (1 + DEFF).
double k_eff_from_design_effect(std::uint64_t k, double deff);

struct SpatialCorrelation {
    double area = 0.0;               // square metres
    double correlation_length = 0.0; // xi, metres
};

// A / (2 pi xi^2).
double k_eff_spatial(const SpatialCorrelation& corr);

// Bartlett-Wilks: k / (1 + 2 sum_{h=1}^{k-1} rho(h) (1 - h/k)); rho[h-1] is
// the lag-h correlation, missing lags are zero. Returns k when the
// denominator is <= 1 (net negative correlation).
double k_eff_temporal(std::uint64_t k, std::span<const double> lag_correlations);

struct TemporalEstimate {
    double k_eff = 0.0;         // full Bartlett-Wilks sum with rho(h) = e^{-h/tau}
    double geometric_form = 0.0;// k (1 - e^{-1/tau}) / (1 + e^{-1/tau})
    double half_tau_form = 0.0; // k / (2 tau)
};

TemporalEstimate k_eff_temporal_exponential(std::uint64_t k, double tau);

struct CorrelationAdjusted {
    double k_eff = 0.0;
    double reduction_factor = 0.0;     // k_eff / k
    double exponent_independent = 0.0; // k p D(c||1)
    double adjusted_exponent = 0.0;    // k_eff p D(c||1)
    double adjusted_tail_lower = 0.0;  // exp(-adjusted_exponent), heuristic
    double n_crit_independent = 0.0;   // sqrt(k p) exp(k p D)
    double adjusted_n_crit = 0.0;      // sqrt(k p) exp(adjusted_exponent), heuristic
    bool heuristic = true;
};

// With nonnegative_correlation set, k_eff > k is rejected.
CorrelationAdjusted adjusted_limits(std::uint64_t k, double p, double c, double k_eff,
                                    bool nonnegative_correlation = true);

}  // namespace screening
