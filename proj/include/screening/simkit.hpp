#pragma once

// Seeded Monte Carlo checks of the analytic quantities. Every trial owns a
// Philox stream keyed by (seed, kernel tag, trial index), and hit counts are
// reduced as integers, so results do not depend on thread count.

#include <cstdint>
#include <optional>
#include <string>

#include "screening/reliability.hpp"

namespace screening {

enum class SimMode { binomial_exact, poisson_approx, copula_correlated };
enum class ExecPolicy { serial, parallel };

const char* to_string(SimMode mode) noexcept;
SimMode sim_mode_from_string(const std::string& name);

struct CorrelationSpec {
    enum class Kind { exchangeable, ar1 };
    Kind kind = Kind::exchangeable;
    double rho = 0.0;  // latent normal correlation (lag-1 coefficient for ar1)
};

struct SimPlan {
    ScreeningConfig config;
    std::uint64_t runs = 0;
    std::uint64_t seed = 0;
    SimMode mode = SimMode::binomial_exact;
    std::optional<CorrelationSpec> correlation;
    // System simulation draws one Bernoulli(1 - (1-q)^n) per trial instead of
    // simulating individuals. Reports carry the flag.
    bool analytic_composite = false;

    void validate() const;
};

struct SimReport {
    double estimate = 0.0;
    double std_error = 0.0;  // sqrt(estimate (1 - estimate) / runs)
    std::uint64_t runs = 0;
    double analytic = 0.0;
    double abs_error = 0.0;
    // (estimate - analytic) / max(std_error, sqrt(analytic (1 - analytic) / runs))
    double z_score = 0.0;
    std::uint64_t hits = 0;
    bool analytic_composite = false;
};

inline constexpr double kSimulationBudget = 1e9;  // individual draws per call

// Fraction of trials with a Binomial(k,p) (or Poisson(kp)) count >= m.
SimReport simulate_per_person(const SimPlan& plan, ExecPolicy policy = ExecPolicy::parallel);

// Fraction of trials in which at least one of n innocents alerts. Exact mode
// simulates individuals and stops a trial at its first alert; n * runs above
// kSimulationBudget throws BudgetExceeded.
SimReport simulate_system(const SimPlan& plan, ExecPolicy policy = ExecPolicy::parallel);

struct CorrelatedReport {
    SimReport tail;              // Pr(Y >= m); analytic is the independent binomial tail
    double mean = 0.0;           // sample mean of Y
    double variance = 0.0;       // unbiased sample variance of Y
    double independent_variance = 0.0;  // k p (1 - p)
};

// Gaussian-copula indicators: latent normals thresholded at the p-quantile.
// Exchangeable rho must lie in [-1/(k-1), 1]; ar1 needs |rho| < 1.
CorrelatedReport simulate_correlated(const SimPlan& plan,
                                     ExecPolicy policy = ExecPolicy::parallel);

// Pearson correlation of two Bernoulli(p) indicators whose latent normals have
// correlation latent_rho, measured from `draws` pairs.
double measure_binary_correlation(double p, double latent_rho, std::uint64_t draws,
                                  std::uint64_t seed);

// Latent correlation whose measured binary correlation matches the target,
// found by bisection with common random numbers over a pilot of `draws` pairs.
double calibrate_latent_correlation(double p, double target_binary_rho,
                                    std::uint64_t draws = 100000, std::uint64_t seed = 0);

bool within_sigma(const SimReport& report, double sigmas) noexcept;

}  // namespace screening
