#pragma once

// Bayesian actionability of a flag: PPV, FDR, posterior odds, and the
// population scale beyond which flags stop being evidential.

#include <cstdint>

namespace screening {

struct BayesContext {
    double r = 0.0;      // expected true targets in the population
    double s = 0.0;      // sensitivity Pr(flag | target)
    double alpha = 0.5;  // desired PPV level
    double q = 0.0;      // false-positive rate Pr(flag | innocent)
    std::uint64_t n = 0; // population

    double base_rate() const noexcept { return r / static_cast<double>(n); }
    void validate() const;
};

// Base rates at or above this are treated as constant-prevalence inputs, for
// which the sparse-target approximations do not apply.
inline constexpr double kSparseBaseRateLimit = 0.01;

struct PpvResult {
    double ppv = 0.0;         // s pi / (s pi + q (1 - pi))
    double fdr = 0.0;         // q (1 - pi) / (s pi + q (1 - pi))
    double ppv_sparse = 0.0;  // r s / (r s + n q)
    double fdr_sparse = 0.0;
    bool sparse_target = true;
};

PpvResult ppv(const BayesContext& ctx);

// lr * prior_odds; either factor may be +infinity.
double posterior_odds(double likelihood_ratio, double prior_odds);
double likelihood_ratio(double s, double q);      // s / q, +inf at q = 0
double prior_odds_from_base_rate(double pi);      // pi / (1 - pi), +inf at pi = 1
double odds_to_probability(double odds);

// (1 - alpha) r s / (alpha q).
double bayes_critical_population(double r, double s, double alpha, double q);

enum class Regime { evidential, transitional, collapsed };

const char* to_string(Regime regime);

struct RegimeVerdict {
    double nq = 0.0;
    double rs = 0.0;
    Regime regime = Regime::evidential;  // evidential if nq <= rs/10, collapsed if nq >= 10 rs
    bool frequentist_reliable = true;    // nq < 1
};

RegimeVerdict classify_regime(const BayesContext& ctx);

}  // namespace screening
