#pragma once

// Poisson and binomial upper tails with their large-deviation bounds.
//
// Every function here is pure and thread-safe. Domain violations throw
// screening::DomainError.

#include <cstdint>

namespace screening {

// D(c||1) = c log c - c + 1, the Poisson rate function. Zero only at c = 1.
double rate_function(double c);

// Pr(Poisson(lambda) >= m). Relative error below 1e-10 for lambda <= 1e4,
// m <= 1e5; underflows to 0 deep in the tail, use log_poisson_tail there.
double poisson_tail(double lambda, std::uint64_t m);
double log_poisson_tail(double lambda, std::uint64_t m);

// Pr(Binomial(k, p) >= m) by compensated summation of exact point masses.
double binomial_tail(std::uint64_t k, double p, std::uint64_t m);

// exp(-lambda D(m/lambda||1)), valid for m > lambda, clamped into [0, 1].
double chernoff_upper(double lambda, double m);

// (2 pi c lambda)^(-1/2) exp(-lambda D(c||1) - 1/(12 c lambda)), c > 1.
// A lower bound on Pr(Poisson(lambda) = c lambda) whenever c lambda is an
// integer, hence on the tail at that threshold.
double robbins_lower(double lambda, double c);
double log_robbins_lower(double lambda, double c);

struct TailEstimate {
    double lambda = 0.0;
    std::uint64_t m = 0;
    double exact = 0.0;
    double log_exact = 0.0;
    // Bounds are evaluated at the realised ratio m / lambda. When m <= lambda
    // neither bound applies and they are reported as the trivial 0 and 1.
    double chernoff_upper = 1.0;
    double robbins_lower = 0.0;
    double exponent = 0.0;  // lambda D(m/lambda||1)
    bool bounds_apply = false;
};

TailEstimate tail_estimate(double lambda, std::uint64_t m);

// m = ceil(c lambda). Products within a few ulps of an integer snap to it so
// that e.g. c = 2, lambda = 100 * 0.07 yields 14 rather than 15.
std::uint64_t threshold_from_ratio(double c, double lambda);

struct OverlapInput {
    std::uint64_t domain_size = 0;      // V
    std::uint64_t person_list = 0;      // t
    std::uint64_t suspicious_list = 0;  // s
};

// Pr(a uniformly drawn t-subset meets a fixed s-subset of a V-set).
double overlap_probability(const OverlapInput& input);

// Total-variation bound 2 k p^2 between Binomial(k, p) and Poisson(k p).
double lecam_bound(std::uint64_t k, double p);

}  // namespace screening
