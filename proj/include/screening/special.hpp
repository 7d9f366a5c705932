#pragma once

// Saddle-point evaluation of Poisson and binomial point masses (Loader 2000).
// Accurate to a few ulps in relative terms far into the tails, where the
// naive lgamma route loses digits to cancellation.

#include <cstdint>

namespace screening::special {

// log(n!) - log(sqrt(2 pi n) (n/e)^n); the Stirling remainder.
double stirling_error(std::uint64_t n);

// x log(x/mean) + mean - x, computed without cancellation when x ~ mean.
double deviance_term(double x, double mean);

double log_poisson_pmf(std::uint64_t j, double lambda);
double poisson_pmf(std::uint64_t j, double lambda);

double log_binomial_pmf(std::uint64_t j, std::uint64_t k, double p);
double binomial_pmf(std::uint64_t j, std::uint64_t k, double p);

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace screening::special
