#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "screening/error.hpp"
#include "screening/reliability.hpp"
#include "screening/tailcore.hpp"

using namespace screening;

TEST_CASE("headline configuration: hundreds of expected false alerts") {
    const SystemRisk r = system_risk(ScreeningConfig::with_threshold(1000, 0.005, 15, 1000000));
    CHECK(std::abs(r.expected_false_alerts - 226.0) <= 1.0);
    CHECK(r.prob_at_least_one == 1.0);
    CHECK(std::abs(r.log_complement - (-226.0)) <= 1.0);
    // 1 - 7e-99 is only visible through the log complement.
    CHECK(std::abs(r.log_complement / std::log(10.0) - std::log10(7e-99)) < 0.2);
    CHECK(r.expected_false_alerts == 1e6 * r.per_person_q);
}

TEST_CASE("single person reduces to the per-person tail") {
    for (double p : {0.001, 0.01, 0.2}) {
        const auto cfg = ScreeningConfig::with_threshold(300, p, 4, 1);
        const SystemRisk r = system_risk(cfg);
        CHECK(r.prob_at_least_one == doctest::Approx(r.per_person_q).epsilon(1e-14));
    }
}

TEST_CASE("log-space complement agrees with repeated multiplication") {
    const auto big = ScreeningConfig::with_threshold(100, 0.01, 3, 100000);
    const double q = system_risk(big).per_person_q;
    CHECK(q == doctest::Approx(0.0803).epsilon(0.001));
    const auto sub = ScreeningConfig::with_threshold(100, 0.01, 3, 1000);
    double survive = 1.0;
    for (int i = 0; i < 1000; ++i) survive *= 1.0 - q;
    const double brute = 1.0 - survive;
    CHECK(std::abs(system_risk(sub).prob_at_least_one - brute) <= 1e-10 * brute);

    const auto small = ScreeningConfig::with_threshold(1000, 0.005, 15, 37);
    const double qs = system_risk(small).per_person_q;
    double s2 = 1.0;
    for (int i = 0; i < 37; ++i) s2 *= 1.0 - qs;
    CHECK(std::abs(system_risk(small).prob_at_least_one - (1.0 - s2)) <= 1e-12 * (1.0 - s2));
}

TEST_CASE("populations up to 1e12 stay finite") {
    const SystemRisk r = system_risk(ScreeningConfig::with_threshold(1000, 0.005, 40, 1000000000000ULL));
    CHECK(std::isfinite(r.log_complement));
    CHECK(std::isfinite(r.expected_false_alerts));
    CHECK(r.prob_at_least_one >= 0.0);
    CHECK(r.prob_at_least_one <= 1.0);
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(ScreeningConfig::with_threshold(0, 0.1, 1, 1), DomainError);
    CHECK_THROWS_AS(ScreeningConfig::with_threshold(10, 0.0, 1, 1), DomainError);
    CHECK_THROWS_AS(ScreeningConfig::with_threshold(10, 1.0, 1, 1), DomainError);
    CHECK_THROWS_AS(ScreeningConfig::with_threshold(10, 0.1, 0, 1), DomainError);
    CHECK_THROWS_AS(ScreeningConfig::with_threshold(10, 0.1, 1, 0), DomainError);
    CHECK_THROWS_AS(ScreeningConfig::with_ratio(10, 0.1, 1.0, 1), DomainError);
    CHECK(ScreeningConfig::with_ratio(1000, 0.005, 3.0, 1).m == 15);
    CHECK(ScreeningConfig::with_ratio(100, 0.07, 2.0, 1).m == 14);
}

TEST_CASE("system sandwich over the configuration grid") {
    for (std::uint64_t k : {10u, 100u, 1000u}) {
        for (double p : {0.001, 0.01, 0.05}) {
            for (double c : {1.5, 2.0, 3.0}) {
                for (std::uint64_t n : {100u, 10000u, 1000000u}) {
                    const auto cfg = ScreeningConfig::with_ratio(k, p, c, n);
                    const SystemRisk r = system_risk(cfg);
                    CAPTURE(k);
                    CAPTURE(p);
                    CAPTURE(c);
                    CAPTURE(n);
                    REQUIRE(r.bounds_apply);
                    CHECK(r.lower_bound <= r.prob_at_least_one);
                    CHECK(r.prob_at_least_one <= r.upper_bound);
                    CHECK(r.expected_false_alerts == static_cast<double>(n) * r.per_person_q);
                }
            }
        }
    }
}

TEST_CASE("monotone in n and p, antitone in m") {
    for (std::uint64_t m : {2u, 5u, 12u}) {
        double prev = 0.0;
        for (std::uint64_t n = 1; n < 100000000; n = n * 3 + 1) {
            const double pr = system_risk(ScreeningConfig::with_threshold(200, 0.01, m, n)).prob_at_least_one;
            CHECK(pr >= prev);
            prev = pr;
        }
        prev = 0.0;
        for (double p = 1e-4; p < 0.2; p *= 1.3) {
            const double pr = system_risk(ScreeningConfig::with_threshold(200, p, m, 5000)).prob_at_least_one;
            CHECK(pr >= prev);
            prev = pr;
        }
    }
    double prev = 1.0;
    for (std::uint64_t m = 1; m < 60; ++m) {
        const double pr = system_risk(ScreeningConfig::with_threshold(200, 0.05, m, 5000)).prob_at_least_one;
        CHECK(pr <= prev);
        prev = pr;
    }
}

TEST_CASE("critical population") {
    const CriticalPopulation a = critical_population(50, 1.5);
    CHECK(std::abs(a.sqrt_scale / 1560.0 - 1.0) <= 0.05);
    CHECK(a.sqrt_scale == doctest::Approx(std::sqrt(50.0) * std::exp(50 * rate_function(1.5))).epsilon(1e-14));
    CHECK(a.refined ==
          doctest::Approx(std::sqrt(2 * std::numbers::pi * 75) * std::exp(a.exponent + 1.0 / 900.0)).epsilon(1e-14));
    CHECK(a.rough_scale == doctest::Approx(std::exp(a.exponent)).epsilon(1e-15));
    CHECK(a.exponent == doctest::Approx(5.4).epsilon(0.01));

    const CriticalPopulation b = critical_population(7.3, 1.644);
    CHECK(std::abs(b.sqrt_scale / 9.5 - 1.0) <= 0.05);

    for (double lambda : {1.0, 10.0, 100.0}) {
        const CriticalPopulation near = critical_population(lambda, 1.0 + 1e-9);
        // The rate exponent vanishes; the Robbins factor e^{1/(12 lambda)} remains.
        CHECK(near.exponent < 1e-15 * lambda);
        CHECK(near.refined == doctest::Approx(std::sqrt(2 * std::numbers::pi * lambda) *
                                              std::exp(1.0 / (12.0 * lambda)))
                                  .epsilon(1e-8));
    }
    CHECK_THROWS_AS(critical_population(10, 1.0), DomainError);
    CHECK_THROWS_AS(critical_population(10, 0.8), DomainError);
    CHECK_THROWS_AS(critical_population(1e6, 50.0), RangeError);
}

TEST_CASE("phase scan below and above the transition") {
    const double lam[] = {200.0};
    const auto low = phase_scan(lam, 1.5, 0.5);
    const auto high = phase_scan(lam, 1.5, 1.5);
    CHECK(low[0].m == 300);
    CHECK(low[0].risk.prob_at_least_one < 0.01);
    CHECK(high[0].risk.prob_at_least_one > 0.99);

    const double lams[] = {5.0, 20.0, 80.0};
    for (const auto& pt : phase_scan(lams, 2.0, 1e-6)) {
        CHECK(pt.n == std::round(std::sqrt(pt.lambda) * std::exp(1e-6 * pt.lambda * rate_function(2.0))));
        CHECK(pt.risk.prob_at_least_one == doctest::Approx(pt.n * pt.risk.per_person_q).epsilon(0.05));
        CHECK(pt.risk.prob_at_least_one < 0.1);
    }
}

TEST_CASE("phase scan range guard") {
    const double lam[] = {400.0};
    CHECK_THROWS_AS(phase_scan(lam, 1.5, 1.5, 1e15), RangeError);
    CHECK_NOTHROW(phase_scan(lam, 1.5, 1.0));
    const double lam2[] = {5000.0};
    CHECK_THROWS_AS(phase_scan(lam2, 1.5, 1.0), RangeError);
    CHECK_THROWS_AS(phase_scan(lam, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(phase_scan(lam, 1.5, 0.0), DomainError);
}

TEST_CASE("phase grid is ordered lambda-major and matches single scans") {
    const double lams[] = {10.0, 40.0, 160.0};
    const double alphas[] = {0.3, 0.9, 1.1, 1.7};
    const auto grid = phase_grid(lams, 1.5, alphas);
    REQUIRE(grid.size() == 12);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const auto& g = grid[i * 4 + j];
            const double one[] = {lams[i]};
            const auto ref = phase_scan(one, 1.5, alphas[j]);
            CHECK(g.lambda == lams[i]);
            CHECK(g.alpha == alphas[j]);
            CHECK(g.n == ref[0].n);
            CHECK(g.risk.prob_at_least_one == ref[0].risk.prob_at_least_one);
        }
    }
}

TEST_CASE("transition sharpens as lambda grows") {
    const double w25 = transition_width(25, 1.5);
    const double w100 = transition_width(100, 1.5);
    const double w400 = transition_width(400, 1.5);
    CHECK(w25 > w100);
    CHECK(w100 > w400);
    CHECK(w400 > 0.0);
    CHECK_THROWS_AS(transition_width(25, 1.5, 0.9, 0.1), DomainError);
}

TEST_CASE("near-one probabilities snap to exactly one") {
    CHECK(at_least_one_from_log_complement(-300.0) == 1.0);
    CHECK(at_least_one_from_log_complement(-1e-3) == doctest::Approx(-std::expm1(-1e-3)).epsilon(1e-15));
    CHECK(at_least_one_from_log_complement(0.0) == 0.0);
}
