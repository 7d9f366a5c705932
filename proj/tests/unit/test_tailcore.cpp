#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <vector>

#include "screening/error.hpp"
#include "screening/special.hpp"
#include "screening/tailcore.hpp"

using namespace screening;

namespace {

struct TailRef {
    double lambda;
    std::uint64_t m;
    double q;  // 0 where the value underflows double
    double log_q;
};

// Regularized incomplete gamma P(m, lambda) at 40 digits (mpmath).
const TailRef kPoissonRefs[] = {
    {5, 15, 2.2625367617675553298e-4, -8.3938537272211886382},
    {2, 3, 3.2332358381693654053e-1, -1.1291016497509286429},
    {0.5, 3, 1.4387677966970686644e-2, -4.2413831354557687144},
    {5, 1, 9.932620530009145329e-1, -0.0067607494494885578259},
    {0.01, 1, 9.9501662508319466322e-3, -4.6101660193248968974},
    {0.001, 4, 4.1633347218254839621e-14, -30.809874932942398486},
    {10, 30, 2.5099512015279078234e-7, -15.19783233962596554},
    {50, 75, 5.777545262099965402e-4, -7.4563614746388328721},
    {50, 150, 3.5306122254147899869e-30, -67.81608149895257248},
    {200, 300, 2.7114684433431114359e-11, -24.330945673784342031},
    {1000, 900, 9.9937740221572495274e-1, -0.00062279167875856679047},
    {1000, 1100, 9.6263040586655716094e-4, -6.9458410143652123998},
    {1e4, 10000, 5.0132980833995520038e-1, -0.69049109440197235942},
    {1e4, 9800, 9.7778886829490347012e-1, -0.022461513342052009891},
    {1e4, 10300, 1.4323653674667649787e-3, -6.5484280981085765112},
    {1e4, 100000, 0.0, -140265.07934222248407},
    {5, 100000, 0.0, -890360.43060571107767},
    {100, 101, 4.7343780147000152962e-1, -0.74773473407623107253},
    {3.5, 2, 8.6411177459956674667e-1, -0.1460531497959979079},
    {1e4, 1, 1.0, 0.0},
};

const double kGridLambdas[] = {0.5, 1, 2, 5, 10, 50};
const double kGridRatios[] = {1.2, 1.5, 2, 3};

// Number of k-bit patterns with each popcount, by enumerating all 2^k outcomes.
std::vector<std::uint64_t> popcount_histogram(unsigned k) {
    std::vector<std::uint64_t> hist(k + 1, 0);
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t mask = 0; mask < total; ++mask) ++hist[std::popcount(mask)];
    return hist;
}

std::uint64_t choose(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    r = std::min(r, n - r);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
    return static_cast<std::uint64_t>(acc);
}

}  // namespace

TEST_CASE("rate function closed form and domain") {
    CHECK(rate_function(1.5) == doctest::Approx(0.108).epsilon(0.001 / 0.108));
    CHECK(rate_function(1.0) == 0.0);
    CHECK(rate_function(3.0) == doctest::Approx(1.2958368660043290742).epsilon(1e-14));
    CHECK(rate_function(1.5) == doctest::Approx(0.10819766216224657297).epsilon(1e-14));
    CHECK_THROWS_AS(rate_function(0.0), DomainError);
    CHECK_THROWS_AS(rate_function(-1.0), DomainError);
    CHECK_THROWS_AS(rate_function(NAN), DomainError);
}

TEST_CASE("rate function is convex, vanishes only at one, and has derivative log c") {
    const double h = 1e-6;
    for (double c = 0.05; c < 8.0; c += 0.0137) {
        CAPTURE(c);
        const double fd = (rate_function(c + h) - rate_function(c - h)) / (2 * h);
        CHECK(std::abs(fd - std::log(c)) < 1e-6);
        const double second = rate_function(c + 1e-3) - 2 * rate_function(c) + rate_function(c - 1e-3);
        CHECK(second > 0.0);
        if (std::abs(c - 1.0) > 1e-9) CHECK(rate_function(c) > 0.0);
    }
}

TEST_CASE("poisson tail against frozen high-precision values") {
    for (const auto& r : kPoissonRefs) {
        CAPTURE(r.lambda);
        CAPTURE(r.m);
        const double lq = log_poisson_tail(r.lambda, r.m);
        if (r.log_q == 0.0) {
            CHECK(lq == 0.0);
        } else {
            CHECK(std::abs(lq - r.log_q) <= 1e-12 * std::abs(r.log_q));
        }
        const double q = poisson_tail(r.lambda, r.m);
        if (r.q > 0.0) {
            CHECK(std::abs(q - r.q) <= 1e-10 * r.q);
        } else {
            CHECK(q == 0.0);
        }
    }
}

TEST_CASE("poisson tail worked examples") {
    CHECK(std::abs(poisson_tail(5, 15) / 2.26e-4 - 1.0) < 0.01);
    CHECK(poisson_tail(5, 0) == 1.0);
    CHECK(std::abs(poisson_tail(2, 3) - 0.323) <= 0.001);
    CHECK(std::abs(poisson_tail(0.5, 3) - 0.014) <= 0.001);
    CHECK_THROWS_AS(poisson_tail(0.0, 3), DomainError);
    CHECK_THROWS_AS(poisson_tail(-1.0, 3), DomainError);
}

TEST_CASE("log of the exact tail agrees with the tail itself") {
    for (double lambda : {0.3, 1.0, 4.0, 25.0, 400.0, 5000.0}) {
        for (double c : {0.5, 0.9, 1.0, 1.3, 2.0, 4.0}) {
            const auto m = static_cast<std::uint64_t>(std::ceil(c * lambda));
            const TailEstimate est = tail_estimate(lambda, m);
            if (est.exact > 0.0) {
                CAPTURE(lambda);
                CAPTURE(m);
                CHECK(std::abs(std::log(est.exact) - est.log_exact) <=
                      1e-12 * std::max(1.0, std::abs(est.log_exact)));
            }
        }
    }
}

TEST_CASE("poisson tail is monotone in m and lambda") {
    for (double lambda : {0.2, 1.0, 3.7, 20.0, 150.0}) {
        double prev = 1.0;
        for (std::uint64_t m = 0; m < 400; ++m) {
            const double q = poisson_tail(lambda, m);
            CHECK(q <= prev);
            prev = q;
        }
    }
    for (std::uint64_t m : {1u, 5u, 40u, 300u}) {
        double prev = 0.0;
        for (double lambda = 0.05; lambda < 500.0; lambda *= 1.07) {
            const double q = poisson_tail(lambda, m);
            CHECK(q >= prev);
            prev = q;
        }
    }
}

TEST_CASE("binomial tail matches enumeration of all 2^k outcomes") {
    const double ps[] = {0.0, 1e-3, 0.05, 0.3, 0.5, 0.77, 0.999, 1.0};
    for (unsigned k = 1; k <= 30; ++k) {
        const auto hist = popcount_histogram(k);
        for (double p : ps) {
            for (std::uint64_t m = 0; m <= k + 1; ++m) {
                special::CompensatedSum oracle;
                for (std::uint64_t j = m; j <= k; ++j) {
                    oracle.add(static_cast<double>(hist[j]) * std::pow(p, static_cast<double>(j)) *
                               std::pow(1.0 - p, static_cast<double>(k - j)));
                }
                CAPTURE(k);
                CAPTURE(p);
                CAPTURE(m);
                CHECK(std::abs(binomial_tail(k, p, m) - oracle.value()) <= 1e-12);
            }
        }
    }
}

TEST_CASE("binomial tail examples and domain") {
    const double b = binomial_tail(1000, 0.005, 15);
    CHECK(std::abs(b - 2.1580336348481794123e-4) <= 1e-12 * 2.158e-4);
    CHECK(std::abs(b - poisson_tail(5, 15)) <= 0.05);
    CHECK(binomial_tail(10, 0.0, 1) == 0.0);
    CHECK(binomial_tail(10, 1.0, 10) == 1.0);
    CHECK(binomial_tail(10, 0.4, 11) == 0.0);
    CHECK_THROWS_AS(binomial_tail(10, -0.1, 1), DomainError);
    CHECK_THROWS_AS(binomial_tail(10, 1.1, 1), DomainError);
}

TEST_CASE("chernoff bound") {
    CHECK(chernoff_upper(5, 15) == doctest::Approx(1.5350622730223783956e-3).epsilon(1e-13));
    CHECK(chernoff_upper(5, 15) >= poisson_tail(5, 15));
    CHECK(chernoff_upper(50, 75) == doctest::Approx(std::exp(-5.4)).epsilon(0.01));
    CHECK(chernoff_upper(50, 75) == doctest::Approx(4.4721629403644198148e-3).epsilon(1e-13));
    CHECK(chernoff_upper(1, 1 + 1e-9) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(chernoff_upper(5, 5), DomainError);
    CHECK_THROWS_AS(chernoff_upper(5, 4), DomainError);
}

TEST_CASE("robbins bound") {
    CHECK(robbins_lower(5, 3) == doctest::Approx(1.5724530506481829892e-4).epsilon(1e-13));
    CHECK(robbins_lower(5, 3) <= poisson_tail(5, 15));
    const double r = robbins_lower(50, 1.5);
    CHECK(r > 0.0);
    CHECK(r <= chernoff_upper(50, 75));
    for (double lambda : kGridLambdas) {
        for (double c = 1.01; c < 6; c += 0.13) {
            CHECK(robbins_lower(lambda, c) < chernoff_upper(lambda, c * lambda));
        }
    }
    CHECK_THROWS_AS(robbins_lower(5, 1.0), DomainError);
    CHECK_THROWS_AS(robbins_lower(5, 0.5), DomainError);
    CHECK(std::exp(log_robbins_lower(7, 2.2)) == doctest::Approx(robbins_lower(7, 2.2)).epsilon(1e-14));
}

TEST_CASE("two-sided sandwich at the realised threshold ratio") {
    int violations = 0;
    for (double lambda : kGridLambdas) {
        for (double c : kGridRatios) {
            const std::uint64_t m = threshold_from_ratio(c, lambda);
            const TailEstimate est = tail_estimate(lambda, m);
            REQUIRE(est.bounds_apply);
            const double cp = static_cast<double>(m) / lambda;
            CHECK(est.robbins_lower == doctest::Approx(robbins_lower(lambda, cp)).epsilon(1e-14));
            CHECK(est.chernoff_upper == doctest::Approx(chernoff_upper(lambda, static_cast<double>(m))).epsilon(1e-14));
            if (!(est.robbins_lower <= est.exact && est.exact <= est.chernoff_upper)) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("lower bound at the unrounded ratio only fails for small lambda") {
    // Robbins at c lambda against the tail at ceil(c lambda). Rounding m up can
    // push the tail below a bound evaluated at the unrounded point when lambda
    // is small; these are the only such cells on the grid.
    std::vector<std::pair<double, double>> failures;
    for (double lambda : kGridLambdas) {
        for (double c : kGridRatios) {
            const std::uint64_t m = threshold_from_ratio(c, lambda);
            if (robbins_lower(lambda, c) > poisson_tail(lambda, m)) failures.emplace_back(lambda, c);
            CHECK(poisson_tail(lambda, m) <= chernoff_upper(lambda, static_cast<double>(m)));
        }
    }
    const std::vector<std::pair<double, double>> expected = {{0.5, 1.2}, {0.5, 3.0}, {1.0, 1.2}, {1.0, 1.5}};
    CHECK(failures == expected);
}

TEST_CASE("threshold from ratio rounds up with integer snapping") {
    CHECK(threshold_from_ratio(2.0, 100 * 0.07) == 14);
    CHECK(threshold_from_ratio(1.5, 50) == 75);
    CHECK(threshold_from_ratio(1.2, 0.5) == 1);
    CHECK(threshold_from_ratio(1.644, 7.3) == 13);
    CHECK(threshold_from_ratio(1.5, 5.1) == 8);
}

TEST_CASE("tail estimate without an upper-tail threshold reports trivial bounds") {
    const TailEstimate est = tail_estimate(10, 10);
    CHECK_FALSE(est.bounds_apply);
    CHECK(est.robbins_lower == 0.0);
    CHECK(est.chernoff_upper == 1.0);
    CHECK(est.exact == doctest::Approx(0.54207028552814779).epsilon(1e-12));
}

TEST_CASE("overlap probability examples") {
    CHECK(overlap_probability({100, 10, 5}) == doctest::Approx(0.41624763307384809594).epsilon(1e-13));
    CHECK(std::abs(overlap_probability({100, 10, 5}) - 0.4163) < 1e-4);
    CHECK(overlap_probability({100, 0, 5}) == 0.0);
    CHECK(overlap_probability({10, 8, 5}) == 1.0);
    CHECK_THROWS_AS(overlap_probability({10, 11, 1}), DomainError);
    CHECK_THROWS_AS(overlap_probability({10, 1, 11}), DomainError);
}

TEST_CASE("overlap probability matches exact binomial-coefficient ratios") {
    for (std::uint64_t V = 1; V <= 60; ++V) {
        for (std::uint64_t t = 0; t <= V; ++t) {
            for (std::uint64_t s = 0; s <= V; ++s) {
                const std::uint64_t den = choose(V, s);
                const std::uint64_t num = choose(V - t, s);
                const double exact = static_cast<double>(den - num) / static_cast<double>(den);
                CAPTURE(V);
                CAPTURE(t);
                CAPTURE(s);
                CHECK(std::abs(overlap_probability({V, t, s}) - exact) <= 1e-12);
            }
        }
    }
}

TEST_CASE("le cam bound dominates every binomial-poisson tail gap") {
    CHECK(lecam_bound(1000, 0.005) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(lecam_bound(42, 0.0) == 0.0);
    double worst = 0.0;
    for (std::uint64_t m = 0; m <= 200; ++m) {
        worst = std::max(worst, std::abs(binomial_tail(200, 0.01, m) - poisson_tail(2.0, m)));
    }
    CHECK(worst <= 0.04);
    for (std::uint64_t k : {10u, 50u, 200u, 1000u}) {
        for (double p : {0.001, 0.01, 0.05, 0.2}) {
            const double bound = lecam_bound(k, p);
            for (std::uint64_t m = 0; m <= std::min<std::uint64_t>(k, 60); ++m) {
                CHECK(std::abs(binomial_tail(k, p, m) - poisson_tail(k * p, m)) <= bound);
            }
        }
    }
}
