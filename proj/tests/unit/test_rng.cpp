#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "screening/rng.hpp"

using namespace screening::rng;

namespace {
constexpr std::uint64_t kMax = ~std::uint64_t{0};
}

// Reference outputs captured from numpy.random.Philox (Philox4x64-10).
TEST_CASE("philox known answers") {
    CHECK(philox4x64({0, 0, 0, 0}, {0, 0}) ==
          Block{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL});
    CHECK(philox4x64({kMax, kMax, kMax, kMax}, {kMax, kMax}) ==
          Block{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL, 0x9cc7d7c69cd777b6ULL, 0xa09caebf594f0ba0ULL});
    CHECK(philox4x64({0, 1, 0, 0}, {42, 7}) ==
          Block{0xcad494d0b15cf727ULL, 0xca384a08830e53f2ULL, 0x93ef0dc270112d4bULL, 0x019fd0adcabbc240ULL});
    CHECK(philox4x64({1, 1, 0, 0}, {42, 7}) ==
          Block{0xede72702ca4da55bULL, 0xc72c65e676626aecULL, 0xd4bcae7cce3d37b7ULL, 0x2985716a966c3068ULL});
}

TEST_CASE("stream walks the block counter") {
    Stream s(0, 0, 0);
    const std::uint64_t expected[] = {0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL,
                                      0x7e68b68aec7ba23bULL, 0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL,
                                      0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL};
    for (std::uint64_t e : expected) CHECK(s.next_u64() == e);
}

TEST_CASE("streams are reproducible and distinct") {
    Stream a(5, 1, 10), b(5, 1, 10);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    std::set<std::uint64_t> firsts;
    for (std::uint64_t seed = 0; seed < 4; ++seed)
        for (std::uint64_t tag = 0; tag < 4; ++tag)
            for (std::uint64_t trial = 0; trial < 4; ++trial)
                for (std::uint64_t sub = 0; sub < 4; ++sub) firsts.insert(Stream(seed, tag, trial, sub).next_u64());
    CHECK(firsts.size() == 256);
}

TEST_CASE("uniform ranges") {
    Stream s(1, 2, 3);
    double lo = 1.0, hi = 0.0, lo0 = 2.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = s.uniform();
        const double v = s.uniform_open0();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        lo0 = std::min(lo0, v);
    }
    CHECK(lo < 1e-4);
    CHECK(hi > 1 - 1e-4);
    CHECK(lo0 > 0.0);
}

TEST_CASE("uniform and normal moments") {
    Stream s(77, 0, 0);
    const int n = 1000000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0, sn4 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        su += u;
        su2 += u * u;
        const double z = s.normal();
        sn += z;
        sn2 += z * z;
        sn4 += z * z * z * z;
    }
    CHECK(std::abs(su / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
    CHECK(std::abs(su2 / n - 1.0 / 3) < 5e-3);
    CHECK(std::abs(sn / n) < 5 / std::sqrt(double(n)));
    CHECK(std::abs(sn2 / n - 1.0) < 5 * std::sqrt(2.0 / n));
    CHECK(std::abs(sn4 / n - 3.0) < 0.05);
}

TEST_CASE("uniform bins pass a chi-square screen") {
    Stream s(3, 3, 3);
    const int bins = 64, n = 640000;
    std::vector<int> counts(bins, 0);
    for (int i = 0; i < n; ++i) ++counts[static_cast<int>(s.uniform() * bins)];
    double chi2 = 0;
    const double e = double(n) / bins;
    for (int c : counts) chi2 += (c - e) * (c - e) / e;
    // 63 degrees of freedom; 120 is far beyond the 0.9999 quantile.
    CHECK(chi2 < 120);
}
