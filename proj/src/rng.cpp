#include "screening/rng.hpp"

#include <cmath>
#include <numbers>

namespace screening::rng {

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

__extension__ typedef unsigned __int128 u128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const u128 prod = static_cast<u128>(a) * b;
    hi = static_cast<std::uint64_t>(prod >> 64);
    lo = static_cast<std::uint64_t>(prod);
}

}  // namespace

Block philox4x64(Block x, Key k) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, x[0], hi0, lo0);
        mulhilo(kM1, x[2], hi1, lo1);
        x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
        k[0] += kW0;
        k[1] += kW1;
    }
    return x;
}

Stream::Stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t trial,
               std::uint64_t substream) noexcept
    : key_{seed, tag}, counter_{0, 0, trial, substream} {}

std::uint64_t Stream::next_u64() noexcept {
    if (used_ == 4) {
        buffer_ = philox4x64(counter_, key_);
        ++counter_[0];
        if (counter_[0] == 0) ++counter_[1];
        used_ = 0;
    }
    return buffer_[used_++];
}

double Stream::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::uniform_open0() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Stream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_normal_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

}  // namespace screening::rng
