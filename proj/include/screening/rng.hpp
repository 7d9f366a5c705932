#pragma once

// Philox4x64-10 counter-based generator. A stream is addressed by
// (seed, tag, trial, substream), so draws never depend on scheduling order.

#include <array>
#include <cstdint>

namespace screening::rng {

using Block = std::array<std::uint64_t, 4>;
using Key = std::array<std::uint64_t, 2>;

Block philox4x64(Block counter, Key key) noexcept;

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t trial,
           std::uint64_t substream = 0) noexcept;

    std::uint64_t next_u64() noexcept;
    // [0, 1)
    double uniform() noexcept;
    // (0, 1], safe for log()
    double uniform_open0() noexcept;
    double normal() noexcept;

private:
    Key key_;
    Block counter_;
    Block buffer_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace screening::rng
