#pragma once

#include "lrqd/splitmix.hpp"

#include <cstdint>

namespace lrqd {

/// Counter-based generator: draw i of a stream with key k is
/// splitmix64_mix(k + i * golden_gamma). Streams are derived from a parent key
/// with split(), so independent runs never share draws.
class CounterRng {
public:
    constexpr explicit CounterRng(std::uint64_t key) noexcept
        : key_(splitmix64_mix(key))
    {
    }

    constexpr std::uint64_t next() noexcept
    {
        ++counter_;
        return splitmix64_mix(key_ + counter_ * kGoldenGamma);
    }

    /// Uniform on [0, 1) with 53 bits of resolution.
    constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n must be positive.
    constexpr std::uint64_t below(std::uint64_t n) noexcept
    {
        const auto i = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    [[nodiscard]] constexpr CounterRng split(std::uint64_t stream) const noexcept
    {
        return CounterRng(key_ ^ splitmix64_mix(stream + kGoldenGamma));
    }

    [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }
    [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

    friend constexpr bool operator==(const CounterRng&, const CounterRng&) = default;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace lrqd
