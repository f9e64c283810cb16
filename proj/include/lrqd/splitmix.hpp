#pragma once

#include <cstdint>

namespace lrqd {

/// The splitmix64 output (finalizer) function.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Sequential splitmix64: each draw advances the state by the golden gamma
/// and returns the mixed state.
class SplitMix64 {
public:
    constexpr explicit SplitMix64(std::uint64_t seed) noexcept
        : state_(seed)
    {
    }

    constexpr std::uint64_t next() noexcept
    {
        state_ += kGoldenGamma;
        return splitmix64_mix(state_);
    }

    [[nodiscard]] constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

} // namespace lrqd
