#pragma once

#include "lrqd/fixture_levels.hpp"
#include "lrqd/generator.hpp"
#include "lrqd/level.hpp"
#include "lrqd/splitmix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

namespace lrqd {

/// Deterministic stand-in for a trained generator, for running the whole
/// pipeline without weights. It picks a bundled level from |z1| and paints
/// extra tiles onto it:
///
///   z2 > 0   enemies          floor(z2 * 24)
///   z3 > 0   gold             floor(z3 * 50)
///   z4       ground           floor(|z4| * 300) cells; z4 > 0 adds ground, z4 < 0 carves it
///   z5 > 0   ladders          floor(z5 * 24)
///   z6 > 0   ropes            floor(z6 * 24)
///
/// Cell positions come from a splitmix64 stream seeded by a hash of all ten
/// components. The all-zero vector yields kFixtureLevels[0] unchanged.
class StubGenerator final : public LevelGenerator {
public:
    StubGenerator()
    {
        for (auto text : kFixtureLevels) {
            bases_.push_back(parse_vglc(text));
        }
    }

    [[nodiscard]] Level generate(const LatentVector& z) const override
    {
        const auto n = bases_.size();
        const auto pick = std::min(n - 1, static_cast<std::size_t>(std::floor(std::abs(z[1]) * static_cast<double>(n))));
        Level level = bases_[pick];

        std::uint64_t seed = 0;
        for (double v : z.values()) {
            seed = splitmix64_mix(seed ^ std::bit_cast<std::uint64_t>(v));
        }
        SplitMix64 rng(seed);
        auto paint = [&](int count, auto&& choose) {
            for (int i = 0; i < count; ++i) {
                const auto cell = static_cast<int>(rng.next() % kCells);
                const auto tile = choose(level.at(cell / kCols, cell % kCols));
                level.set(cell / kCols, cell % kCols, tile);
            }
        };
        auto count = [](double v, double scale) { return static_cast<int>(std::floor(std::max(0.0, v) * scale)); };

        const int ground = count(std::abs(z[4]), 300.0);
        if (z[4] > 0.0) {
            paint(ground, [&](TileType) { return (rng.next() & 1U) != 0 ? TileType::DiggableGround : TileType::SolidGround; });
        } else {
            paint(ground, [](TileType t) { return is_ground(t) ? TileType::Empty : t; });
        }
        paint(count(z[5], 24.0), [](TileType) { return TileType::Ladder; });
        paint(count(z[6], 24.0), [](TileType) { return TileType::Rope; });
        paint(count(z[2], 24.0), [](TileType) { return TileType::Enemy; });
        paint(count(z[3], 50.0), [](TileType) { return TileType::Gold; });
        return level;
    }

    [[nodiscard]] std::string describe() const override { return "stub"; }

private:
    std::vector<Level> bases_;
};

} // namespace lrqd
