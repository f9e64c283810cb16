#pragma once

// Hand-built solver fixtures. Each map is drawn at the top-left of an
// otherwise SolidGround 22x32 level; 'S' marks the spawn (an Empty tile).

#include "lrqd/fixture_levels.hpp"
#include "lrqd/level.hpp"
#include "lrqd/solver.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lrqd::support {

struct SolverFixture {
    std::string name;
    Level level;
    Position spawn;
};

inline SolverFixture make_fixture(std::string name, const std::vector<std::string_view>& rows)
{
    Level level(TileType::SolidGround);
    Position spawn { -1, -1 };
    if (rows.size() > static_cast<std::size_t>(kRows)) {
        throw std::invalid_argument(name + ": too many rows");
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() > static_cast<std::size_t>(kCols)) {
            throw std::invalid_argument(name + ": row too wide");
        }
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            const char ch = rows[r][c];
            if (ch == 'S') {
                spawn = { static_cast<int>(r), static_cast<int>(c) };
                level.set(static_cast<int>(r), static_cast<int>(c), TileType::Empty);
                continue;
            }
            const auto t = tile_from_char(ch);
            if (!t) {
                throw std::invalid_argument(name + ": bad char");
            }
            level.set(static_cast<int>(r), static_cast<int>(c), *t);
        }
    }
    if (spawn.row < 0) {
        throw std::invalid_argument(name + ": no spawn");
    }
    return { std::move(name), level, spawn };
}

/// Fixtures with hand-checked optimal costs, used to validate the oracle
/// itself before it is used as the reference.
struct KnownCost {
    std::string_view name;
    int cost;
};

inline const std::vector<KnownCost>& known_costs()
{
    static const std::vector<KnownCost> costs {
        { "walk_right", 5 },
        { "walk_both_sides", 9 },
        { "fall_shaft", 4 },
        { "rope_catch", 8 },
        { "ladder_climb", 4 },
        { "dig_then_fall", 5 },
        { "no_treasure", 0 },
        { "sealed_treasure", -1 },
    };
    return costs;
}

inline std::vector<SolverFixture> solver_fixtures()
{
    std::vector<SolverFixture> f;
    // Five columns right along a solid floor.
    f.push_back(make_fixture("walk_right", { "S....G" }));
    f.push_back(make_fixture("walk_left", { "G...S" }));
    f.push_back(make_fixture("walk_both_sides", { "G..S..G" }));
    f.push_back(make_fixture("no_treasure", { "...S..." }));
    f.push_back(make_fixture("fall_shaft", {
                                               "S.BBB",
                                               "B.BBB",
                                               "B.BBB",
                                               "BGBBB",
                                           }));
    f.push_back(make_fixture("rope_catch", {
                                               "S.BBBBBB",
                                               "B.BBBBBB",
                                               "B-----GB",
                                           }));
    f.push_back(make_fixture("rope_release", {
                                                 "S-----.",
                                                 "B.....B",
                                                 "B.....B",
                                                 "BBBBGBB",
                                             }));
    f.push_back(make_fixture("ladder_climb", {
                                                 "G.BB",
                                                 "B#BB",
                                                 "S#BB",
                                             }));
    f.push_back(make_fixture("ladder_descend", {
                                                   "S..B",
                                                   "BB#B",
                                                   "BB#B",
                                                   "G..B",
                                               }));
    f.push_back(make_fixture("dig_then_fall", {
                                                  "S.BB",
                                                  "bbBB",
                                                  "G.BB",
                                              }));
    f.push_back(make_fixture("dig_chain", {
                                              "S..B",
                                              "bbbB",
                                              "bbbB",
                                              "bbbB",
                                              "..GB",
                                          }));
    // The dig target has no ground beside it, so it cannot be dug.
    f.push_back(make_fixture("dig_blocked_detour", {
                                                       ".S..",
                                                       ".b..",
                                                       "..G.",
                                                   }));
    f.push_back(make_fixture("dig_vs_walk", {
                                                "S.......",
                                                "bbbbbbb.",
                                                "G.......",
                                            }));
    f.push_back(make_fixture("sealed_treasure", {
                                                    "S...BBB",
                                                    "BBBBBGB",
                                                }));
    f.push_back(make_fixture("sealed_chambers", {
                                                    "S...B...",
                                                    "BBBBBG..",
                                                }));
    f.push_back(make_fixture("two_treasures_order", {
                                                        "G.S.....G",
                                                    }));
    f.push_back(make_fixture("ladder_and_rope", {
                                                    "...----G",
                                                    "..#.BBBB",
                                                    "S.#.BBBB",
                                                }));
    f.push_back(make_fixture("cliff_walk_off", {
                                                   "S..BBBB",
                                                   "BB.....",
                                                   "BB.....",
                                                   "BBBBG..",
                                               }));
    f.push_back(make_fixture("one_way_drop", {
                                                 "G..S",
                                                 "BB.B",
                                                 "BB.B",
                                                 "...B",
                                             }));
    f.push_back(make_fixture("treasure_in_fall_path", {
                                                          "S.BB",
                                                          "BGBB",
                                                          "B.BB",
                                                          "BGBB",
                                                      }));
    f.push_back(make_fixture("enemy_passable", { "S.EEE.G" }));
    f.push_back(make_fixture("ladder_tower", {
                                                 "G..#.....",
                                                 "BBB#BBBBB",
                                                 "...#..G..",
                                                 "BBB#BBBBB",
                                                 "S..#.....",
                                             }));
    f.push_back(make_fixture("rope_bridge_gap", {
                                                    "S.------..G",
                                                    "BB......BBB",
                                                    "BB......BBB",
                                                    "BBBBBBBBBBB",
                                                }));
    f.push_back(make_fixture("dig_needs_return", {
                                                     "S#.....",
                                                     "B#bbbbB",
                                                     "B#G...B",
                                                     "BBBBBBB",
                                                 }));
    f.push_back(make_fixture("many_treasures", {
                                                   "G.G.G.#.G.G",
                                                   "bbbbbb#bbbb",
                                                   "G..S..#..G.",
                                               }));
    // Reaches the bottom row: the level edge acts as a floor.
    {
        std::vector<std::string_view> rows(21, "B.BBBB");
        rows.insert(rows.begin(), "S.BBBB");
        rows.back() = "B....G";
        f.push_back(make_fixture("bottom_row_floor", rows));
    }
    return f;
}

/// The bundled stub-generator levels, spawned from latent 0.
inline std::vector<SolverFixture> bundled_level_fixtures()
{
    std::vector<SolverFixture> f;
    int i = 0;
    for (auto text : kFixtureLevels) {
        const auto level = parse_vglc(text);
        f.push_back({ "bundled_" + std::to_string(i++), level, select_spawn(level, 0.0) });
    }
    return f;
}

} // namespace lrqd::support
