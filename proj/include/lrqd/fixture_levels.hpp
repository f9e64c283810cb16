#pragma once

// Levels bundled with the stub generator. Index 0 is the level produced for
// the all-zero latent vector. Mirrors data/fixtures/*.txt.

#include <array>
#include <string_view>

namespace lrqd {

inline constexpr std::array<std::string_view, 5> kFixtureLevels = {
    // 00_corridor.txt
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "B.-----######GBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n",
    // 01_platforms.txt
    "................................\n"
    "..G.........------........G.....\n"
    "bbbbbbb#bbbb......bbbbbbbb#bbbbb\n"
    ".......#..................#.....\n"
    ".......#.......G..........#.....\n"
    "bbbbbbbbbbbbbbbbbbbbb#bbbbbbbbbb\n"
    ".....................#..........\n"
    "....E......--------..#.....G....\n"
    "bbbbbbb#bbb........bbbbbbbb#bbbb\n"
    ".......#...................#....\n"
    "...G...#...................#....\n"
    "bbbbbbbbbbbbbb#bbbbbbbbbbbbbbbbb\n"
    "..............#.................\n"
    "..............#........E........\n"
    "BBBBBB#BBBBBBBBBBBB#BBBBBBBBBBBB\n"
    "......#............#............\n"
    "..G...#............#.......G....\n"
    "bbbbbbbbbbbb#bbbbbbbbbbbbbbbbbbb\n"
    "............#...................\n"
    "....E.......#.........G.........\n"
    "bbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n",
    // 02_ropes.txt
    "................................\n"
    "..----------------------------..\n"
    "..#..........................#..\n"
    "..#...G......G.......G.......#..\n"
    "bbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb\n"
    "................................\n"
    "....---------....---------......\n"
    "...#.........G..........#.......\n"
    "...#....................#.......\n"
    "BBBBBBBBBBBbbbbbbbbbBBBBBBBBBBBB\n"
    "................................\n"
    ".........E..........E...........\n"
    "bbbbbbb#bbbbbbbbbbbbbbbb#bbbbbbb\n"
    ".......#................#.......\n"
    "..G....#.......--.......#....G..\n"
    "BBBBBBBBBBBBBBB..BBBBBBBBBBBBBBB\n"
    "................................\n"
    "......----------------------....\n"
    ".....#......................#...\n"
    ".....#....G.........G.......#...\n"
    "bbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n",
    // 03_tower.txt
    "...............#................\n"
    "...............#......G.........\n"
    "BBBBBBBBBBBBBBB#BBBBBBBBBBBBBBBB\n"
    "...G...........#................\n"
    "bbbbbbbbbbb#bbb#bbbb#bbbbbbbbbbb\n"
    "...........#...#....#...........\n"
    "........G..#...#....#..G........\n"
    "bbbbbbbbbbbbbbb#bbbbbbbbbbbbbbbb\n"
    "...............#................\n"
    "..E.....------.#.------.....E...\n"
    "bbbbb#bbbbbbbbb#bbbbbbbbbb#bbbbb\n"
    ".....#.........#..........#.....\n"
    ".....#....G....#.....G....#.....\n"
    "BBBBBBBBBBBBBBB#BBBBBBBBBBBBBBBB\n"
    "...............#................\n"
    ".G.............#..............G.\n"
    "bbbbbbbbbbbbbbb#bbbbbbbbbbbbbbbb\n"
    "...............#................\n"
    "......E........#........E.......\n"
    "bbbbbbbbbbbbbbb#bbbbbbbbbbbbbbbb\n"
    "...............#.......G........\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n",
    // 04_chambers.txt
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "B..............BB..............B\n"
    "B....G.........BB.....G........B\n"
    "BbbbbbbbbbbbbbbBBbbbbbbbbbbbbbbB\n"
    "B..............BB..............B\n"
    "B...E..........BB..........E...B\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "B..............................B\n"
    "B.......--------------.........B\n"
    "B......#..............#........B\n"
    "B......#...G.....G....#........B\n"
    "BbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbB\n"
    "B..............................B\n"
    "B....E.....................E...B\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "B..............................B\n"
    "B..G...........................B\n"
    "BBBBBBBBBBBBBB#BBBBBBBBBBBBBBBBB\n"
    "B.............#................B\n"
    "B.............#......G.........B\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n"
    "BBBBBBBBBBBBBBBBBBBBBBBBBBBBBBBB\n",
};

} // namespace lrqd
