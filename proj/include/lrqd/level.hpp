#pragma once

// Lode Runner tile vocabulary and the fixed-size level grid.

#include "lrqd/error.hpp"
#include "lrqd/volume.hpp"

#include "json.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lrqd {

enum class TileType : std::uint8_t {
    Empty = 0,
    Gold = 1,
    Enemy = 2,
    DiggableGround = 3,
    Ladder = 4,
    Rope = 5,
    SolidGround = 6,
};

inline constexpr int kTileTypeCount = 7;
inline constexpr int kRows = 22;
inline constexpr int kCols = 32;
inline constexpr int kCells = kRows * kCols;

inline constexpr std::array<char, kTileTypeCount> kVglcChars = { '.', 'G', 'E', 'b', '#', '-', 'B' };

constexpr char to_char(TileType t) noexcept { return kVglcChars[static_cast<std::size_t>(t)]; }
constexpr int to_code(TileType t) noexcept { return static_cast<int>(t); }

constexpr std::optional<TileType> tile_from_char(char c) noexcept
{
    for (std::size_t i = 0; i < kVglcChars.size(); ++i) {
        if (kVglcChars[i] == c) {
            return static_cast<TileType>(i);
        }
    }
    return std::nullopt;
}

constexpr std::optional<TileType> tile_from_code(int code) noexcept
{
    if (code < 0 || code >= kTileTypeCount) {
        return std::nullopt;
    }
    return static_cast<TileType>(code);
}

constexpr bool is_ground(TileType t) noexcept
{
    return t == TileType::DiggableGround || t == TileType::SolidGround;
}

/// A 22-row by 32-column level. The size is part of the type, so every Level
/// that exists has the right dimensions.
class Level {
public:
    using Grid = std::array<TileType, kCells>;

    Level() { tiles_.fill(TileType::Empty); }
    explicit Level(TileType fill) { tiles_.fill(fill); }
    explicit Level(const Grid& tiles)
        : tiles_(tiles)
    {
    }

    [[nodiscard]] TileType at(int row, int col) const noexcept { return tiles_[index(row, col)]; }
    void set(int row, int col, TileType t) noexcept { tiles_[index(row, col)] = t; }

    [[nodiscard]] const Grid& tiles() const noexcept { return tiles_; }

    static constexpr std::size_t index(int row, int col) noexcept
    {
        return static_cast<std::size_t>(row * kCols + col);
    }
    static constexpr bool in_bounds(int row, int col) noexcept
    {
        return row >= 0 && row < kRows && col >= 0 && col < kCols;
    }

    friend bool operator==(const Level&, const Level&) = default;

private:
    Grid tiles_ {};
};

struct LevelStats {
    int enemy_count = 0;
    int treasure_count = 0;
    double ground_fraction = 0.0;

    friend bool operator==(const LevelStats&, const LevelStats&) = default;
};

using TileHistogram = std::array<int, kTileTypeCount>;

/// Parses VGLC text. Accepts LF or CRLF line endings and an optional trailing
/// newline; anything else that is not exactly 22 lines of 32 symbols is rejected.
inline Level parse_vglc(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        start = end + 1;
    }

    if (lines.size() != kRows) {
        throw Error(ErrorCode::WrongDimensions,
            "expected " + std::to_string(kRows) + " lines, found " + std::to_string(lines.size()));
    }

    Level level;
    for (int r = 0; r < kRows; ++r) {
        const auto line = lines[static_cast<std::size_t>(r)];
        if (line.size() != kCols) {
            throw Error(ErrorCode::WrongDimensions,
                "line " + std::to_string(r + 1) + " has " + std::to_string(line.size()) + " characters, expected "
                    + std::to_string(kCols));
        }
        for (int c = 0; c < kCols; ++c) {
            const char ch = line[static_cast<std::size_t>(c)];
            auto tile = tile_from_char(ch);
            if (!tile) {
                throw Error(ErrorCode::UnknownCharacter,
                    std::string("character '") + ch + "' at line " + std::to_string(r + 1) + ", column "
                        + std::to_string(c + 1));
            }
            level.set(r, c, *tile);
        }
    }
    return level;
}

/// Inverse of parse_vglc: 22 LF-terminated lines.
inline std::string render_text(const Level& level)
{
    std::string out;
    out.reserve(static_cast<std::size_t>(kRows * (kCols + 1)));
    for (int r = 0; r < kRows; ++r) {
        for (int c = 0; c < kCols; ++c) {
            out.push_back(to_char(level.at(r, c)));
        }
        out.push_back('\n');
    }
    return out;
}

using IntGrid = std::array<std::array<int, kCols>, kRows>;

inline IntGrid to_int_grid(const Level& level)
{
    IntGrid grid {};
    for (int r = 0; r < kRows; ++r) {
        for (int c = 0; c < kCols; ++c) {
            grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = to_code(level.at(r, c));
        }
    }
    return grid;
}

inline Level from_int_grid(const IntGrid& grid)
{
    Level level;
    for (int r = 0; r < kRows; ++r) {
        for (int c = 0; c < kCols; ++c) {
            const int code = grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            auto tile = tile_from_code(code);
            if (!tile) {
                throw Error(ErrorCode::OutOfRangeCode,
                    "code " + std::to_string(code) + " at row " + std::to_string(r) + ", column " + std::to_string(c));
            }
            level.set(r, c, *tile);
        }
    }
    return level;
}

inline nlohmann::json to_json_grid(const Level& level)
{
    auto grid = nlohmann::json::array();
    for (const auto& row : to_int_grid(level)) {
        grid.push_back(row);
    }
    return grid;
}

inline Level from_json_grid(const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != kRows) {
        throw Error(ErrorCode::WrongDimensions, "JSON grid must be an array of " + std::to_string(kRows) + " rows");
    }
    IntGrid grid {};
    for (std::size_t r = 0; r < kRows; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || row.size() != kCols) {
            throw Error(ErrorCode::WrongDimensions,
                "JSON grid row " + std::to_string(r) + " must have " + std::to_string(kCols) + " entries");
        }
        for (std::size_t c = 0; c < kCols; ++c) {
            if (!row[c].is_number_integer()) {
                throw Error(ErrorCode::OutOfRangeCode,
                    "non-integer entry at row " + std::to_string(r) + ", column " + std::to_string(c));
            }
            grid[r][c] = row[c].get<int>();
        }
    }
    return from_int_grid(grid);
}

/// Argmax over the 7 channels for every cell of the top-left 22x32 crop.
/// Ties go to the lowest tile code.
inline Level decode_one_hot(const Volume& volume)
{
    if (volume.channels() != kTileTypeCount || volume.height() < kRows || volume.width() < kCols) {
        throw Error(ErrorCode::WrongDimensions, "activation volume must be at least 7x22x32");
    }
    for (float v : volume.data()) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteActivation, "activation volume contains NaN or infinity");
        }
    }
    Level level;
    for (int r = 0; r < kRows; ++r) {
        for (int c = 0; c < kCols; ++c) {
            std::size_t best = 0;
            float best_value = volume(0, static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            for (std::size_t ch = 1; ch < kTileTypeCount; ++ch) {
                const float v = volume(ch, static_cast<std::size_t>(r), static_cast<std::size_t>(c));
                if (v > best_value) {
                    best_value = v;
                    best = ch;
                }
            }
            level.set(r, c, static_cast<TileType>(best));
        }
    }
    return level;
}

inline TileHistogram histogram(const Level& level)
{
    TileHistogram h {};
    for (auto t : level.tiles()) {
        ++h[static_cast<std::size_t>(t)];
    }
    return h;
}

inline LevelStats compute_stats(const Level& level)
{
    const auto h = histogram(level);
    LevelStats s;
    s.enemy_count = h[to_code(TileType::Enemy)];
    s.treasure_count = h[to_code(TileType::Gold)];
    const int ground = h[to_code(TileType::DiggableGround)] + h[to_code(TileType::SolidGround)];
    s.ground_fraction = static_cast<double>(ground) / static_cast<double>(kCells);
    return s;
}

} // namespace lrqd
