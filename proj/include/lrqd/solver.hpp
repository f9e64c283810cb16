#pragma once

// Simplified Lode Runner movement model and A* beatability search.
//
// Movement rules:
//   * A player is supported when the cell below is ground or a ladder, when
//     standing in a ladder or rope cell, or when on the bottom row.
//   * An unsupported player can only fall one row (cost 1).
//   * A supported player may step left or right into any non-ground cell,
//     climb up out of a ladder cell, move down into a non-ground cell below
//     (ladder descent, or letting go of a rope), or dig straight down into
//     diggable ground when the dig target has ground on its left or right.
//   * Digging costs 4, everything else costs 1. Dug cells are not remembered;
//     a dig is modelled as passing through the ground tile.
//   * Gold and enemy tiles behave like empty space. Enemies do not move.

#include "lrqd/error.hpp"
#include "lrqd/level.hpp"
#include "lrqd/splitmix.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <queue>
#include <string_view>
#include <vector>

namespace lrqd {

inline constexpr int kDefaultStateBudget = 100'000;
inline constexpr int kStepCost = 1;
inline constexpr int kDigCost = 4;

struct Position {
    int row = 0;
    int col = 0;

    friend bool operator==(const Position&, const Position&) = default;
};

constexpr int manhattan(Position a, Position b) noexcept
{
    return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

enum class Move : std::uint8_t { Left, Right, Up, Down, Fall, Dig };

constexpr std::string_view to_string(Move m) noexcept
{
    switch (m) {
    case Move::Left: return "left";
    case Move::Right: return "right";
    case Move::Up: return "up";
    case Move::Down: return "down";
    case Move::Fall: return "fall";
    case Move::Dig: return "dig";
    }
    return "?";
}

struct PositionMove {
    Position to;
    int cost = kStepCost;
    Move move = Move::Left;
};

namespace detail {

    /// Fixed-capacity move list (at most five entries).
    struct MoveList {
        std::array<PositionMove, 5> items {};
        std::size_t count = 0;

        void push_back(const PositionMove& m) noexcept { items[count++] = m; }
        [[nodiscard]] const PositionMove* begin() const noexcept { return items.data(); }
        [[nodiscard]] const PositionMove* end() const noexcept { return items.data() + count; }
    };

    inline MoveList moves_from(const Level& level, Position p)
    {
        MoveList out;
        const auto tile = level.at(p.row, p.col);
        const bool bottom = p.row == kRows - 1;
        const auto below = bottom ? TileType::SolidGround : level.at(p.row + 1, p.col);

        const bool supported = bottom || is_ground(below) || below == TileType::Ladder || tile == TileType::Ladder
            || tile == TileType::Rope;

        if (!supported) {
            out.push_back({ { p.row + 1, p.col }, kStepCost, Move::Fall });
            return out;
        }

        auto open = [&](int r, int c) { return Level::in_bounds(r, c) && !is_ground(level.at(r, c)); };

        if (open(p.row, p.col - 1)) {
            out.push_back({ { p.row, p.col - 1 }, kStepCost, Move::Left });
        }
        if (open(p.row, p.col + 1)) {
            out.push_back({ { p.row, p.col + 1 }, kStepCost, Move::Right });
        }
        if (tile == TileType::Ladder && open(p.row - 1, p.col)) {
            out.push_back({ { p.row - 1, p.col }, kStepCost, Move::Up });
        }
        if (!bottom && open(p.row + 1, p.col)) {
            out.push_back({ { p.row + 1, p.col }, kStepCost, Move::Down });
        }
        if (!bottom && below == TileType::DiggableGround) {
            auto ground = [&](int c) { return c >= 0 && c < kCols && is_ground(level.at(p.row + 1, c)); };
            if (ground(p.col - 1) || ground(p.col + 1)) {
                out.push_back({ { p.row + 1, p.col }, kDigCost, Move::Dig });
            }
        }
        return out;
    }

} // namespace detail

/// Transitions available from `p`, ignoring treasure. At most five entries.
inline std::vector<PositionMove> position_moves(const Level& level, Position p)
{
    const auto moves = detail::moves_from(level, p);
    return { moves.begin(), moves.end() };
}

/// Row-major enumeration of the Gold tiles of a level.
class TreasureIndex {
public:
    explicit TreasureIndex(const Level& level)
    {
        index_.fill(-1);
        for (int r = 0; r < kRows; ++r) {
            for (int c = 0; c < kCols; ++c) {
                if (level.at(r, c) == TileType::Gold) {
                    index_[Level::index(r, c)] = static_cast<int>(positions_.size());
                    positions_.push_back({ r, c });
                }
            }
        }
    }

    [[nodiscard]] int count() const noexcept { return static_cast<int>(positions_.size()); }
    [[nodiscard]] int at(Position p) const noexcept { return index_[Level::index(p.row, p.col)]; }
    [[nodiscard]] const std::vector<Position>& positions() const noexcept { return positions_; }
    [[nodiscard]] std::size_t words() const noexcept { return (positions_.size() + 63) / 64; }

private:
    std::array<int, kCells> index_ {};
    std::vector<Position> positions_;
};

/// Position plus the set of treasures still to collect, one bit per treasure
/// in row-major order.
struct SearchState {
    Position pos;
    std::vector<std::uint64_t> remaining;

    [[nodiscard]] bool has(int treasure) const noexcept
    {
        return (remaining[static_cast<std::size_t>(treasure) / 64] >> (treasure % 64)) & 1U;
    }
    void clear(int treasure) noexcept
    {
        remaining[static_cast<std::size_t>(treasure) / 64] &= ~(std::uint64_t { 1 } << (treasure % 64));
    }
    [[nodiscard]] bool done() const noexcept
    {
        return std::all_of(remaining.begin(), remaining.end(), [](std::uint64_t w) { return w == 0; });
    }

    friend bool operator==(const SearchState&, const SearchState&) = default;
};

inline SearchState initial_state(const TreasureIndex& treasures, Position spawn)
{
    SearchState s { spawn, std::vector<std::uint64_t>(treasures.words(), 0) };
    for (int t = 0; t < treasures.count(); ++t) {
        s.remaining[static_cast<std::size_t>(t) / 64] |= std::uint64_t { 1 } << (t % 64);
    }
    if (const int t = treasures.at(spawn); t >= 0) {
        s.clear(t);
    }
    return s;
}

struct Successor {
    SearchState state;
    int cost = kStepCost;
    Move move = Move::Left;
};

inline std::vector<Successor> successors(const Level& level, const TreasureIndex& treasures, const SearchState& state)
{
    std::vector<Successor> out;
    for (const auto& m : position_moves(level, state.pos)) {
        Successor s { state, m.cost, m.move };
        s.state.pos = m.to;
        if (const int t = treasures.at(m.to); t >= 0) {
            s.state.clear(t);
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<Successor> successors(const Level& level, const SearchState& state)
{
    return successors(level, TreasureIndex(level), state);
}

/// Spawn is drawn from the Empty tiles (row-major) with one splitmix64 draw
/// seeded by the bit pattern of `first_latent`.
inline Position select_spawn(const Level& level, double first_latent)
{
    std::vector<Position> empties;
    for (int r = 0; r < kRows; ++r) {
        for (int c = 0; c < kCols; ++c) {
            if (level.at(r, c) == TileType::Empty) {
                empties.push_back({ r, c });
            }
        }
    }
    if (empties.empty()) {
        throw Error(ErrorCode::NoEmptyTile, "level has no empty tile to spawn on");
    }
    const auto seed = std::bit_cast<std::uint64_t>(first_latent);
    const auto draw = SplitMix64(seed).next();
    return empties[draw % empties.size()];
}

/// Fraction of traversable (non-ground) tiles reachable from `spawn`.
inline double connectivity(const Level& level, Position spawn)
{
    std::array<bool, kCells> seen {};
    std::vector<Position> stack { spawn };
    seen[Level::index(spawn.row, spawn.col)] = true;
    while (!stack.empty()) {
        const auto p = stack.back();
        stack.pop_back();
        for (const auto& m : detail::moves_from(level, p)) {
            auto& flag = seen[Level::index(m.to.row, m.to.col)];
            if (!flag) {
                flag = true;
                stack.push_back(m.to);
            }
        }
    }
    int traversable = 0;
    int reached = 0;
    for (std::size_t i = 0; i < kCells; ++i) {
        if (!is_ground(level.tiles()[i])) {
            ++traversable;
            if (seen[i]) {
                ++reached;
            }
        }
    }
    return traversable == 0 ? 0.0 : static_cast<double>(reached) / static_cast<double>(traversable);
}

struct SolveResult {
    bool beatable = false;
    int path_cost = -1;
    std::vector<Move> actions;
    int expanded_states = 0;
    double connectivity = 0.0;
    bool budget_exhausted = false;

    [[nodiscard]] int action_count() const noexcept { return static_cast<int>(actions.size()); }

    friend bool operator==(const SolveResult&, const SolveResult&) = default;
};

namespace detail {

    // Open-addressing intern table for search states. Every state is stored
    // once as (position, remaining-bits) in flat arrays and referred to by id.
    class StateTable {
    public:
        explicit StateTable(std::size_t words)
            : words_(words)
            , slots_(1024, kEmpty)
        {
        }

        [[nodiscard]] std::size_t size() const noexcept { return positions_.size(); }
        [[nodiscard]] Position position(std::uint32_t id) const noexcept { return positions_[id]; }
        [[nodiscard]] const std::uint64_t* bits(std::uint32_t id) const noexcept { return &pool_[id * words_]; }

        // Returns (id, inserted).
        std::pair<std::uint32_t, bool> intern(Position p, const std::uint64_t* bits)
        {
            if ((positions_.size() + 1) * 2 > slots_.size()) {
                grow();
            }
            const auto h = hash(p, bits);
            auto mask = slots_.size() - 1;
            for (auto i = h & mask;; i = (i + 1) & mask) {
                const auto id = slots_[i];
                if (id == kEmpty) {
                    const auto new_id = static_cast<std::uint32_t>(positions_.size());
                    positions_.push_back(p);
                    pool_.insert(pool_.end(), bits, bits + words_);
                    slots_[i] = new_id;
                    return { new_id, true };
                }
                if (positions_[id] == p && std::equal(bits, bits + words_, &pool_[id * words_])) {
                    return { id, false };
                }
            }
        }

    private:
        static constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();

        [[nodiscard]] std::size_t hash(Position p, const std::uint64_t* bits) const noexcept
        {
            std::uint64_t h = splitmix64_mix(static_cast<std::uint64_t>(p.row * kCols + p.col));
            for (std::size_t w = 0; w < words_; ++w) {
                h = splitmix64_mix(h ^ bits[w]);
            }
            return static_cast<std::size_t>(h);
        }

        void grow()
        {
            std::vector<std::uint32_t> fresh(slots_.size() * 2, kEmpty);
            const auto mask = fresh.size() - 1;
            for (std::uint32_t id = 0; id < positions_.size(); ++id) {
                auto i = hash(positions_[id], &pool_[id * words_]) & mask;
                while (fresh[i] != kEmpty) {
                    i = (i + 1) & mask;
                }
                fresh[i] = id;
            }
            slots_ = std::move(fresh);
        }

        std::size_t words_;
        std::vector<Position> positions_;
        std::vector<std::uint64_t> pool_;
        std::vector<std::uint32_t> slots_;
    };

} // namespace detail

/// A* over (position, remaining treasure) states. The heuristic is the
/// Manhattan distance to the farthest remaining treasure, which is consistent
/// because every move changes the position by one cell at cost >= 1.
/// At most `budget` states are expanded.
inline SolveResult astar_solve(const Level& level, Position spawn, int budget = kDefaultStateBudget)
{
    SolveResult result;
    result.connectivity = connectivity(level, spawn);

    const TreasureIndex treasures(level);
    const auto start = initial_state(treasures, spawn);
    if (start.done()) {
        result.beatable = true;
        result.path_cost = 0;
        return result;
    }

    const std::size_t words = treasures.words();
    detail::StateTable table(words);

    struct Node {
        int g = 0;
        std::uint32_t parent = 0;
        Move move = Move::Left;
        bool closed = false;
    };
    std::vector<Node> nodes;

    struct Entry {
        int f;
        int g;
        std::uint64_t seq;
        std::uint32_t id;
    };
    // Lowest f first; among equal f prefer deeper nodes, then insertion order.
    auto worse = [](const Entry& a, const Entry& b) {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;
        return a.seq > b.seq;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);
    std::uint64_t seq = 0;

    // The farthest Manhattan distance to a point set only depends on the
    // extremes of row+col and row-col over the set, so each node keeps those
    // four values and the heuristic is O(1) per push.
    using Extremes = std::array<int, 4>; // max(r+c), -min(r+c), max(r-c), -min(r-c)
    constexpr int kNone = -(1 << 20);
    auto extremes_of = [&](const std::uint64_t* bits) {
        Extremes e { kNone, kNone, kNone, kNone };
        for (std::size_t w = 0; w < words; ++w) {
            for (auto word = bits[w]; word != 0; word &= word - 1) {
                const auto t = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
                const auto q = treasures.positions()[t];
                e[0] = std::max(e[0], q.row + q.col);
                e[1] = std::max(e[1], -(q.row + q.col));
                e[2] = std::max(e[2], q.row - q.col);
                e[3] = std::max(e[3], -(q.row - q.col));
            }
        }
        return e;
    };
    auto heuristic = [](Position p, const Extremes& e) {
        const int sum = p.row + p.col;
        const int diff = p.row - p.col;
        return std::max({ 0, e[0] - sum, e[1] + sum, e[2] - diff, e[3] + diff });
    };
    std::vector<Extremes> extremes;

    {
        auto [id, inserted] = table.intern(start.pos, start.remaining.data());
        nodes.push_back({ 0, id, Move::Left, false });
        extremes.push_back(extremes_of(start.remaining.data()));
        open.push({ heuristic(start.pos, extremes.back()), 0, seq++, id });
    }

    std::vector<std::uint64_t> current(words);
    std::vector<std::uint64_t> scratch(words);
    while (!open.empty()) {
        const auto entry = open.top();
        open.pop();
        auto& node = nodes[entry.id];
        if (node.closed || entry.g != node.g) {
            continue;
        }
        if (result.expanded_states >= budget) {
            result.budget_exhausted = true;
            return result;
        }
        node.closed = true;
        ++result.expanded_states;

        const auto* stored = table.bits(entry.id);
        std::copy(stored, stored + words, current.begin());
        if (std::all_of(current.begin(), current.end(), [](std::uint64_t w) { return w == 0; })) {
            result.beatable = true;
            result.path_cost = node.g;
            for (auto id = entry.id; id != 0; id = nodes[id].parent) {
                result.actions.push_back(nodes[id].move);
            }
            std::reverse(result.actions.begin(), result.actions.end());
            return result;
        }

        const auto pos = table.position(entry.id);
        const int g = node.g;
        for (const auto& m : detail::moves_from(level, pos)) {
            scratch = current;
            const int t = treasures.at(m.to);
            const bool collected = t >= 0 && ((scratch[static_cast<std::size_t>(t) / 64] >> (t % 64)) & 1U);
            if (collected) {
                scratch[static_cast<std::size_t>(t) / 64] &= ~(std::uint64_t { 1 } << (t % 64));
            }
            auto [id, inserted] = table.intern(m.to, scratch.data());
            const int ng = g + m.cost;
            if (inserted) {
                nodes.push_back({ ng, entry.id, m.move, false });
                extremes.push_back(collected ? extremes_of(scratch.data()) : extremes[entry.id]);
            } else if (nodes[id].closed || ng >= nodes[id].g) {
                continue;
            } else {
                nodes[id].g = ng;
                nodes[id].parent = entry.id;
                nodes[id].move = m.move;
            }
            open.push({ ng + heuristic(m.to, extremes[id]), ng, seq++, id });
        }
    }
    return result;
}

} // namespace lrqd
