#pragma once

// MAP-Elites over generator latent vectors.
//
// Behaviour space: (enemy count, treasure count, ground fraction), 10 bins each.
// Fitness: max(A* path cost, connectivity).

#include "lrqd/error.hpp"
#include "lrqd/generator.hpp"
#include "lrqd/level.hpp"
#include "lrqd/parallel.hpp"
#include "lrqd/rng.hpp"
#include "lrqd/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace lrqd {

inline constexpr int kBinsPerAxis = 10;
inline constexpr int kArchiveCells = kBinsPerAxis * kBinsPerAxis * kBinsPerAxis;

struct Genotype {
    LatentVector latent;
    std::int64_t id = 0;
    std::vector<std::int64_t> parent_ids;

    friend bool operator==(const Genotype&, const Genotype&) = default;
};

struct BinIndex {
    int enemy = 0;
    int treasure = 0;
    int ground = 0;

    [[nodiscard]] constexpr int flat() const noexcept { return (enemy * kBinsPerAxis + treasure) * kBinsPerAxis + ground; }
    static constexpr BinIndex from_flat(int i) noexcept
    {
        return { i / (kBinsPerAxis * kBinsPerAxis), (i / kBinsPerAxis) % kBinsPerAxis, i % kBinsPerAxis };
    }
    [[nodiscard]] constexpr bool valid() const noexcept
    {
        return enemy >= 0 && enemy < kBinsPerAxis && treasure >= 0 && treasure < kBinsPerAxis && ground >= 0
            && ground < kBinsPerAxis;
    }

    friend constexpr bool operator==(const BinIndex&, const BinIndex&) = default;
};

/// Enemies in pairs {0,1},{2,3},...,{16,17},{18+}; treasure in fives up to 44
/// then 45+; ground fraction in tenths with 1.0 folded into the last decile.
inline BinIndex bin_for(const LevelStats& stats) noexcept
{
    const int ground = static_cast<int>(std::floor(stats.ground_fraction * 10.0));
    return { std::min(stats.enemy_count / 2, 9), std::min(stats.treasure_count / 5, 9), std::clamp(ground, 0, 9) };
}

inline double fitness(const SolveResult& result) noexcept
{
    return std::max(static_cast<double>(result.path_cost), result.connectivity);
}

inline constexpr double kLatentMin = -1.0;
inline constexpr double kLatentMax = 1.0;
inline constexpr double kDefaultEta = 20.0;

/// Bounded polynomial mutation of a single gene for a given uniform draw `u`.
inline double mutate_gene(double x, double u, double eta, double lo = kLatentMin, double hi = kLatentMax) noexcept
{
    const double range = hi - lo;
    const double power = 1.0 / (eta + 1.0);
    double delta_q = 0.0;
    if (u < 0.5) {
        const double xy = 1.0 - (x - lo) / range;
        const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
        delta_q = std::pow(val, power) - 1.0;
    } else {
        const double xy = 1.0 - (hi - x) / range;
        const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
        delta_q = 1.0 - std::pow(val, power);
    }
    return std::clamp(x + delta_q * range, lo, hi);
}

/// Each gene is mutated with probability `rate`. Two draws per mutated gene
/// (the gate, then the polynomial draw), one draw per untouched gene.
inline LatentVector polynomial_mutation(const LatentVector& latent, CounterRng& rng, double rate = 0.3,
    double eta = kDefaultEta)
{
    auto values = latent.values();
    for (auto& x : values) {
        if (rng.uniform() < rate) {
            x = mutate_gene(x, rng.uniform(), eta);
        }
    }
    return LatentVector(values);
}

/// child1 = a[0:cut] ++ b[cut:], child2 = b[0:cut] ++ a[cut:], cut in 1..9.
inline std::pair<LatentVector, LatentVector> single_point_crossover(const LatentVector& a, const LatentVector& b, int cut)
{
    if (cut < 1 || cut >= kLatentSize) {
        throw Error(ErrorCode::InvalidConfig, "crossover cut must be in 1..9, got " + std::to_string(cut));
    }
    auto c1 = a.values();
    auto c2 = b.values();
    for (std::size_t i = static_cast<std::size_t>(cut); i < kLatentSize; ++i) {
        std::swap(c1[i], c2[i]);
    }
    return { LatentVector(c1), LatentVector(c2) };
}

struct EvalRecord {
    Genotype genotype;
    LevelStats stats;
    SolveResult solve;
    std::optional<Position> spawn;
    double fitness = 0.0;
    BinIndex bin;
    std::int64_t eval_index = 0;
    // Kept separately so records read back from disk (without the action
    // list) still report it.
    int action_count = 0;
};

/// Generates, solves and scores one genotype. A level without an Empty tile
/// has no spawn point and is scored as unbeatable with connectivity 0.
inline EvalRecord evaluate(const Genotype& genotype, const LevelGenerator& generator, int budget = kDefaultStateBudget)
{
    EvalRecord rec;
    rec.genotype = genotype;
    const Level level = generator.generate(genotype.latent);
    rec.stats = compute_stats(level);
    rec.bin = bin_for(rec.stats);
    try {
        rec.spawn = select_spawn(level, genotype.latent[0]);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoEmptyTile) {
            throw;
        }
    }
    if (rec.spawn) {
        rec.solve = astar_solve(level, *rec.spawn, budget);
        rec.action_count = rec.solve.action_count();
    }
    rec.fitness = fitness(rec.solve);
    return rec;
}

struct ArchiveMetrics {
    int occupied = 0;
    int beatable = 0;
    double percent_beatable = 0.0;

    friend bool operator==(const ArchiveMetrics&, const ArchiveMetrics&) = default;
};

enum class Placement { NewCell, Replaced, Rejected };

/// 10x10x10 grid of elites. A cell's occupant is replaced only by a strictly
/// fitter record.
class Archive {
public:
    Placement place(EvalRecord record)
    {
        const int cell = record.bin.flat();
        auto& slot = cells_[static_cast<std::size_t>(cell)];
        const bool beatable = record.solve.beatable;
        if (!slot) {
            occupied_order_.push_back(cell);
            ++occupied_;
            beatable_ += beatable ? 1 : 0;
            slot = std::move(record);
            return Placement::NewCell;
        }
        if (record.fitness > slot->fitness) {
            beatable_ += (beatable ? 1 : 0) - (slot->solve.beatable ? 1 : 0);
            slot = std::move(record);
            return Placement::Replaced;
        }
        return Placement::Rejected;
    }

    [[nodiscard]] const std::optional<EvalRecord>& at(BinIndex bin) const noexcept
    {
        return cells_[static_cast<std::size_t>(bin.flat())];
    }
    [[nodiscard]] const std::optional<EvalRecord>& at(int flat) const noexcept
    {
        return cells_[static_cast<std::size_t>(flat)];
    }

    /// Occupied cells in the order they were first filled.
    [[nodiscard]] const std::vector<int>& occupied_cells() const noexcept { return occupied_order_; }

    [[nodiscard]] int occupied() const noexcept { return occupied_; }
    [[nodiscard]] int beatable() const noexcept { return beatable_; }

    [[nodiscard]] std::int64_t evaluations() const noexcept { return evaluations_; }
    void count_evaluation() noexcept { ++evaluations_; }

private:
    std::array<std::optional<EvalRecord>, kArchiveCells> cells_ {};
    std::vector<int> occupied_order_;
    int occupied_ = 0;
    int beatable_ = 0;
    std::int64_t evaluations_ = 0;
};

inline ArchiveMetrics archive_metrics(const Archive& archive) noexcept
{
    ArchiveMetrics m { archive.occupied(), archive.beatable(), 0.0 };
    if (m.occupied > 0) {
        m.percent_beatable = static_cast<double>(m.beatable) / static_cast<double>(m.occupied);
    }
    return m;
}

/// Recomputes the metrics from a full grid scan instead of the counters.
inline ArchiveMetrics scan_metrics(const Archive& archive) noexcept
{
    ArchiveMetrics m;
    for (int i = 0; i < kArchiveCells; ++i) {
        if (const auto& cell = archive.at(i)) {
            ++m.occupied;
            m.beatable += cell->solve.beatable ? 1 : 0;
        }
    }
    if (m.occupied > 0) {
        m.percent_beatable = static_cast<double>(m.beatable) / static_cast<double>(m.occupied);
    }
    return m;
}

struct MapElitesConfig {
    std::int64_t total_evals = 50'000;
    std::int64_t init_size = 100;
    double crossover_rate = 0.5;
    double mutation_rate = 0.3;
    double eta = kDefaultEta;
    int solver_budget = kDefaultStateBudget;
    std::int64_t log_every = 1000;
    std::uint64_t seed = 0;
    // Offspring generated per archive read; 1 is fully steady-state. Results
    // depend on batch_size but never on workers.
    std::int64_t batch_size = 1;
    std::size_t workers = 1;

    void validate() const
    {
        auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
        if (init_size < 1) fail("init_size must be >= 1");
        if (total_evals < init_size) fail("total_evals must be >= init_size");
        if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) fail("crossover_rate must be in [0, 1]");
        if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) fail("mutation_rate must be in [0, 1]");
        if (!(eta >= 0.0)) fail("eta must be >= 0");
        if (solver_budget < 1) fail("solver_budget must be >= 1");
        if (log_every < 1) fail("log_every must be >= 1");
        if (batch_size < 1) fail("batch_size must be >= 1");
    }
};

struct Snapshot {
    std::int64_t eval_index = 0;
    ArchiveMetrics metrics;

    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct MapElitesRun {
    Archive archive;
    std::vector<Snapshot> snapshots;
};

/// Offspring proposal for phase 2. Draw order from `rng`:
///   crossover gate; then either (parent a, parent b, cut, child pick) or
///   (parent); then the per-gene mutation draws.
inline Genotype propose_offspring(const Archive& archive, CounterRng& rng, const MapElitesConfig& config)
{
    const auto& occupied = archive.occupied_cells();
    auto pick_parent = [&]() -> const EvalRecord& { return *archive.at(occupied[rng.below(occupied.size())]); };

    Genotype child;
    if (rng.uniform() < config.crossover_rate) {
        const auto& a = pick_parent();
        const auto& b = pick_parent();
        const int cut = 1 + static_cast<int>(rng.below(kLatentSize - 1));
        auto [c1, c2] = single_point_crossover(a.genotype.latent, b.genotype.latent, cut);
        child.latent = rng.uniform() < 0.5 ? c1 : c2;
        child.parent_ids = { a.genotype.id, b.genotype.id };
    } else {
        const auto& p = pick_parent();
        child.latent = p.genotype.latent;
        child.parent_ids = { p.genotype.id };
    }
    child.latent = polynomial_mutation(child.latent, rng, config.mutation_rate, config.eta);
    return child;
}

inline LatentVector random_latent(CounterRng& rng)
{
    LatentVector::Values v {};
    for (auto& x : v) {
        x = kLatentMin + (kLatentMax - kLatentMin) * rng.uniform();
    }
    return LatentVector(v);
}

using SnapshotObserver = std::function<void(const Snapshot&, const Archive&)>;

/// Phase 1 evaluates init_size uniform random genotypes; phase 2 breeds from
/// uniformly sampled occupied bins until total_evals evaluations have run.
/// A snapshot is taken after every log_every-th evaluation and after the last.
inline MapElitesRun run_map_elites(const MapElitesConfig& config, const LevelGenerator& generator,
    const SnapshotObserver& observer = {})
{
    config.validate();
    MapElitesRun run;
    CounterRng rng = CounterRng(config.seed).split(0);

    auto place_all = [&](std::vector<Genotype>& batch) {
        std::vector<EvalRecord> records(batch.size());
        parallel_for(batch.size(), config.workers,
            [&](std::size_t i) { records[i] = evaluate(batch[i], generator, config.solver_budget); });
        for (auto& rec : records) {
            run.archive.count_evaluation();
            rec.eval_index = run.archive.evaluations();
            run.archive.place(std::move(rec));
            const auto k = run.archive.evaluations();
            if (k % config.log_every == 0 || k == config.total_evals) {
                Snapshot snap { k, archive_metrics(run.archive) };
                run.snapshots.push_back(snap);
                if (observer) {
                    observer(snap, run.archive);
                }
            }
        }
    };

    std::int64_t next_id = 1;
    {
        std::vector<Genotype> batch;
        for (std::int64_t i = 0; i < config.init_size; ++i) {
            batch.push_back({ random_latent(rng), next_id++, {} });
        }
        place_all(batch);
    }
    while (run.archive.evaluations() < config.total_evals) {
        const auto n = std::min(config.batch_size, config.total_evals - run.archive.evaluations());
        std::vector<Genotype> batch;
        for (std::int64_t i = 0; i < n; ++i) {
            auto child = propose_offspring(run.archive, rng, config);
            child.id = next_id++;
            batch.push_back(std::move(child));
        }
        place_all(batch);
    }
    return run;
}

} // namespace lrqd
