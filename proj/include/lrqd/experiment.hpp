#pragma once

// Batch experiments: training-set conversion, multi-run evolution with
// confidence intervals, and fitness heatmaps.

#include "lrqd/archive_io.hpp"
#include "lrqd/error.hpp"
#include "lrqd/generator.hpp"
#include "lrqd/level.hpp"
#include "lrqd/map_elites.hpp"
#include "lrqd/parallel.hpp"
#include "lrqd/stub_generator.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace lrqd {

namespace fs = std::filesystem;

inline std::string read_text_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const fs::path& path, std::string_view text)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    out << text;
}

/// Reads a level from VGLC text or, when the file starts with '[', a JSON grid.
inline Level load_level_file(const fs::path& path)
{
    const auto text = read_text_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::WrongDimensions, path.string() + ": " + e.what());
        }
        return from_json_grid(j);
    }
    return parse_vglc(text);
}

/// Regular files of a directory, sorted lexicographically by file name.
inline std::vector<fs::path> corpus_files(const fs::path& dir)
{
    if (!fs::is_directory(dir)) {
        throw Error(ErrorCode::Io, dir.string() + " is not a directory");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    return files;
}

struct FirstN {
    std::size_t count = 0;
};
struct LevelIds {
    std::vector<std::size_t> ids; // 1-based corpus positions
};
using SubsetSpec = std::variant<FirstN, LevelIds>;

/// Parses the selected corpus levels into a training-set JSON array.
inline nlohmann::json convert_corpus(const fs::path& vglc_dir, const SubsetSpec& subset)
{
    const auto files = corpus_files(vglc_dir);
    std::vector<std::size_t> picks;
    if (const auto* first = std::get_if<FirstN>(&subset)) {
        if (first->count == 0) {
            throw Error(ErrorCode::InvalidConfig, "subset must select at least one level");
        }
        if (first->count > files.size()) {
            throw Error(ErrorCode::InvalidConfig,
                "asked for the first " + std::to_string(first->count) + " levels but the corpus has "
                    + std::to_string(files.size()));
        }
        for (std::size_t i = 0; i < first->count; ++i) {
            picks.push_back(i);
        }
    } else {
        const auto& ids = std::get<LevelIds>(subset).ids;
        if (ids.empty()) {
            throw Error(ErrorCode::InvalidConfig, "subset must select at least one level");
        }
        for (auto id : ids) {
            if (id < 1 || id > files.size()) {
                throw Error(ErrorCode::InvalidConfig,
                    "level id " + std::to_string(id) + " outside 1.." + std::to_string(files.size()));
            }
            picks.push_back(id - 1);
        }
    }

    auto out = nlohmann::json::array();
    for (auto i : picks) {
        try {
            out.push_back(to_json_grid(parse_vglc(read_text_file(files[i]))));
        } catch (const Error& e) {
            throw Error(e.code(), files[i].filename().string() + ": " + e.what());
        }
    }
    return out;
}

struct SeriesStat {
    double mean = 0.0;
    double ci95 = 0.0; // half-width, 1.96 * sd / sqrt(n); 0 for a single run
};

inline SeriesStat summarize(const std::vector<double>& xs)
{
    SeriesStat s;
    if (xs.empty()) {
        return s;
    }
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
    }
    const auto n = static_cast<double>(xs.size());
    s.mean = sum / n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) {
            ss += (x - s.mean) * (x - s.mean);
        }
        s.ci95 = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return s;
}

struct AggregateRow {
    std::int64_t eval_index = 0;
    int runs = 0;
    SeriesStat occupied;
    SeriesStat beatable;
    SeriesStat percent_beatable;
};

inline std::vector<AggregateRow> aggregate_runs(const std::vector<std::vector<Snapshot>>& runs)
{
    if (runs.empty()) {
        return {};
    }
    const auto n = runs.front().size();
    for (const auto& r : runs) {
        if (r.size() != n) {
            throw Error(ErrorCode::ArchiveSchemaMismatch, "runs have different snapshot counts");
        }
    }
    std::vector<AggregateRow> rows;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> occ, beat, pct;
        for (const auto& r : runs) {
            if (r[i].eval_index != runs.front()[i].eval_index) {
                throw Error(ErrorCode::ArchiveSchemaMismatch, "runs disagree on snapshot eval_index");
            }
            occ.push_back(r[i].metrics.occupied);
            beat.push_back(r[i].metrics.beatable);
            pct.push_back(r[i].metrics.percent_beatable);
        }
        rows.push_back({ runs.front()[i].eval_index, static_cast<int>(runs.size()), summarize(occ), summarize(beat),
            summarize(pct) });
    }
    return rows;
}

inline void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out)
{
    out << "eval_index,runs,occupied_mean,occupied_ci95,beatable_mean,beatable_ci95,percent_beatable_mean,"
           "percent_beatable_ci95\n";
    for (const auto& r : rows) {
        out << r.eval_index << ',' << r.runs << ',' << format_real(r.occupied.mean) << ','
            << format_real(r.occupied.ci95) << ',' << format_real(r.beatable.mean) << ','
            << format_real(r.beatable.ci95) << ',' << format_real(r.percent_beatable.mean) << ','
            << format_real(r.percent_beatable.ci95) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Heatmaps

struct HeatmapCell {
    int occupancy = 0; // number of archives with an elite in this cell
    double mean_fitness = 0.0;
};

/// Per-cell mean elite fitness, averaged only over the archives that occupy
/// the cell.
class Heatmap {
public:
    explicit Heatmap(const std::vector<Archive>& archives)
    {
        if (archives.empty()) {
            throw Error(ErrorCode::InvalidConfig, "a heatmap needs at least one archive");
        }
        std::array<double, kArchiveCells> sums {};
        for (const auto& a : archives) {
            for (int i = 0; i < kArchiveCells; ++i) {
                if (const auto& rec = a.at(i)) {
                    sums[static_cast<std::size_t>(i)] += rec->fitness;
                    ++cells_[static_cast<std::size_t>(i)].occupancy;
                }
            }
        }
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            if (cells_[i].occupancy > 0) {
                cells_[i].mean_fitness = sums[i] / cells_[i].occupancy;
            }
        }
        archives_ = static_cast<int>(archives.size());
    }

    [[nodiscard]] const HeatmapCell& at(BinIndex bin) const noexcept { return cells_[static_cast<std::size_t>(bin.flat())]; }
    [[nodiscard]] int archives() const noexcept { return archives_; }

private:
    std::array<HeatmapCell, kArchiveCells> cells_ {};
    int archives_ = 0;
};

/// Rows run ground bin 0..9; within a ground bin, treasure from 9 down to 0
/// (so treasure grows upward when drawn), then enemy 0..9. Empty cells have
/// occupancy 0 and an empty mean_fitness field.
inline void write_heatmap_csv(const Heatmap& map, std::ostream& out)
{
    out << "ground_bin,treasure_bin,enemy_bin,occupancy,mean_fitness\n";
    for (int g = 0; g < kBinsPerAxis; ++g) {
        for (int t = kBinsPerAxis - 1; t >= 0; --t) {
            for (int e = 0; e < kBinsPerAxis; ++e) {
                const auto& cell = map.at({ e, t, g });
                out << g << ',' << t << ',' << e << ',' << cell.occupancy << ',';
                if (cell.occupancy > 0) {
                    out << format_real(cell.mean_fitness);
                }
                out << '\n';
            }
        }
    }
}

inline constexpr int kPgmEmpty = 255;

/// Fitness to gray level. Unbeatable fitness (connectivity, below 1) maps to
/// the dark band 16..64; beatable fitness f >= 1 maps to 80..239 on a log
/// scale saturating at f = 1024.
inline int fitness_intensity(double f)
{
    if (f < 1.0) {
        return 16 + static_cast<int>(std::floor(48.0 * std::clamp(f, 0.0, 1.0)));
    }
    const double t = std::min(1.0, std::log(f) / std::log(1024.0));
    return 80 + static_cast<int>(std::floor(159.0 * t));
}

inline constexpr int kPgmCellPixels = 8;
inline constexpr int kPgmPanelGap = 4;

/// Plain PGM (P2). Ten 80x80 panels stacked top to bottom by ground bin,
/// separated by 4-pixel white gaps. In each panel enemy bins run left to
/// right and treasure bins bottom to top. Empty cells are white (255).
inline void write_heatmap_pgm(const Heatmap& map, std::ostream& out)
{
    const int panel = kBinsPerAxis * kPgmCellPixels;
    const int width = panel;
    const int height = kBinsPerAxis * panel + (kBinsPerAxis - 1) * kPgmPanelGap;
    out << "P2\n" << width << ' ' << height << "\n255\n";
    for (int y = 0; y < height; ++y) {
        const int g = y / (panel + kPgmPanelGap);
        const int within = y % (panel + kPgmPanelGap);
        for (int x = 0; x < width; ++x) {
            int v = kPgmEmpty;
            if (within < panel) {
                const int t = kBinsPerAxis - 1 - within / kPgmCellPixels;
                const int e = x / kPgmCellPixels;
                const auto& cell = map.at({ e, t, g });
                if (cell.occupancy > 0) {
                    v = fitness_intensity(cell.mean_fitness);
                }
            }
            out << v << (x + 1 == width ? '\n' : ' ');
        }
    }
}

struct ReportPaths {
    fs::path csv;
    fs::path pgm;
};

inline ReportPaths write_report(const std::vector<Archive>& archives, const fs::path& out_dir, const std::string& stem = "heatmap")
{
    const Heatmap map(archives);
    std::ostringstream csv, pgm;
    write_heatmap_csv(map, csv);
    write_heatmap_pgm(map, pgm);
    ReportPaths paths { out_dir / (stem + ".csv"), out_dir / (stem + ".pgm") };
    write_text_file(paths.csv, csv.str());
    write_text_file(paths.pgm, pgm.str());
    return paths;
}

// ---------------------------------------------------------------------------
// Evolution experiments

struct GeneratorSource {
    std::string label;
    bool stub = true;
    fs::path manifest;
    fs::path blob;
};

inline std::unique_ptr<LevelGenerator> make_generator(const GeneratorSource& source)
{
    if (source.stub) {
        return std::make_unique<StubGenerator>();
    }
    return std::make_unique<NetworkGenerator>(load_weights(source.manifest, source.blob));
}

struct ExperimentConfig {
    std::vector<GeneratorSource> generators { GeneratorSource { "stub", true, {}, {} } };
    int runs = 30;
    MapElitesConfig evolution;
    fs::path output_dir = "out";

    void validate() const
    {
        if (runs < 1) {
            throw Error(ErrorCode::InvalidConfig, "runs must be >= 1");
        }
        if (generators.empty()) {
            throw Error(ErrorCode::InvalidConfig, "no generator configured");
        }
        std::set<std::string> labels;
        for (const auto& g : generators) {
            if (g.label.empty() || g.label.find_first_of("/\\") != std::string::npos || !labels.insert(g.label).second) {
                throw Error(ErrorCode::InvalidConfig, "generator labels must be unique plain names: '" + g.label + "'");
            }
        }
        evolution.validate();
    }
};

/// Reads an experiment config object. Relative paths resolve against `workspace`.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j, const fs::path& workspace)
{
    if (!j.is_object()) {
        throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
    }
    static const std::set<std::string> known { "generators", "runs", "total_evals", "init_size", "log_every",
        "crossover_rate", "mutation_rate", "eta", "solver_budget", "batch_size", "workers", "seed", "output" };
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
        }
    }
    auto resolve = [&](const fs::path& p) { return p.is_absolute() ? p : workspace / p; };

    ExperimentConfig c;
    try {
        if (j.contains("generators")) {
            c.generators.clear();
            for (const auto& [label, src] : j.at("generators").items()) {
                GeneratorSource g { label, true, {}, {} };
                if (src.is_string() && src.get<std::string>() == "stub") {
                    g.stub = true;
                } else if (src.is_object()) {
                    g.stub = false;
                    g.manifest = resolve(src.at("manifest").get<std::string>());
                    g.blob = resolve(src.at("blob").get<std::string>());
                } else {
                    throw Error(ErrorCode::InvalidConfig, "generator '" + label + "' must be \"stub\" or {manifest, blob}");
                }
                c.generators.push_back(std::move(g));
            }
        }
        auto& e = c.evolution;
        c.runs = j.value("runs", c.runs);
        e.total_evals = j.value("total_evals", e.total_evals);
        e.init_size = j.value("init_size", e.init_size);
        e.log_every = j.value("log_every", e.log_every);
        e.crossover_rate = j.value("crossover_rate", e.crossover_rate);
        e.mutation_rate = j.value("mutation_rate", e.mutation_rate);
        e.eta = j.value("eta", e.eta);
        e.solver_budget = j.value("solver_budget", e.solver_budget);
        e.batch_size = j.value("batch_size", e.batch_size);
        e.workers = j.value("workers", e.workers);
        e.seed = j.value("seed", e.seed);
        c.output_dir = resolve(j.value("output", std::string("out")));
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::InvalidConfig, ex.what());
    }
    return c;
}

inline fs::path run_directory(const fs::path& label_dir, int run)
{
    char name[32];
    std::snprintf(name, sizeof name, "run_%03d", run);
    return label_dir / name;
}

struct LabelResult {
    std::string label;
    std::vector<MapElitesRun> runs;
    std::vector<AggregateRow> aggregate;
    ReportPaths report;
};

/// Runs every configured generator `runs` times (run r seeded with seed + r)
/// and writes, under output_dir/<label>/:
///   run_NNN/archive.jsonl, run_NNN/metrics.csv, aggregate.csv,
///   heatmap.csv, heatmap.pgm
/// Independent runs execute in parallel on up to `workers` threads.
inline std::vector<LabelResult> run_experiment(const ExperimentConfig& config)
{
    config.validate();
    std::vector<LabelResult> results;
    for (const auto& source : config.generators) {
        const auto generator = make_generator(source);
        const fs::path label_dir = config.output_dir / source.label;

        LabelResult result { source.label, std::vector<MapElitesRun>(static_cast<std::size_t>(config.runs)), {}, {} };
        parallel_for(result.runs.size(), config.evolution.workers, [&](std::size_t r) {
            MapElitesConfig per_run = config.evolution;
            per_run.seed = config.evolution.seed + r;
            per_run.workers = 1;
            result.runs[r] = run_map_elites(per_run, *generator);
        });

        std::vector<std::vector<Snapshot>> series;
        std::vector<Archive> archives;
        for (std::size_t r = 0; r < result.runs.size(); ++r) {
            const auto dir = run_directory(label_dir, static_cast<int>(r));
            write_text_file(dir / "archive.jsonl", archive_to_jsonl(result.runs[r].archive));
            std::ostringstream metrics;
            write_metrics_csv(result.runs[r].snapshots, metrics);
            write_text_file(dir / "metrics.csv", metrics.str());
            series.push_back(result.runs[r].snapshots);
            archives.push_back(result.runs[r].archive);
        }
        result.aggregate = aggregate_runs(series);
        std::ostringstream agg;
        write_aggregate_csv(result.aggregate, agg);
        write_text_file(label_dir / "aggregate.csv", agg.str());
        result.report = write_report(archives, label_dir);
        results.push_back(std::move(result));
    }
    return results;
}

} // namespace lrqd
