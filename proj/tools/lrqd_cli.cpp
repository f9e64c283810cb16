// lrqd: command-line front end.
//
//   lrqd convert VGLC_DIR OUT_JSON (--first N | --ids 1,2,...)
//   lrqd solve LEVEL [--latent0 X] [--budget N]
//   lrqd evolve [--config FILE] [overrides...]
//   lrqd report ARCHIVE... --out DIR
//   lrqd stats LEVEL...
//   lrqd reference-weights MANIFEST BLOB [--seed S]
//
// Exit codes: 0 success (for `solve`: level beatable), 2 `solve` found the
// level unbeatable, 1 any error.

#include "lrqd/lrqd.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnbeatable = 2;

fs::path resolve(const fs::path& workspace, const fs::path& p)
{
    return p.is_absolute() ? p : workspace / p;
}

json solve_to_json(const lrqd::SolveResult& r, const std::optional<lrqd::Position>& spawn)
{
    json actions = json::array();
    for (auto m : r.actions) {
        actions.push_back(std::string(lrqd::to_string(m)));
    }
    return {
        { "beatable", r.beatable },
        { "path_cost", r.path_cost },
        { "action_count", r.action_count() },
        { "actions", actions },
        { "expanded_states", r.expanded_states },
        { "connectivity", r.connectivity },
        { "budget_exhausted", r.budget_exhausted },
        { "spawn", spawn ? json { spawn->row, spawn->col } : json(nullptr) },
    };
}

json stats_to_json(const lrqd::Level& level)
{
    const auto s = lrqd::compute_stats(level);
    const auto bin = lrqd::bin_for(s);
    const auto h = lrqd::histogram(level);
    json hist = json::object();
    for (int t = 0; t < lrqd::kTileTypeCount; ++t) {
        hist[std::string(1, lrqd::kVglcChars[static_cast<std::size_t>(t)])] = h[static_cast<std::size_t>(t)];
    }
    return { { "enemy_count", s.enemy_count }, { "treasure_count", s.treasure_count },
        { "ground_fraction", s.ground_fraction }, { "bin", { bin.enemy, bin.treasure, bin.ground } },
        { "histogram", hist } };
}

std::vector<std::size_t> parse_id_list(const std::string& text)
{
    std::vector<std::size_t> ids;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        const auto token = text.substr(start, end - start);
        if (!token.empty()) {
            try {
                std::size_t used = 0;
                const auto value = std::stoul(token, &used);
                if (used != token.size()) {
                    throw std::invalid_argument(token);
                }
                ids.push_back(value);
            } catch (const std::exception&) {
                throw lrqd::Error(lrqd::ErrorCode::InvalidConfig, "bad level id '" + token + "'");
            }
        }
        start = end + 1;
    }
    return ids;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app { "Quality-diversity search over generated Lode Runner levels" };
    app.require_subcommand(1);
    std::string workspace = ".";
    app.add_option("--workspace,-w", workspace, "Directory that relative paths resolve against");

    // convert
    auto* convert = app.add_subcommand("convert", "Turn a directory of VGLC levels into a training-set JSON array");
    std::string vglc_dir, out_json, ids_text;
    std::size_t first_n = 0;
    convert->add_option("vglc_dir", vglc_dir, "Directory of VGLC text files (sorted by name = levels 1..N)")->required();
    convert->add_option("out_json", out_json, "Output JSON file")->required();
    auto* first_opt = convert->add_option("--first", first_n, "Take the first N levels");
    auto* ids_opt = convert->add_option("--ids", ids_text, "Comma-separated 1-based level ids");
    first_opt->excludes(ids_opt);

    // solve
    auto* solve = app.add_subcommand("solve", "Solve one level and print the result as JSON");
    std::string level_file;
    double latent0 = 0.0;
    int budget = lrqd::kDefaultStateBudget;
    solve->add_option("level", level_file, "VGLC text or JSON grid file")->required();
    solve->add_option("--latent0", latent0, "First latent component, seeds the spawn choice")->capture_default_str();
    solve->add_option("--budget", budget, "A* expanded-state budget")->capture_default_str();

    // evolve
    auto* evolve = app.add_subcommand("evolve", "Run MAP-Elites experiments");
    std::string config_file, out_dir, weights_manifest, weights_blob, label;
    std::optional<int> runs;
    std::optional<std::int64_t> total_evals, init_size, log_every, batch_size;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<int> evolve_budget;
    bool use_stub = false;
    evolve->add_option("--config", config_file, "JSON experiment config");
    evolve->add_option("--runs", runs, "Independent runs per generator");
    evolve->add_option("--total-evals", total_evals, "Evaluations per run");
    evolve->add_option("--init-size", init_size, "Random initial population size");
    evolve->add_option("--log-every", log_every, "Metrics snapshot interval");
    evolve->add_option("--batch-size", batch_size, "Offspring per archive read");
    evolve->add_option("--seed", seed, "Master seed; run r uses seed + r");
    evolve->add_option("--workers", workers, "Worker threads");
    evolve->add_option("--budget", evolve_budget, "A* expanded-state budget");
    evolve->add_option("--out", out_dir, "Output directory");
    auto* stub_flag = evolve->add_flag("--stub", use_stub, "Use the built-in stub generator");
    auto* manifest_opt = evolve->add_option("--weights", weights_manifest, "Generator manifest.json");
    evolve->add_option("--blob", weights_blob, "Generator weights.bin")->needs(manifest_opt);
    evolve->add_option("--label", label, "Label for the generator given on the command line");
    stub_flag->excludes(manifest_opt);

    // report
    auto* report = app.add_subcommand("report", "Average archives into fitness heatmaps");
    std::vector<std::string> archive_files;
    std::string report_out, stem = "heatmap";
    report->add_option("archives", archive_files, "Archive JSONL files")->required();
    report->add_option("--out", report_out, "Output directory")->required();
    report->add_option("--stem", stem, "Output file stem")->capture_default_str();

    // stats
    auto* stats = app.add_subcommand("stats", "Print tile statistics and archive bin of levels");
    std::vector<std::string> stat_files;
    stats->add_option("levels", stat_files, "Level files")->required();

    // reference-weights
    auto* refw = app.add_subcommand("reference-weights", "Write randomly initialised reference generator weights");
    std::string ref_manifest, ref_blob;
    std::uint64_t ref_seed = 0;
    refw->add_option("manifest", ref_manifest)->required();
    refw->add_option("blob", ref_blob)->required();
    refw->add_option("--seed", ref_seed)->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    const fs::path ws(workspace);

    try {
        if (*convert) {
            lrqd::SubsetSpec subset;
            if (*ids_opt) {
                subset = lrqd::LevelIds { parse_id_list(ids_text) };
            } else if (*first_opt) {
                subset = lrqd::FirstN { first_n };
            } else {
                throw lrqd::Error(lrqd::ErrorCode::InvalidConfig, "convert needs --first or --ids");
            }
            const auto out = lrqd::convert_corpus(resolve(ws, vglc_dir), subset);
            lrqd::write_text_file(resolve(ws, out_json), out.dump() + "\n");
            std::cout << "wrote " << out.size() << " levels to " << resolve(ws, out_json).string() << '\n';
            return kExitOk;
        }

        if (*solve) {
            const auto level = lrqd::load_level_file(resolve(ws, level_file));
            std::optional<lrqd::Position> spawn;
            lrqd::SolveResult result;
            try {
                spawn = lrqd::select_spawn(level, latent0);
                result = lrqd::astar_solve(level, *spawn, budget);
            } catch (const lrqd::Error& e) {
                if (e.code() != lrqd::ErrorCode::NoEmptyTile) {
                    throw;
                }
            }
            std::cout << solve_to_json(result, spawn).dump(2) << '\n';
            return result.beatable ? kExitOk : kExitUnbeatable;
        }

        if (*evolve) {
            lrqd::ExperimentConfig config;
            if (!config_file.empty()) {
                json j;
                try {
                    j = json::parse(lrqd::read_text_file(resolve(ws, config_file)));
                } catch (const json::exception& e) {
                    throw lrqd::Error(lrqd::ErrorCode::InvalidConfig, e.what());
                }
                config = lrqd::parse_experiment_config(j, ws);
            } else {
                config.output_dir = ws / "out";
            }
            if (use_stub) {
                config.generators = { { label.empty() ? "stub" : label, true, {}, {} } };
            } else if (!weights_manifest.empty()) {
                if (weights_blob.empty()) {
                    throw lrqd::Error(lrqd::ErrorCode::InvalidConfig, "--weights needs --blob");
                }
                config.generators = { { label.empty() ? "network" : label, false, resolve(ws, weights_manifest),
                    resolve(ws, weights_blob) } };
            }
            if (runs) config.runs = *runs;
            if (total_evals) config.evolution.total_evals = *total_evals;
            if (init_size) config.evolution.init_size = *init_size;
            if (log_every) config.evolution.log_every = *log_every;
            if (batch_size) config.evolution.batch_size = *batch_size;
            if (seed) config.evolution.seed = *seed;
            if (workers) config.evolution.workers = *workers;
            if (evolve_budget) config.evolution.solver_budget = *evolve_budget;
            if (!out_dir.empty()) config.output_dir = resolve(ws, out_dir);

            for (const auto& r : lrqd::run_experiment(config)) {
                const auto& last = r.aggregate.back();
                std::cout << r.label << ": " << r.runs.size() << " runs, final occupied " << lrqd::format_real(last.occupied.mean)
                          << " +/- " << lrqd::format_real(last.occupied.ci95) << ", beatable "
                          << lrqd::format_real(last.beatable.mean) << " +/- " << lrqd::format_real(last.beatable.ci95)
                          << "; heatmap " << r.report.pgm.string() << '\n';
            }
            return kExitOk;
        }

        if (*report) {
            std::vector<lrqd::Archive> archives;
            for (const auto& f : archive_files) {
                archives.push_back(lrqd::read_archive_jsonl(resolve(ws, f)));
            }
            const auto paths = lrqd::write_report(archives, resolve(ws, report_out), stem);
            std::cout << "wrote " << paths.csv.string() << " and " << paths.pgm.string() << '\n';
            return kExitOk;
        }

        if (*stats) {
            json out = json::array();
            for (const auto& f : stat_files) {
                auto s = stats_to_json(lrqd::load_level_file(resolve(ws, f)));
                s["file"] = f;
                out.push_back(std::move(s));
            }
            std::cout << (out.size() == 1 ? out[0] : out).dump(2) << '\n';
            return kExitOk;
        }

        if (*refw) {
            lrqd::save_weights(lrqd::make_reference_weights(ref_seed), resolve(ws, ref_manifest), resolve(ws, ref_blob));
            return kExitOk;
        }
    } catch (const lrqd::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
