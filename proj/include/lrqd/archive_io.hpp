#pragma once

// Archive persistence (JSON lines, one occupied cell per line in cell order)
// and the per-run metrics CSV.

#include "lrqd/error.hpp"
#include "lrqd/map_elites.hpp"

#include "json.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace lrqd {

inline nlohmann::json record_to_json(const EvalRecord& r)
{
    nlohmann::json spawn = nullptr;
    if (r.spawn) {
        spawn = { r.spawn->row, r.spawn->col };
    }
    return {
        { "bin", { r.bin.enemy, r.bin.treasure, r.bin.ground } },
        { "genotype",
            { { "id", r.genotype.id }, { "parent_ids", r.genotype.parent_ids }, { "latent", r.genotype.latent.values() } } },
        { "fitness", r.fitness },
        { "path_cost", r.solve.path_cost },
        { "connectivity", r.solve.connectivity },
        { "beatable", r.solve.beatable },
        { "budget_exhausted", r.solve.budget_exhausted },
        { "expanded_states", r.solve.expanded_states },
        { "action_count", r.action_count },
        { "spawn", spawn },
        { "stats",
            { { "enemy_count", r.stats.enemy_count }, { "treasure_count", r.stats.treasure_count },
                { "ground_fraction", r.stats.ground_fraction } } },
        { "eval_index", r.eval_index },
    };
}

inline EvalRecord record_from_json(const nlohmann::json& j)
{
    EvalRecord r;
    try {
        const auto bin = j.at("bin").get<std::vector<int>>();
        if (bin.size() != 3) {
            throw Error(ErrorCode::ArchiveSchemaMismatch, "'bin' must have three entries");
        }
        r.bin = { bin[0], bin[1], bin[2] };
        const auto& g = j.at("genotype");
        r.genotype.id = g.at("id").get<std::int64_t>();
        r.genotype.parent_ids = g.at("parent_ids").get<std::vector<std::int64_t>>();
        r.genotype.latent = LatentVector(g.at("latent").get<LatentVector::Values>());
        r.fitness = j.at("fitness").get<double>();
        r.solve.path_cost = j.at("path_cost").get<int>();
        r.solve.connectivity = j.at("connectivity").get<double>();
        r.solve.beatable = j.at("beatable").get<bool>();
        r.solve.budget_exhausted = j.at("budget_exhausted").get<bool>();
        r.solve.expanded_states = j.at("expanded_states").get<int>();
        r.action_count = j.at("action_count").get<int>();
        if (const auto& s = j.at("spawn"); !s.is_null()) {
            const auto p = s.get<std::vector<int>>();
            if (p.size() != 2) {
                throw Error(ErrorCode::ArchiveSchemaMismatch, "'spawn' must be [row, col] or null");
            }
            r.spawn = Position { p[0], p[1] };
        }
        const auto& st = j.at("stats");
        r.stats.enemy_count = st.at("enemy_count").get<int>();
        r.stats.treasure_count = st.at("treasure_count").get<int>();
        r.stats.ground_fraction = st.at("ground_fraction").get<double>();
        r.eval_index = j.at("eval_index").get<std::int64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ArchiveSchemaMismatch, e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ArchiveSchemaMismatch) {
            throw;
        }
        throw Error(ErrorCode::ArchiveSchemaMismatch, e.what());
    }
    if (!r.bin.valid() || r.bin != bin_for(r.stats)) {
        throw Error(ErrorCode::ArchiveSchemaMismatch, "record bin does not match its level stats");
    }
    return r;
}

inline void write_archive_jsonl(const Archive& archive, std::ostream& out)
{
    for (int i = 0; i < kArchiveCells; ++i) {
        if (const auto& cell = archive.at(i)) {
            out << record_to_json(*cell).dump() << '\n';
        }
    }
}

inline std::string archive_to_jsonl(const Archive& archive)
{
    std::ostringstream out;
    write_archive_jsonl(archive, out);
    return out.str();
}

inline Archive read_archive_jsonl(std::istream& in)
{
    Archive archive;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ArchiveSchemaMismatch, "line " + std::to_string(line_no) + ": " + e.what());
        }
        auto rec = record_from_json(j);
        if (archive.at(rec.bin)) {
            throw Error(ErrorCode::ArchiveSchemaMismatch, "line " + std::to_string(line_no) + ": duplicate bin");
        }
        archive.place(std::move(rec));
    }
    return archive;
}

inline Archive read_archive_jsonl(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    return read_archive_jsonl(in);
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_real(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return { buf, res.ptr };
}

inline constexpr std::string_view kMetricsHeader = "eval_index,occupied,beatable,percent_beatable";

inline void write_metrics_csv(const std::vector<Snapshot>& snapshots, std::ostream& out)
{
    out << kMetricsHeader << '\n';
    for (const auto& s : snapshots) {
        out << s.eval_index << ',' << s.metrics.occupied << ',' << s.metrics.beatable << ','
            << format_real(s.metrics.percent_beatable) << '\n';
    }
}

inline std::vector<Snapshot> read_metrics_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader) {
        throw Error(ErrorCode::ArchiveSchemaMismatch, "metrics CSV has an unexpected header");
    }
    std::vector<Snapshot> out;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 4) {
            throw Error(ErrorCode::ArchiveSchemaMismatch, "metrics CSV row needs 4 fields: " + line);
        }
        Snapshot snap;
        auto parse = [&](const std::string& f, auto& value) {
            const auto res = std::from_chars(f.data(), f.data() + f.size(), value);
            if (res.ec != std::errc {} || res.ptr != f.data() + f.size()) {
                throw Error(ErrorCode::ArchiveSchemaMismatch, "metrics CSV row is not numeric: " + line);
            }
        };
        parse(fields[0], snap.eval_index);
        parse(fields[1], snap.metrics.occupied);
        parse(fields[2], snap.metrics.beatable);
        parse(fields[3], snap.metrics.percent_beatable);
        out.push_back(snap);
    }
    return out;
}

} // namespace lrqd
