#ifndef STABLE_STREAMS_IO_HPP
#define STABLE_STREAMS_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stable_streams/benchmark.hpp"
#include "stable_streams/evaluation.hpp"
#include "stable_streams/multiscale.hpp"

namespace stable_streams {

// Raised for unreadable, unwritable or malformed input/output files; the CLI
// maps it to exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- communities document ----------------------------------------------------

struct CommunityRecord {
    std::vector<std::string> nodes;  // lexicographically sorted names
    Interval period;
    double gamma = 0.0;
    std::vector<std::pair<double, double>> quality_trace;  // (window_start, qc)
    double seed_window_start = 0.0;
    double seed_quality = 0.0;
};

struct CommunitiesDoc {
    std::string time_unit = "units";
    double t0 = 0.0;  // grid anchor, original time
    std::vector<CommunityRecord> records;  // sorted by (gamma desc, period start)
};

CommunitiesDoc make_communities_doc(const CommunityStore& store, const LinkStream& stream,
                                    double t0, const std::string& time_unit);
void write_communities(const std::string& path, const CommunitiesDoc& doc);
CommunitiesDoc read_communities(const std::string& path);

// Record node names mapped into a universe's id space; throws IoError on a
// name missing from the universe.
std::vector<TimedNodeSet> records_to_timed(const CommunitiesDoc& doc, const Universe& universe);

// Records rebuilt as a store over the stream's node table, for statistics
// that recompute on the stream. Throws IoError on unknown node names.
CommunityStore records_to_store(const CommunitiesDoc& doc, const LinkStream& stream);

// --- ground truth document ---------------------------------------------------

void write_ground_truth(const std::string& path, const GroundTruth& truth);
GroundTruth read_ground_truth(const std::string& path);

// Plain "t u v" edge list, one interaction per line, original timestamps.
void write_stream_file(const std::string& path, const LinkStream& stream);

// --- metrics -----------------------------------------------------------------

struct BaselineResult {
    std::string method;
    double gamma = 0.0;
    double match_threshold = 0.0;
    double nmi = 0.0;
};

struct MetricsSummary {
    std::optional<double> timeline_nmi;
    long long steps = 0;
    long long stride = 1;
    std::optional<MetricsReport> stats;
    std::optional<BaselineResult> baseline;
};

void write_metrics_json(const std::string& path, const MetricsSummary& summary);
void write_metrics_csv(const std::string& path, const MetricsSummary& summary);

// --- timeline export ---------------------------------------------------------

struct TimelineExportOptions {
    std::optional<double> min_length;  // keep communities with period >= this
    std::optional<double> max_length;  // ... and <= this
    std::uint64_t color_seed = 0;
    int svg_width = 1200;
    int svg_height = 800;
};

// One CSV row per (member node, window): node, window_start, window_end,
// community_id, gamma. Community ids are positions in the document.
void export_timeline_csv(const std::string& path, const CommunitiesDoc& doc,
                         const TimelineExportOptions& opts = {});
void export_timeline_svg(const std::string& path, const CommunitiesDoc& doc,
                         const TimelineExportOptions& opts = {});

// --- run manifest ------------------------------------------------------------

struct RunManifest {
    std::string command;
    std::string tool_version;
    // Fully resolved settings, flag name -> value, sorted by name.
    std::vector<std::pair<std::string, std::string>> settings;
    std::vector<std::pair<std::string, std::string>> inputs;   // role -> path
    std::vector<std::pair<std::string, std::string>> outputs;  // role -> path
    std::uint64_t rng_seed = 0;
    double wall_ms = 0.0;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace stable_streams

#endif
