#ifndef STABLE_STREAMS_LINKSTREAM_HPP
#define STABLE_STREAMS_LINKSTREAM_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stable_streams/types.hpp"

namespace stable_streams {

// One timestamped interaction. `t` is stored as an offset from the stream's
// first timestamp; the original value is `t + stream.time_origin()`.
struct Interaction {
    double t = 0.0;
    NodeId u = 0;
    NodeId v = 0;
};

// Immutable time-ordered sequence of interactions plus the node table.
// Safe to share across threads once built.
class LinkStream {
public:
    std::span<const Interaction> interactions() const { return interactions_; }
    std::size_t size() const { return interactions_.size(); }

    std::size_t node_count() const { return names_.size(); }
    const std::string& node_name(NodeId id) const { return names_[id]; }
    const std::vector<std::string>& node_names() const { return names_; }
    std::optional<NodeId> node_id(std::string_view name) const;

    // Original-time bounds and total duration (t_max - t_min).
    double time_origin() const { return origin_; }
    double t_min() const { return origin_; }
    double t_max() const { return origin_ + span_; }
    double duration() const { return span_; }

    // True when the origin and every offset are integer-valued.
    bool integral_times() const { return integral_; }

    double to_offset(double t_original) const { return t_original - origin_; }
    double to_original(double t_offset) const { return t_offset + origin_; }

    // Index of the first interaction with offset >= t.
    std::size_t lower_bound(double t_offset) const;

private:
    friend class LinkStreamBuilder;
    std::vector<Interaction> interactions_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
    double origin_ = 0.0;
    double span_ = 0.0;
    bool integral_ = true;
};

class LinkStreamBuilder {
public:
    NodeId intern(std::string_view name);
    // Timestamps are original values; normalization happens in finish().
    void add(double t, NodeId u, NodeId v);
    void add(double t, std::string_view u, std::string_view v);
    std::size_t count() const { return raw_.size(); }
    // Sorts by time, normalizes to offsets, derives bounds.
    // Throws std::invalid_argument on an empty builder.
    LinkStream finish();

private:
    struct Raw {
        double t;
        NodeId u, v;
    };
    std::vector<Raw> raw_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
};

// Weighted static graph aggregating the interactions of one window.
// Edges are canonical (u < v), sorted; weights are interaction counts
// (or 1 with binary aggregation). Strengths are sorted by node id.
struct SnapshotEdge {
    NodeId u = 0;
    NodeId v = 0;
    double w = 0.0;
};

struct Snapshot {
    double window_start = 0.0;   // original time
    double window_length = 0.0;  // gamma
    std::vector<SnapshotEdge> edges;
    std::vector<std::pair<NodeId, double>> strengths;
    double total_weight = 0.0;  // sum of edge weights (m)

    bool empty() const { return edges.empty(); }
    std::size_t active_node_count() const { return strengths.size(); }
    double strength_of(NodeId id) const;
    Interval window() const { return {window_start, window_start + window_length}; }
};

// Aligned window grid over a stream: windows [t0 + k*gamma, t0 + (k+1)*gamma)
// for k in [0, count). The grid covers every interaction with t >= t0; the
// last window may be partial.
struct WindowGrid {
    double t0_offset = 0.0;
    double gamma = 0.0;
    int count = 0;

    // Window index containing offset t, which may fall outside [0, count).
    long long index_of_offset(double t_offset) const;
    double window_start_offset(int k) const { return t0_offset + static_cast<double>(k) * gamma; }
};

// t0 is an original timestamp; defaults to the stream's first one.
WindowGrid make_grid(const LinkStream& stream, double gamma,
                     std::optional<double> t0 = std::nullopt);

// Snapshot of all interactions with t0 <= t < t0 + gamma (original times).
Snapshot build_snapshot(const LinkStream& stream, double t0, double gamma,
                        bool binary = false);

// Snapshot for window k of a grid.
Snapshot snapshot_at(const LinkStream& stream, const WindowGrid& grid, int k,
                     bool binary = false);

// All windows of the grid in order; every interaction at or after t0 lands in
// exactly one of them.
std::vector<Snapshot> snapshot_sequence(const LinkStream& stream, double gamma,
                                        std::optional<double> t0 = std::nullopt,
                                        bool binary = false);

// --- parsing ---------------------------------------------------------------

struct ColumnSpec {
    int t = 0;
    int u = 1;
    int v = 2;
};

struct ParseFormat {
    ColumnSpec cols;
    char delimiter = '\0';  // '\0' = any run of whitespace
    int header_skip = 0;
    double time_scale = 1.0;  // multiplier applied to raw timestamps
    bool strict = true;

    static ParseFormat generic() { return {}; }
    // SocioPatterns contact lists: "t i j [class ...]", tab separated.
    static ParseFormat sociopatterns() {
        ParseFormat f;
        f.cols = {0, 1, 2};
        return f;
    }
    // SNAP temporal edge lists: "u v t".
    static ParseFormat snap() {
        ParseFormat f;
        f.cols = {2, 0, 1};
        return f;
    }
    static std::optional<ParseFormat> by_name(std::string_view name);
};

struct ParseIssue {
    std::size_t line_number = 0;  // 1-based
    std::string message;
};

struct ParseResult {
    LinkStream stream;
    std::vector<ParseIssue> issues;  // skipped lines in lenient mode
    std::size_t lines_read = 0;
};

// Reads a line-oriented edge list. In strict mode the first malformed line
// throws std::runtime_error with its line number; in lenient mode bad lines
// are skipped and reported. An input with zero valid interactions throws.
ParseResult parse_linkstream(std::istream& in, const ParseFormat& format);
ParseResult parse_linkstream_file(const std::string& path, const ParseFormat& format);

}  // namespace stable_streams

#endif
