#include "stable_streams/linkstream.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace stable_streams {

namespace {

bool is_integral_value(double x) { return std::isfinite(x) && std::floor(x) == x; }

std::uint64_t edge_key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

std::optional<NodeId> LinkStream::node_id(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t LinkStream::lower_bound(double t_offset) const {
    auto it = std::lower_bound(interactions_.begin(), interactions_.end(), t_offset,
                               [](const Interaction& a, double t) { return a.t < t; });
    return static_cast<std::size_t>(it - interactions_.begin());
}

NodeId LinkStreamBuilder::intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    NodeId id = static_cast<NodeId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
}

void LinkStreamBuilder::add(double t, NodeId u, NodeId v) {
    if (u == v) throw std::invalid_argument("self-loop interaction rejected");
    if (!std::isfinite(t)) throw std::invalid_argument("non-finite timestamp");
    raw_.push_back({t, u, v});
}

void LinkStreamBuilder::add(double t, std::string_view u, std::string_view v) {
    add(t, intern(u), intern(v));
}

LinkStream LinkStreamBuilder::finish() {
    if (raw_.empty()) throw std::invalid_argument("a stream must have at least 1 interaction");

    // Stable sort keeps input order among equal timestamps.
    std::stable_sort(raw_.begin(), raw_.end(),
                     [](const Raw& a, const Raw& b) { return a.t < b.t; });

    LinkStream s;
    s.origin_ = raw_.front().t;
    s.span_ = raw_.back().t - s.origin_;

    bool integral = is_integral_value(s.origin_);
    s.interactions_.reserve(raw_.size());
    for (const Raw& r : raw_) {
        double offset = r.t - s.origin_;
        integral = integral && is_integral_value(offset);
        s.interactions_.push_back({offset, r.u, r.v});
    }
    s.integral_ = integral;
    s.names_ = std::move(names_);
    s.index_ = std::move(index_);
    return s;
}

double Snapshot::strength_of(NodeId id) const {
    auto it = std::lower_bound(strengths.begin(), strengths.end(), id,
                               [](const auto& p, NodeId n) { return p.first < n; });
    if (it == strengths.end() || it->first != id) return 0.0;
    return it->second;
}

long long WindowGrid::index_of_offset(double t_offset) const {
    return static_cast<long long>(std::floor((t_offset - t0_offset) / gamma));
}

WindowGrid make_grid(const LinkStream& stream, double gamma, std::optional<double> t0) {
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be > 0");
    WindowGrid grid;
    grid.gamma = gamma;
    grid.t0_offset = t0 ? stream.to_offset(*t0) : 0.0;
    double span = stream.duration() - grid.t0_offset;
    if (span < 0) {
        grid.count = 0;
    } else {
        grid.count = static_cast<int>(std::floor(span / gamma)) + 1;
    }
    return grid;
}

namespace {

Snapshot aggregate_window(const LinkStream& stream, double start_offset, double gamma,
                          bool binary) {
    Snapshot snap;
    snap.window_start = stream.to_original(start_offset);
    snap.window_length = gamma;

    std::size_t lo = stream.lower_bound(start_offset);
    std::size_t hi = stream.lower_bound(start_offset + gamma);
    auto all = stream.interactions();

    std::unordered_map<std::uint64_t, double> weights;
    weights.reserve((hi - lo) * 2);
    for (std::size_t i = lo; i < hi; ++i) {
        NodeId u = all[i].u;
        NodeId v = all[i].v;
        if (v < u) std::swap(u, v);
        weights[edge_key(u, v)] += 1.0;
    }

    snap.edges.reserve(weights.size());
    for (const auto& [key, w] : weights) {
        SnapshotEdge e;
        e.u = static_cast<NodeId>(key >> 32);
        e.v = static_cast<NodeId>(key & 0xffffffffu);
        e.w = binary ? 1.0 : w;
        snap.edges.push_back(e);
    }
    std::sort(snap.edges.begin(), snap.edges.end(), [](const SnapshotEdge& a, const SnapshotEdge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });

    std::unordered_map<NodeId, double> strength;
    strength.reserve(snap.edges.size() * 2);
    for (const SnapshotEdge& e : snap.edges) {
        snap.total_weight += e.w;
        strength[e.u] += e.w;
        strength[e.v] += e.w;
    }
    snap.strengths.assign(strength.begin(), strength.end());
    std::sort(snap.strengths.begin(), snap.strengths.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return snap;
}

}  // namespace

Snapshot build_snapshot(const LinkStream& stream, double t0, double gamma, bool binary) {
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be > 0");
    return aggregate_window(stream, stream.to_offset(t0), gamma, binary);
}

Snapshot snapshot_at(const LinkStream& stream, const WindowGrid& grid, int k, bool binary) {
    return aggregate_window(stream, grid.window_start_offset(k), grid.gamma, binary);
}

std::vector<Snapshot> snapshot_sequence(const LinkStream& stream, double gamma,
                                        std::optional<double> t0, bool binary) {
    WindowGrid grid = make_grid(stream, gamma, t0);
    std::vector<Snapshot> out;
    out.reserve(static_cast<std::size_t>(grid.count));
    for (int k = 0; k < grid.count; ++k) out.push_back(snapshot_at(stream, grid, k, binary));
    return out;
}

// --- parsing -----------------------------------------------------------------

std::optional<ParseFormat> ParseFormat::by_name(std::string_view name) {
    if (name == "generic") return generic();
    if (name == "sociopatterns") return sociopatterns();
    if (name == "snap") return snap();
    return std::nullopt;
}

namespace {

void split_fields(const std::string& line, char delimiter, std::vector<std::string_view>& out) {
    out.clear();
    if (delimiter == '\0') {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
            if (i > start) out.emplace_back(line.data() + start, i - start);
        }
    } else {
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == delimiter) {
                std::string_view field(line.data() + start, i - start);
                while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
                    field.remove_suffix(1);
                }
                out.push_back(field);
                start = i + 1;
            }
        }
    }
}

bool parse_time(std::string_view field, double& out) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

ParseResult parse_linkstream(std::istream& in, const ParseFormat& format) {
    ParseResult result;
    LinkStreamBuilder builder;

    const int max_col = std::max({format.cols.t, format.cols.u, format.cols.v});
    if (format.cols.t < 0 || format.cols.u < 0 || format.cols.v < 0) {
        throw std::invalid_argument("column indices must be non-negative");
    }

    std::string line;
    std::vector<std::string_view> fields;
    std::size_t line_number = 0;

    auto fail = [&](const std::string& message) {
        if (format.strict) {
            throw std::runtime_error("parse error at line " + std::to_string(line_number) + ": " +
                                     message);
        }
        result.issues.push_back({line_number, message});
    };

    while (std::getline(in, line)) {
        ++line_number;
        if (line_number <= static_cast<std::size_t>(format.header_skip)) continue;

        split_fields(line, format.delimiter, fields);
        bool blank = true;
        for (const auto& f : fields) {
            if (!f.empty()) blank = false;
        }
        if (fields.empty() || blank) continue;  // blank lines are not an error
        ++result.lines_read;

        if (static_cast<int>(fields.size()) <= max_col) {
            fail("expected at least " + std::to_string(max_col + 1) + " columns, got " +
                 std::to_string(fields.size()));
            continue;
        }

        double t = 0.0;
        if (!parse_time(fields[static_cast<std::size_t>(format.cols.t)], t)) {
            fail("bad timestamp '" +
                 std::string(fields[static_cast<std::size_t>(format.cols.t)]) + "'");
            continue;
        }
        t *= format.time_scale;
        if (t < 0) {
            fail("negative timestamp");
            continue;
        }

        std::string_view u = fields[static_cast<std::size_t>(format.cols.u)];
        std::string_view v = fields[static_cast<std::size_t>(format.cols.v)];
        if (u.empty() || v.empty()) {
            fail("empty node id");
            continue;
        }
        if (u == v) {
            fail("self-loop " + std::string(u) + " -- " + std::string(v));
            continue;
        }
        builder.add(t, u, v);
    }

    if (builder.count() == 0) {
        throw std::runtime_error("empty input: a stream must have at least 1 interaction");
    }
    result.stream = builder.finish();
    return result;
}

ParseResult parse_linkstream_file(const std::string& path, const ParseFormat& format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stream file: " + path);
    return parse_linkstream(in, format);
}

}  // namespace stable_streams
