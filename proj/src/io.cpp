#include "stable_streams/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stable_streams/rng.hpp"

namespace stable_streams {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kCommunitiesSchema = "stable-streams/communities@1";
constexpr const char* kGroundTruthSchema = "stable-streams/ground-truth@1";
constexpr const char* kMetricsSchema = "stable-streams/metrics@1";
constexpr const char* kManifestSchema = "stable-streams/manifest@1";

std::string fmt_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write to: " + path);
    return out;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    try {
        return json::parse(in);
    } catch (const std::exception& e) {
        throw IoError("malformed JSON in " + path + ": " + e.what());
    }
}

void dump_json(const std::string& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace

CommunitiesDoc make_communities_doc(const CommunityStore& store, const LinkStream& stream,
                                    double t0, const std::string& time_unit) {
    CommunitiesDoc doc;
    doc.time_unit = time_unit;
    doc.t0 = t0;
    doc.records.reserve(store.size());
    for (const StableCommunity& c : store.communities) {
        CommunityRecord r;
        r.nodes.reserve(c.nodes.size());
        for (NodeId id : c.nodes) r.nodes.push_back(stream.node_name(id));
        std::sort(r.nodes.begin(), r.nodes.end());
        r.period = c.period;
        r.gamma = c.gamma;
        r.quality_trace = c.quality_trace;
        r.seed_window_start = c.seed_window_start;
        r.seed_quality = c.seed_quality;
        doc.records.push_back(std::move(r));
    }
    std::sort(doc.records.begin(), doc.records.end(),
              [](const CommunityRecord& a, const CommunityRecord& b) {
                  if (a.gamma != b.gamma) return a.gamma > b.gamma;
                  if (a.period.start != b.period.start) return a.period.start < b.period.start;
                  return a.nodes < b.nodes;
              });
    return doc;
}

void write_communities(const std::string& path, const CommunitiesDoc& doc) {
    json j;
    j["schema"] = kCommunitiesSchema;
    j["time_unit"] = doc.time_unit;
    j["t0"] = doc.t0;
    json list = json::array();
    for (const CommunityRecord& r : doc.records) {
        json rec;
        rec["nodes"] = r.nodes;
        rec["period"] = {r.period.start, r.period.end};
        rec["gamma"] = r.gamma;
        json trace = json::array();
        for (const auto& [start, q] : r.quality_trace) trace.push_back({start, q});
        rec["quality_trace"] = std::move(trace);
        rec["seed_window_start"] = r.seed_window_start;
        rec["seed_quality"] = r.seed_quality;
        list.push_back(std::move(rec));
    }
    j["communities"] = std::move(list);
    dump_json(path, j);
}

CommunitiesDoc read_communities(const std::string& path) {
    json j = load_json(path);
    try {
        if (j.at("schema").get<std::string>() != kCommunitiesSchema) {
            throw IoError("unexpected schema in " + path);
        }
        CommunitiesDoc doc;
        doc.time_unit = j.at("time_unit").get<std::string>();
        doc.t0 = j.at("t0").get<double>();
        for (const auto& rec : j.at("communities")) {
            CommunityRecord r;
            r.nodes = rec.at("nodes").get<std::vector<std::string>>();
            r.period = {rec.at("period").at(0).get<double>(), rec.at("period").at(1).get<double>()};
            r.gamma = rec.at("gamma").get<double>();
            for (const auto& entry : rec.at("quality_trace")) {
                r.quality_trace.emplace_back(entry.at(0).get<double>(), entry.at(1).get<double>());
            }
            r.seed_window_start = rec.at("seed_window_start").get<double>();
            r.seed_quality = rec.at("seed_quality").get<double>();
            doc.records.push_back(std::move(r));
        }
        return doc;
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        throw IoError("invalid communities document " + path + ": " + e.what());
    }
}

std::vector<TimedNodeSet> records_to_timed(const CommunitiesDoc& doc, const Universe& universe) {
    std::vector<TimedNodeSet> out;
    out.reserve(doc.records.size());
    for (const CommunityRecord& r : doc.records) {
        TimedNodeSet entry;
        entry.period = r.period;
        for (const std::string& name : r.nodes) {
            auto id = universe.id_of(name);
            if (!id) {
                throw IoError("universe mismatch: node '" + name +
                              "' is not part of the evaluation universe");
            }
            entry.nodes.push_back(*id);
        }
        normalize_node_set(entry.nodes);
        out.push_back(std::move(entry));
    }
    return out;
}

CommunityStore records_to_store(const CommunitiesDoc& doc, const LinkStream& stream) {
    CommunityStore store;
    store.communities.reserve(doc.records.size());
    for (const CommunityRecord& r : doc.records) {
        StableCommunity c;
        for (const std::string& name : r.nodes) {
            auto id = stream.node_id(name);
            if (!id) throw IoError("node '" + name + "' does not appear in the stream");
            c.nodes.push_back(*id);
        }
        normalize_node_set(c.nodes);
        c.period = r.period;
        c.gamma = r.gamma;
        c.quality_trace = r.quality_trace;
        c.seed_window_start = r.seed_window_start;
        c.seed_quality = r.seed_quality;
        store.communities.push_back(std::move(c));
    }
    return store;
}

void write_ground_truth(const std::string& path, const GroundTruth& truth) {
    json j;
    j["schema"] = kGroundTruthSchema;
    j["params"] = {{"T", truth.params.T},
                   {"N", truth.params.N},
                   {"p", truth.params.p},
                   {"SC", truth.params.SC},
                   {"seed", truth.params.rng_seed}};
    json list = json::array();
    for (const PlantedCommunity& pc : truth.planted) {
        json rec;
        rec["nodes"] = pc.nodes;
        rec["start"] = pc.start;
        rec["duration"] = pc.duration;
        rec["edge_prob"] = pc.edge_prob;
        list.push_back(std::move(rec));
    }
    j["communities"] = std::move(list);
    dump_json(path, j);
}

GroundTruth read_ground_truth(const std::string& path) {
    json j = load_json(path);
    try {
        if (j.at("schema").get<std::string>() != kGroundTruthSchema) {
            throw IoError("unexpected schema in " + path);
        }
        GroundTruth truth;
        const auto& p = j.at("params");
        truth.params.T = p.at("T").get<long long>();
        truth.params.N = p.at("N").get<int>();
        truth.params.p = p.at("p").get<double>();
        truth.params.SC = p.at("SC").get<int>();
        truth.params.rng_seed = p.at("seed").get<std::uint64_t>();
        for (const auto& rec : j.at("communities")) {
            PlantedCommunity pc;
            pc.nodes = rec.at("nodes").get<NodeSet>();
            normalize_node_set(pc.nodes);
            pc.start = rec.at("start").get<long long>();
            pc.duration = rec.at("duration").get<long long>();
            pc.edge_prob = rec.at("edge_prob").get<double>();
            truth.planted.push_back(std::move(pc));
        }
        return truth;
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        throw IoError("invalid ground-truth document " + path + ": " + e.what());
    }
}

void write_stream_file(const std::string& path, const LinkStream& stream) {
    auto out = open_out(path);
    for (const Interaction& it : stream.interactions()) {
        out << fmt_double(stream.to_original(it.t)) << ' ' << stream.node_name(it.u) << ' '
            << stream.node_name(it.v) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

namespace {

json report_to_json(const MetricsReport& stats) {
    json s;
    s["community_count"] = stats.community_count;
    auto put = [&](const char* key, const std::optional<double>& value) {
        if (value) {
            s[key] = *value;
        } else {
            s[key] = nullptr;
        }
    };
    put("mean_persistence", stats.mean_persistence);
    put("mean_size", stats.mean_size);
    put("mean_stability", stats.mean_stability);
    put("mean_density", stats.mean_density);
    put("mean_q", stats.mean_q);
    return s;
}

}  // namespace

void write_metrics_json(const std::string& path, const MetricsSummary& summary) {
    json j;
    j["schema"] = kMetricsSchema;
    if (summary.timeline_nmi) {
        j["timeline_nmi"] = *summary.timeline_nmi;
    } else {
        j["timeline_nmi"] = nullptr;
    }
    j["steps"] = summary.steps;
    j["stride"] = summary.stride;
    if (summary.stats) j["stats"] = report_to_json(*summary.stats);
    if (summary.baseline) {
        j["baseline"] = {{"method", summary.baseline->method},
                         {"gamma", summary.baseline->gamma},
                         {"match_threshold", summary.baseline->match_threshold},
                         {"nmi", summary.baseline->nmi}};
    }
    dump_json(path, j);
}

void write_metrics_csv(const std::string& path, const MetricsSummary& summary) {
    auto out = open_out(path);
    out << "metric,value\n";
    auto row = [&](const std::string& name, const std::optional<double>& value) {
        out << name << ',' << (value ? fmt_double(*value) : std::string()) << '\n';
    };
    row("timeline_nmi", summary.timeline_nmi);
    row("steps", static_cast<double>(summary.steps));
    row("stride", static_cast<double>(summary.stride));
    if (summary.stats) {
        row("community_count", static_cast<double>(summary.stats->community_count));
        row("mean_persistence", summary.stats->mean_persistence);
        row("mean_size", summary.stats->mean_size);
        row("mean_stability", summary.stats->mean_stability);
        row("mean_density", summary.stats->mean_density);
        row("mean_q", summary.stats->mean_q);
    }
    if (summary.baseline) {
        row("baseline_gamma", summary.baseline->gamma);
        row("baseline_match_threshold", summary.baseline->match_threshold);
        row("baseline_nmi", summary.baseline->nmi);
    }
    if (!out) throw IoError("write failed: " + path);
}

namespace {

bool record_selected(const CommunityRecord& r, const TimelineExportOptions& opts) {
    const double length = r.period.length();
    if (opts.min_length && length < *opts.min_length) return false;
    if (opts.max_length && length > *opts.max_length) return false;
    return true;
}

}  // namespace

void export_timeline_csv(const std::string& path, const CommunitiesDoc& doc,
                         const TimelineExportOptions& opts) {
    auto out = open_out(path);
    out << "node,window_start,window_end,community_id,gamma\n";
    for (std::size_t id = 0; id < doc.records.size(); ++id) {
        const CommunityRecord& r = doc.records[id];
        if (!record_selected(r, opts)) continue;
        for (const auto& [window_start, q] : r.quality_trace) {
            for (const std::string& node : r.nodes) {
                out << node << ',' << fmt_double(window_start) << ','
                    << fmt_double(window_start + r.gamma) << ',' << id << ','
                    << fmt_double(r.gamma) << '\n';
            }
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

void export_timeline_svg(const std::string& path, const CommunitiesDoc& doc,
                         const TimelineExportOptions& opts) {
    std::vector<const CommunityRecord*> selected;
    std::vector<std::size_t> selected_ids;
    for (std::size_t id = 0; id < doc.records.size(); ++id) {
        if (record_selected(doc.records[id], opts)) {
            selected.push_back(&doc.records[id]);
            selected_ids.push_back(id);
        }
    }

    // Vertical axis: nodes of the selected communities, sorted by name.
    std::vector<std::string> nodes;
    for (const auto* r : selected) nodes.insert(nodes.end(), r->nodes.begin(), r->nodes.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    double t_lo = 0.0;
    double t_hi = 1.0;
    if (!selected.empty()) {
        t_lo = selected.front()->period.start;
        t_hi = selected.front()->period.end;
        for (const auto* r : selected) {
            t_lo = std::min(t_lo, r->period.start);
            t_hi = std::max(t_hi, r->period.end);
        }
    }
    if (t_hi <= t_lo) t_hi = t_lo + 1.0;

    const double margin = 40.0;
    const double width = static_cast<double>(opts.svg_width);
    const double height = static_cast<double>(opts.svg_height);
    const double plot_w = width - 2.0 * margin;
    const double plot_h = height - 2.0 * margin;
    const double row_h = nodes.empty() ? plot_h : plot_h / static_cast<double>(nodes.size());

    auto x_of = [&](double t) { return margin + (t - t_lo) / (t_hi - t_lo) * plot_w; };
    auto row_of = [&](const std::string& node) {
        return static_cast<double>(
            std::lower_bound(nodes.begin(), nodes.end(), node) - nodes.begin());
    };

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.svg_width
        << "\" height=\"" << opts.svg_height << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t s = 0; s < selected.size(); ++s) {
        const CommunityRecord& r = *selected[s];
        const std::uint64_t hue_bits = splitmix64(opts.color_seed ^ (selected_ids[s] + 1));
        const unsigned hue = static_cast<unsigned>(hue_bits % 360);
        for (const std::string& node : r.nodes) {
            const double y = margin + row_of(node) * row_h;
            out << "  <rect x=\"" << fmt_double(x_of(r.period.start)) << "\" y=\""
                << fmt_double(y) << "\" width=\""
                << fmt_double(x_of(r.period.end) - x_of(r.period.start)) << "\" height=\""
                << fmt_double(std::max(1.0, row_h - 1.0)) << "\" fill=\"hsl(" << hue
                << ",65%,55%)\" fill-opacity=\"0.8\"/>\n";
        }
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path);
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    json j;
    j["schema"] = kManifestSchema;
    j["tool_version"] = manifest.tool_version;
    j["command"] = manifest.command;
    json settings;
    for (const auto& [key, value] : manifest.settings) settings[key] = value;
    j["settings"] = std::move(settings);
    json inputs;
    for (const auto& [key, value] : manifest.inputs) inputs[key] = value;
    j["inputs"] = std::move(inputs);
    json outputs;
    for (const auto& [key, value] : manifest.outputs) outputs[key] = value;
    j["outputs"] = std::move(outputs);
    j["rng_seed"] = manifest.rng_seed;
    j["wall_ms"] = manifest.wall_ms;
    dump_json(path, j);
}

}  // namespace stable_streams
