#include "stable_streams/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stable_streams/graphcore.hpp"
#include "stable_streams/parallel.hpp"
#include "stable_streams/rng.hpp"

namespace stable_streams {

Universe Universe::integer_range(int n) {
    std::vector<std::string> names(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) names[static_cast<std::size_t>(i)] = std::to_string(i);
    return from_names(std::move(names));
}

Universe Universe::from_names(std::vector<std::string> names) {
    Universe u;
    u.names = std::move(names);
    u.index.reserve(u.names.size());
    for (std::size_t i = 0; i < u.names.size(); ++i) {
        if (!u.index.emplace(u.names[i], static_cast<NodeId>(i)).second) {
            throw std::invalid_argument("duplicate node name in universe: " + u.names[i]);
        }
    }
    return u;
}

std::optional<NodeId> Universe::id_of(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

Cover cover_at(std::span<const TimedNodeSet> communities, double t, int universe_size) {
    if (universe_size <= 0) throw std::invalid_argument("cover_at: empty universe");
    Cover cover;
    cover.universe_size = universe_size;

    std::vector<bool> covered(static_cast<std::size_t>(universe_size), false);
    for (const TimedNodeSet& c : communities) {
        if (!c.period.contains(t)) continue;
        for (NodeId id : c.nodes) {
            if (id >= static_cast<NodeId>(universe_size)) {
                throw std::invalid_argument("cover_at: node outside universe");
            }
            covered[id] = true;
        }
        cover.sets.push_back(c.nodes);
    }
    for (NodeId id = 0; id < static_cast<NodeId>(universe_size); ++id) {
        if (!covered[id]) cover.sets.push_back({id});
    }
    return cover;
}

namespace {

double h(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

// Entropy of a binary membership variable with k members out of n.
double set_entropy(std::size_t k, std::size_t n) {
    double p = static_cast<double>(k) / static_cast<double>(n);
    return h(p) + h(1.0 - p);
}

struct CoverIndex {
    const Cover* cover;
    std::vector<std::vector<std::uint32_t>> sets_of_node;  // inverted index
    std::vector<std::vector<bool>> member;                 // per-set bitmap

    explicit CoverIndex(const Cover& c) : cover(&c) {
        const std::size_t n = static_cast<std::size_t>(c.universe_size);
        sets_of_node.resize(n);
        member.resize(c.sets.size());
        for (std::uint32_t j = 0; j < c.sets.size(); ++j) {
            member[j].assign(n, false);
            for (NodeId id : c.sets[j]) {
                if (id >= n) throw std::invalid_argument("overlapping_nmi: node outside universe");
                member[j][id] = true;
                sets_of_node[id].push_back(j);
            }
        }
    }
};

// Mean over the sets of X of the normalized best-match conditional entropy
// H(X_i | Y) / H(X_i).
double normalized_conditional(const Cover& x, const CoverIndex& yidx) {
    const Cover& y = *yidx.cover;
    const std::size_t n = static_cast<std::size_t>(x.universe_size);

    std::vector<std::uint32_t> candidates;
    std::vector<bool> seen(y.sets.size(), false);

    double total = 0.0;
    for (const NodeSet& xs : x.sets) {
        const double hx = set_entropy(xs.size(), n);

        if (hx == 0.0) {
            // Degenerate set (empty or the whole universe): perfectly
            // explained only by an identical set in the other cover.
            bool matched = false;
            for (const NodeSet& ys : y.sets) {
                if (ys == xs) {
                    matched = true;
                    break;
                }
            }
            total += matched ? 0.0 : 1.0;
            continue;
        }

        candidates.clear();
        for (NodeId id : xs) {
            for (std::uint32_t j : yidx.sets_of_node[id]) {
                if (!seen[j]) {
                    seen[j] = true;
                    candidates.push_back(j);
                }
            }
        }

        // Disjoint pairs always fail the constraint below, so sets sharing no
        // node with xs cannot improve on the unmatched fallback H(X_i).
        double best = hx;
        for (std::uint32_t j : candidates) {
            seen[j] = false;
            const NodeSet& ys = y.sets[j];
            std::size_t n11 = 0;
            for (NodeId id : xs) {
                if (yidx.member[j][id]) ++n11;
            }
            const std::size_t n10 = xs.size() - n11;
            const std::size_t n01 = ys.size() - n11;
            const std::size_t n00 = n - n11 - n10 - n01;

            const double nd = static_cast<double>(n);
            const double h11 = h(static_cast<double>(n11) / nd);
            const double h10 = h(static_cast<double>(n10) / nd);
            const double h01 = h(static_cast<double>(n01) / nd);
            const double h00 = h(static_cast<double>(n00) / nd);

            // Reject matches that look like complements rather than copies.
            if (h11 + h00 < h01 + h10) continue;

            const double conditional = (h11 + h10 + h01 + h00) - set_entropy(ys.size(), n);
            if (conditional < best) best = conditional;
        }

        total += std::max(0.0, best) / hx;
    }
    return total / static_cast<double>(x.sets.size());
}

}  // namespace

double overlapping_nmi(const Cover& x, const Cover& y) {
    if (x.universe_size != y.universe_size) {
        throw std::invalid_argument("overlapping_nmi: covers must share one universe");
    }
    if (x.universe_size <= 0) throw std::invalid_argument("overlapping_nmi: empty universe");
    if (x.sets.empty() && y.sets.empty()) return 1.0;
    if (x.sets.empty() || y.sets.empty()) return 0.0;

    CoverIndex xidx(x);
    CoverIndex yidx(y);
    const double hxy = normalized_conditional(x, yidx);
    const double hyx = normalized_conditional(y, xidx);
    return 1.0 - 0.5 * (hxy + hyx);
}

double timeline_nmi(std::span<const TimedNodeSet> detected, std::span<const TimedNodeSet> truth,
                    long long steps, int universe_size, const NmiOptions& opts) {
    if (steps <= 0) throw std::invalid_argument("timeline_nmi: steps must be > 0");
    if (opts.stride < 1) throw std::invalid_argument("timeline_nmi: stride must be >= 1");

    // Both covers are piecewise constant between period endpoints, so the NMI
    // is evaluated once per segment and weighted by the steps it contains.
    std::vector<double> cuts{0.0, static_cast<double>(steps)};
    auto add_cut = [&](double t) {
        if (t > 0.0 && t < static_cast<double>(steps)) cuts.push_back(t);
    };
    for (const auto& c : detected) {
        add_cut(c.period.start);
        add_cut(c.period.end);
    }
    for (const auto& c : truth) {
        add_cut(c.period.start);
        add_cut(c.period.end);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double stride = static_cast<double>(opts.stride);
    struct Segment {
        double first_step;
        long long count;
    };
    std::vector<Segment> segments;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const long long k_lo = static_cast<long long>(std::ceil(cuts[i] / stride));
        const long long k_hi = static_cast<long long>(std::ceil(cuts[i + 1] / stride));
        if (k_hi <= k_lo) continue;
        segments.push_back({static_cast<double>(k_lo) * stride, k_hi - k_lo});
    }

    std::vector<double> values(segments.size(), 0.0);
    parallel_for(segments.size(), opts.workers, [&](std::size_t i) {
        Cover cx = cover_at(detected, segments[i].first_step, universe_size);
        Cover cy = cover_at(truth, segments[i].first_step, universe_size);
        values[i] = overlapping_nmi(cx, cy);
    });

    double sum = 0.0;
    long long total = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        sum += values[i] * static_cast<double>(segments[i].count);
        total += segments[i].count;
    }
    return total > 0 ? sum / static_cast<double>(total) : 0.0;
}

double timeline_nmi(const CommunityStore& store, const LinkStream& stream,
                    const GroundTruth& truth, const NmiOptions& opts) {
    Universe universe = Universe::integer_range(truth.params.N);
    std::vector<TimedNodeSet> detected = store_to_timed(store, stream, universe);
    std::vector<TimedNodeSet> planted = truth_to_timed(truth);
    return timeline_nmi(detected, planted, truth.params.T, universe.size(), opts);
}

std::vector<DynamicCommunity> detect_and_match(std::span<const Snapshot> snapshots,
                                               double match_threshold, std::uint64_t rng_seed,
                                               int workers) {
    std::vector<std::vector<NodeSet>> windows(snapshots.size());
    parallel_for(snapshots.size(), workers, [&](std::size_t w) {
        if (snapshots[w].empty()) return;
        windows[w] = louvain(snapshots[w], mix_seed(rng_seed, w)).partition.communities;
        std::sort(windows[w].begin(), windows[w].end());
    });

    std::vector<DynamicCommunity> chains;
    std::vector<std::size_t> chain_of_prev;  // chain index per community of w-1

    for (std::size_t w = 0; w < snapshots.size(); ++w) {
        const Interval window = snapshots[w].window();
        const auto& comms = windows[w];
        std::vector<std::size_t> chain_of(comms.size(), SIZE_MAX);
        std::vector<bool> claimed(comms.size(), false);

        if (w > 0) {
            const auto& prev = windows[w - 1];
            for (std::size_t i = 0; i < prev.size(); ++i) {
                double best_j = -1.0;
                std::size_t best = SIZE_MAX;
                for (std::size_t j = 0; j < comms.size(); ++j) {
                    double sim = jaccard(prev[i], comms[j]);
                    if (sim >= match_threshold && sim > best_j) {
                        best_j = sim;
                        best = j;  // ties keep the lexicographically smaller list
                    }
                }
                if (best != SIZE_MAX && !claimed[best]) {
                    claimed[best] = true;
                    chain_of[best] = chain_of_prev[i];
                }
            }
        }

        for (std::size_t j = 0; j < comms.size(); ++j) {
            if (chain_of[j] == SIZE_MAX) {
                chain_of[j] = chains.size();
                chains.emplace_back();
            }
            chains[chain_of[j]].timeline.emplace_back(window, comms[j]);
        }
        chain_of_prev = std::move(chain_of);
    }
    return chains;
}

std::vector<TimedNodeSet> flatten_matches(std::span<const DynamicCommunity> chains) {
    std::vector<TimedNodeSet> out;
    for (const DynamicCommunity& chain : chains) {
        for (const auto& [window, nodes] : chain.timeline) out.push_back({nodes, window});
    }
    return out;
}

MetricsReport community_stats(const CommunityStore& store, const LinkStream& stream,
                              bool binary_weights) {
    MetricsReport report;
    report.community_count = store.size();
    if (store.empty()) return report;

    double persistence = 0.0;
    double size = 0.0;
    double stability = 0.0;
    double density = 0.0;
    double quality = 0.0;

    for (const StableCommunity& c : store.communities) {
        persistence += static_cast<double>(c.window_span());
        size += static_cast<double>(c.nodes.size());

        // Successive-window Jaccard of member sets; membership is constant
        // over the period, so this evaluates to 1 by construction.
        if (c.window_span() >= 2) {
            double acc = 0.0;
            for (int w = 1; w < c.window_span(); ++w) acc += jaccard(c.nodes, c.nodes);
            stability += acc / static_cast<double>(c.window_span() - 1);
        } else {
            stability += 1.0;
        }

        double dens = 0.0;
        double q = 0.0;
        for (const auto& [window_start, trace_q] : c.quality_trace) {
            q += trace_q;
            Snapshot snap = build_snapshot(stream, window_start, c.gamma, binary_weights);
            std::size_t internal_edges = 0;
            for (const SnapshotEdge& e : snap.edges) {
                if (set_contains(c.nodes, e.u) && set_contains(c.nodes, e.v)) ++internal_edges;
            }
            const double k = static_cast<double>(c.nodes.size());
            dens += 2.0 * static_cast<double>(internal_edges) / (k * (k - 1.0));
        }
        density += dens / static_cast<double>(c.window_span());
        quality += q / static_cast<double>(c.window_span());
    }

    const double count = static_cast<double>(store.size());
    report.mean_persistence = persistence / count;
    report.mean_size = size / count;
    report.mean_stability = stability / count;
    report.mean_density = density / count;
    report.mean_q = quality / count;
    return report;
}

std::vector<TimedNodeSet> truth_to_timed(const GroundTruth& truth) {
    std::vector<TimedNodeSet> out;
    out.reserve(truth.planted.size());
    for (const PlantedCommunity& pc : truth.planted) out.push_back({pc.nodes, pc.period()});
    return out;
}

std::vector<TimedNodeSet> store_to_timed(const CommunityStore& store, const LinkStream& stream,
                                         const Universe& universe) {
    std::vector<TimedNodeSet> out;
    out.reserve(store.size());
    for (const StableCommunity& c : store.communities) {
        TimedNodeSet entry;
        entry.period = c.period;
        entry.nodes.reserve(c.nodes.size());
        for (NodeId id : c.nodes) {
            const std::string& name = stream.node_name(id);
            auto mapped = universe.id_of(name);
            if (!mapped) {
                throw std::runtime_error("universe mismatch: node '" + name +
                                         "' is not part of the evaluation universe");
            }
            entry.nodes.push_back(*mapped);
        }
        normalize_node_set(entry.nodes);
        out.push_back(std::move(entry));
    }
    return out;
}

}  // namespace stable_streams
