#ifndef STABLE_STREAMS_EVALUATION_HPP
#define STABLE_STREAMS_EVALUATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "stable_streams/benchmark.hpp"
#include "stable_streams/linkstream.hpp"
#include "stable_streams/multiscale.hpp"
#include "stable_streams/types.hpp"

namespace stable_streams {

// Shared node universe for cover comparison; ids are positions in `names`.
struct Universe {
    std::vector<std::string> names;
    std::unordered_map<std::string, NodeId> index;

    static Universe integer_range(int n);
    static Universe from_names(std::vector<std::string> names);
    std::optional<NodeId> id_of(const std::string& name) const;
    int size() const { return static_cast<int>(names.size()); }
};

// Possibly-overlapping family of node sets over universe ids [0, n).
struct Cover {
    int universe_size = 0;
    std::vector<NodeSet> sets;
};

// A node set active over a half-open period, the common currency of
// evaluation inputs (detected communities, planted truth, baseline windows).
struct TimedNodeSet {
    NodeSet nodes;
    Interval period;
};

// Node sets of all communities active at t; every universe node outside all
// of them is appended as a singleton, so the cover always spans the universe.
Cover cover_at(std::span<const TimedNodeSet> communities, double t, int universe_size);

// Overlapping NMI for covers: per-set best-match conditional entropies under
// the complement-rejection constraint, normalized lack of information
// averaged over both directions. 1 for identical covers (up to reordering),
// ~0 for independent ones. Throws on mismatched universes.
double overlapping_nmi(const Cover& x, const Cover& y);

struct NmiOptions {
    long long stride = 1;  // evaluate every stride-th step
    int workers = 1;
};

// Mean overlapping NMI between the two covers over steps 0, stride, ... < T.
double timeline_nmi(std::span<const TimedNodeSet> detected,
                    std::span<const TimedNodeSet> truth, long long steps,
                    int universe_size, const NmiOptions& opts = {});

// Detected store vs planted truth on the truth's node universe.
double timeline_nmi(const CommunityStore& store, const LinkStream& stream,
                    const GroundTruth& truth, const NmiOptions& opts = {});

// One chained dynamic community of the detect & match baseline: the per
// window member sets of consecutively matched static communities.
struct DynamicCommunity {
    std::vector<std::pair<Interval, NodeSet>> timeline;

    Interval span() const {
        if (timeline.empty()) return {};
        return {timeline.front().first.start, timeline.back().first.end};
    }
};

// Louvain on every snapshot, then chains each community to its best-Jaccard
// successor in the next window when the similarity reaches match_threshold.
// Ties pick the lexicographically smaller node list; a successor already
// claimed at this transition ends the chain.
std::vector<DynamicCommunity> detect_and_match(std::span<const Snapshot> snapshots,
                                               double match_threshold,
                                               std::uint64_t rng_seed, int workers = 1);

// Per-window view of the chains, usable as NMI input.
std::vector<TimedNodeSet> flatten_matches(std::span<const DynamicCommunity> chains);

struct MetricsReport {
    std::size_t community_count = 0;
    std::optional<double> mean_persistence;  // windows
    std::optional<double> mean_size;         // nodes
    std::optional<double> mean_stability;    // successive-window Jaccard
    std::optional<double> mean_density;      // degree / (size - 1)
    std::optional<double> mean_q;            // per-window qc
};

// Aggregate community statistics, recomputed on the stream.
MetricsReport community_stats(const CommunityStore& store, const LinkStream& stream,
                              bool binary_weights = false);

// --- universe plumbing ------------------------------------------------------

// Planted communities as timed sets over the truth universe [0, N).
std::vector<TimedNodeSet> truth_to_timed(const GroundTruth& truth);

// Remaps stream-indexed store communities into the universe's id space.
// Throws std::runtime_error when a member is missing from the universe.
std::vector<TimedNodeSet> store_to_timed(const CommunityStore& store,
                                         const LinkStream& stream,
                                         const Universe& universe);

}  // namespace stable_streams

#endif
