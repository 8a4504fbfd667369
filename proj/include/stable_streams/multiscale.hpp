#ifndef STABLE_STREAMS_MULTISCALE_HPP
#define STABLE_STREAMS_MULTISCALE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stable_streams/graphcore.hpp"
#include "stable_streams/linkstream.hpp"
#include "stable_streams/types.hpp"

namespace stable_streams {

struct Config {
    double theta_q = 0.7;       // seed quality threshold
    double theta_s = 0.3;       // redundancy similarity threshold
    int theta_p = 3;            // stability threshold, in windows
    double theta_gamma = 1.0;   // finest granularity to study
    std::optional<double> theta_e;  // expansion threshold; defaults to theta_s
    std::optional<double> t0;       // grid anchor (original time); defaults to t_min
    std::uint64_t rng_seed = 0;
    int workers = 0;            // 0 = all hardware threads
    bool binary_weights = false;

    double effective_theta_e() const { return theta_e.value_or(theta_s); }
    void validate() const;  // throws std::invalid_argument
};

// High-quality community found on one snapshot, candidate for expansion.
struct Seed {
    NodeSet nodes;
    double window_start = 0.0;  // original time
    double gamma = 0.0;
    double quality = 0.0;       // qc at the origin window
    int window_index = 0;

    Interval window() const { return {window_start, window_start + gamma}; }
};

// Node group holding quality above theta_e over every window of a contiguous
// period at granularity gamma. The member set is identical in every window.
struct StableCommunity {
    NodeSet nodes;
    Interval period;  // union of contiguous gamma-aligned windows
    double gamma = 0.0;
    // (window_start, qc) per window of the period, chronological.
    std::vector<std::pair<double, double>> quality_trace;
    double seed_window_start = 0.0;
    double seed_quality = 0.0;

    int window_span() const { return static_cast<int>(quality_trace.size()); }
};

struct CommunityStore {
    std::vector<StableCommunity> communities;  // discovery order

    bool empty() const { return communities.empty(); }
    std::size_t size() const { return communities.size(); }
};

// Descending list of granularities: gamma_max = duration / theta_p, halved
// until the next value would drop below theta_gamma. Integer-floored at each
// halving when integral_times is set. Throws when gamma_max < theta_gamma.
std::vector<double> scale_ladder(double duration, int theta_p, double theta_gamma,
                                 bool integral_times = true);

// Every CD community of size >= 3 with quality > theta_q on a snapshot with
// at least one edge, ordered by (quality desc, window start asc, node list).
// Snapshots must share one gamma. Parallel across snapshots.
std::vector<Seed> discover_seeds(std::span<const Snapshot> snapshots, const Config& cfg,
                                 const Functions& fns = Functions::defaults());

// True when some stored community is redundant with the seed both
// topologically (CSS > theta_s) and temporally (periods intersect).
bool seed_redundant(const Seed& s, const CommunityStore& store, const Config& cfg,
                    const Functions& fns = Functions::defaults());

// Keeps the seeds that are not redundant with any community in the store.
std::vector<Seed> prune_seeds(std::span<const Seed> seeds, const CommunityStore& store,
                              const Config& cfg, const Functions& fns = Functions::defaults());

// Grows the seed's period window-by-window in both temporal directions while
// quality stays above theta_e; membership never changes. Returns the expanded
// community when its period spans at least theta_p windows.
std::optional<StableCommunity> expand_seed(const Seed& s, const LinkStream& stream,
                                           const Config& cfg,
                                           const Functions& fns = Functions::defaults());

// Full coarse-to-fine pipeline: per scale, discover seeds in parallel, prune
// each against the live store in descending-quality order, expand survivors
// and append accepted communities. Deterministic for a fixed config.
CommunityStore detect(const LinkStream& stream, const Config& cfg,
                      const Functions& fns = Functions::defaults());

}  // namespace stable_streams

#endif
