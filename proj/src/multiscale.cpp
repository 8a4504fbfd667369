#include "stable_streams/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "stable_streams/parallel.hpp"
#include "stable_streams/rng.hpp"

namespace stable_streams {

void Config::validate() const {
    if (theta_q < 0.0 || theta_q > 1.0) throw std::invalid_argument("theta_q must be in [0,1]");
    if (theta_s < 0.0 || theta_s > 1.0) throw std::invalid_argument("theta_s must be in [0,1]");
    if (theta_p < 1) throw std::invalid_argument("theta_p must be >= 1");
    if (!(theta_gamma > 0.0)) throw std::invalid_argument("theta_gamma must be > 0");
    if (theta_e && (*theta_e < 0.0 || *theta_e > 1.0)) {
        throw std::invalid_argument("theta_e must be in [0,1]");
    }
    if (workers < 0) throw std::invalid_argument("workers must be >= 0");
}

std::vector<double> scale_ladder(double duration, int theta_p, double theta_gamma,
                                 bool integral_times) {
    if (!(duration > 0)) throw std::invalid_argument("duration must be > 0");
    if (theta_p < 1) throw std::invalid_argument("theta_p must be >= 1");
    if (!(theta_gamma > 0)) throw std::invalid_argument("theta_gamma must be > 0");

    double gamma = duration / static_cast<double>(theta_p);
    if (integral_times) gamma = std::floor(gamma);
    if (gamma < theta_gamma) {
        throw std::runtime_error("stream too short for requested finest scale");
    }

    std::vector<double> ladder;
    for (;;) {
        ladder.push_back(gamma);
        double next = gamma / 2.0;
        if (integral_times) next = std::floor(next);
        if (next < theta_gamma || next <= 0.0 || next >= gamma) break;
        gamma = next;
    }
    return ladder;
}

namespace {

void seeds_from_snapshot(const Snapshot& snap, int window_index, const Config& cfg,
                         const Functions& fns, std::vector<Seed>& out) {
    if (snap.empty()) return;
    std::vector<NodeSet> communities = fns.cd(snap, mix_seed(cfg.rng_seed, window_index));
    for (NodeSet& c : communities) {
        if (c.size() < 3) continue;  // pairs flood the pipeline, never seeds
        double quality = fns.qc(snap, c);
        if (quality > cfg.theta_q) {
            out.push_back({std::move(c), snap.window_start, snap.window_length, quality,
                           window_index});
        }
    }
}

void order_seeds(std::vector<Seed>& seeds) {
    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
        if (a.quality != b.quality) return a.quality > b.quality;
        if (a.window_start != b.window_start) return a.window_start < b.window_start;
        return a.nodes < b.nodes;
    });
}

// Builds snapshots on demand and keeps them for the scale being processed.
class SnapshotCache {
public:
    SnapshotCache(const LinkStream& stream, const WindowGrid& grid, bool binary)
        : stream_(stream), grid_(grid), binary_(binary) {}

    const Snapshot& at(int k) {
        auto it = cache_.find(k);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(k, snapshot_at(stream_, grid_, k, binary_)).first->second;
    }

    const WindowGrid& grid() const { return grid_; }

private:
    const LinkStream& stream_;
    WindowGrid grid_;
    bool binary_;
    std::unordered_map<int, Snapshot> cache_;
};

std::vector<Seed> discover_on_grid(const LinkStream& stream, const WindowGrid& grid,
                                   const Config& cfg, const Functions& fns) {
    std::vector<std::vector<Seed>> slots(static_cast<std::size_t>(grid.count));
    parallel_for(slots.size(), cfg.workers, [&](std::size_t k) {
        Snapshot snap = snapshot_at(stream, grid, static_cast<int>(k), cfg.binary_weights);
        seeds_from_snapshot(snap, static_cast<int>(k), cfg, fns, slots[k]);
    });
    std::vector<Seed> seeds;
    for (auto& slot : slots) {
        for (Seed& s : slot) seeds.push_back(std::move(s));
    }
    order_seeds(seeds);
    return seeds;
}

std::optional<StableCommunity> expand_with_cache(const Seed& s, SnapshotCache& cache,
                                                 const Config& cfg, const Functions& fns,
                                                 const LinkStream& stream) {
    const WindowGrid& grid = cache.grid();
    const double theta_e = cfg.effective_theta_e();

    const double seed_offset = stream.to_offset(s.window_start);
    const long long idx = std::llround((seed_offset - grid.t0_offset) / grid.gamma);
    if (idx < 0 || idx >= grid.count) {
        throw std::invalid_argument("seed window lies outside the stream's window grid");
    }

    // The origin window must itself clear the expansion threshold, otherwise
    // the result could not hold quality > theta_e over its whole period.
    if (!(s.quality > theta_e)) return std::nullopt;

    long long lo = idx;
    long long hi = idx;
    std::vector<double> forward;
    std::vector<double> backward;
    for (long long k = idx + 1; k < grid.count; ++k) {
        double q = fns.qc(cache.at(static_cast<int>(k)), s.nodes);
        if (!(q > theta_e)) break;
        forward.push_back(q);
        hi = k;
    }
    for (long long k = idx - 1; k >= 0; --k) {
        double q = fns.qc(cache.at(static_cast<int>(k)), s.nodes);
        if (!(q > theta_e)) break;
        backward.push_back(q);
        lo = k;
    }

    if (hi - lo + 1 < cfg.theta_p) return std::nullopt;

    StableCommunity community;
    community.nodes = s.nodes;
    community.gamma = grid.gamma;
    community.period = {stream.to_original(grid.window_start_offset(static_cast<int>(lo))),
                        stream.to_original(grid.window_start_offset(static_cast<int>(hi + 1)))};
    community.seed_window_start = s.window_start;
    community.seed_quality = s.quality;
    community.quality_trace.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long long k = lo; k <= hi; ++k) {
        double q;
        if (k < idx) {
            q = backward[static_cast<std::size_t>(idx - 1 - k)];
        } else if (k == idx) {
            q = s.quality;
        } else {
            q = forward[static_cast<std::size_t>(k - idx - 1)];
        }
        community.quality_trace.emplace_back(
            stream.to_original(grid.window_start_offset(static_cast<int>(k))), q);
    }
    return community;
}

}  // namespace

std::vector<Seed> discover_seeds(std::span<const Snapshot> snapshots, const Config& cfg,
                                 const Functions& fns) {
    cfg.validate();
    for (const Snapshot& s : snapshots) {
        if (s.window_length != snapshots.front().window_length) {
            throw std::invalid_argument("discover_seeds: snapshots must share one gamma");
        }
    }
    std::vector<std::vector<Seed>> slots(snapshots.size());
    parallel_for(snapshots.size(), cfg.workers, [&](std::size_t k) {
        seeds_from_snapshot(snapshots[k], static_cast<int>(k), cfg, fns, slots[k]);
    });
    std::vector<Seed> seeds;
    for (auto& slot : slots) {
        for (Seed& s : slot) seeds.push_back(std::move(s));
    }
    order_seeds(seeds);
    return seeds;
}

bool seed_redundant(const Seed& s, const CommunityStore& store, const Config& cfg,
                    const Functions& fns) {
    const Interval window = s.window();
    for (const StableCommunity& c : store.communities) {
        if (!window.intersects(c.period)) continue;  // temporally new
        if (fns.css(s.nodes, c.nodes) > cfg.theta_s) return true;
    }
    return false;
}

std::vector<Seed> prune_seeds(std::span<const Seed> seeds, const CommunityStore& store,
                              const Config& cfg, const Functions& fns) {
    std::vector<Seed> kept;
    kept.reserve(seeds.size());
    for (const Seed& s : seeds) {
        if (!seed_redundant(s, store, cfg, fns)) kept.push_back(s);
    }
    return kept;
}

std::optional<StableCommunity> expand_seed(const Seed& s, const LinkStream& stream,
                                           const Config& cfg, const Functions& fns) {
    cfg.validate();
    WindowGrid grid = make_grid(stream, s.gamma, cfg.t0);
    SnapshotCache cache(stream, grid, cfg.binary_weights);
    return expand_with_cache(s, cache, cfg, fns, stream);
}

CommunityStore detect(const LinkStream& stream, const Config& cfg, const Functions& fns) {
    cfg.validate();
    std::vector<double> ladder = scale_ladder(stream.duration(), cfg.theta_p, cfg.theta_gamma,
                                              stream.integral_times());

    CommunityStore store;
    for (double gamma : ladder) {
        WindowGrid grid = make_grid(stream, gamma, cfg.t0);
        if (grid.count <= 0) continue;

        std::vector<Seed> seeds = discover_on_grid(stream, grid, cfg, fns);
        SnapshotCache cache(stream, grid, cfg.binary_weights);

        // Pruning consults the live store: a community accepted at this scale
        // prunes the lower-quality seeds that follow it.
        for (const Seed& s : seeds) {
            if (seed_redundant(s, store, cfg, fns)) continue;
            if (auto community = expand_with_cache(s, cache, cfg, fns, stream)) {
                store.communities.push_back(std::move(*community));
            }
        }
    }
    return store;
}

}  // namespace stable_streams
