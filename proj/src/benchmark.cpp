#include "stable_streams/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stable_streams {

void GeneratorParams::validate() const {
    if (T < 40) throw std::invalid_argument("T must be >= 40");
    if (N < 16) throw std::invalid_argument("N must be >= 16");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must be in [0,1]");
    if (SC < 0) throw std::invalid_argument("SC must be >= 0");
}

long long loguniform_int(long long lo, long long hi, Rng& rng) {
    if (lo < 1 || lo > hi) throw std::invalid_argument("loguniform_int: need 1 <= lo <= hi");
    if (lo == hi) return lo;
    const double log_lo = std::log(static_cast<double>(lo));
    const double log_hi = std::log(static_cast<double>(hi) + 1.0);
    double u = log_lo + rng.uniform() * (log_hi - log_lo);
    long long x = static_cast<long long>(std::floor(std::exp(u)));
    return std::clamp(x, lo, hi);
}

GeneratorOutput generate(const GeneratorParams& params) {
    params.validate();
    Rng rng(params.rng_seed);

    GroundTruth truth;
    truth.params = params;
    truth.planted.reserve(static_cast<std::size_t>(params.SC));

    std::vector<NodeId> ids(static_cast<std::size_t>(params.N));
    for (int i = 0; i < params.N; ++i) ids[static_cast<std::size_t>(i)] = static_cast<NodeId>(i);

    for (int c = 0; c < params.SC; ++c) {
        PlantedCommunity pc;
        long long n = loguniform_int(4, params.N / 4, rng);
        pc.duration = loguniform_int(10, params.T / 4, rng);
        pc.start = rng.uniform_int(0, params.T - pc.duration);
        pc.edge_prob = std::min(1.0, 10.0 / static_cast<double>(pc.duration));
        rng.shuffle(ids);
        pc.nodes.assign(ids.begin(), ids.begin() + n);
        normalize_node_set(pc.nodes);
        truth.planted.push_back(std::move(pc));
    }

    LinkStreamBuilder builder;
    // Node names are the decimal indices; interned lazily so the stream's
    // node set stays the set of observed endpoints.
    std::vector<std::string> names(static_cast<std::size_t>(params.N));
    for (int i = 0; i < params.N; ++i) names[static_cast<std::size_t>(i)] = std::to_string(i);

    auto emit = [&](long long t, NodeId u, NodeId v) {
        builder.add(static_cast<double>(t), names[u], names[v]);
    };

    for (long long t = 0; t < params.T; ++t) {
        // Noise: one Erdos-Renyi draw per node pair.
        for (int i = 0; i < params.N; ++i) {
            for (int j = i + 1; j < params.N; ++j) {
                if (rng.bernoulli(params.p)) {
                    emit(t, static_cast<NodeId>(i), static_cast<NodeId>(j));
                }
            }
        }
        // Planted communities overlay independently of the noise.
        for (const PlantedCommunity& pc : truth.planted) {
            if (t < pc.start || t >= pc.start + pc.duration) continue;
            for (std::size_t a = 0; a < pc.nodes.size(); ++a) {
                for (std::size_t b = a + 1; b < pc.nodes.size(); ++b) {
                    if (rng.bernoulli(pc.edge_prob)) emit(t, pc.nodes[a], pc.nodes[b]);
                }
            }
        }
    }

    GeneratorOutput out{builder.finish(), std::move(truth)};
    return out;
}

}  // namespace stable_streams
