#ifndef STABLE_STREAMS_BENCHMARK_HPP
#define STABLE_STREAMS_BENCHMARK_HPP

#include <cstdint>
#include <vector>

#include "stable_streams/linkstream.hpp"
#include "stable_streams/rng.hpp"
#include "stable_streams/types.hpp"

namespace stable_streams {

struct GeneratorParams {
    long long T = 5000;   // step count
    int N = 100;          // node count
    double p = 0.1;       // per-step noise edge probability
    int SC = 10;          // planted community count
    std::uint64_t rng_seed = 0;

    void validate() const;  // throws std::invalid_argument
};

struct PlantedCommunity {
    NodeSet nodes;            // indices in [0, N)
    long long start = 0;      // first active step
    long long duration = 0;   // active steps
    double edge_prob = 0.0;   // min(1, 10/duration)

    Interval period() const {
        return {static_cast<double>(start), static_cast<double>(start + duration)};
    }
};

struct GroundTruth {
    GeneratorParams params;
    std::vector<PlantedCommunity> planted;
};

struct GeneratorOutput {
    LinkStream stream;
    GroundTruth truth;
};

// Integer in [lo, hi] with density proportional to 1/x: uniform draw on
// [ln lo, ln(hi+1)), exponentiated and floored.
long long loguniform_int(long long lo, long long hi, Rng& rng);

// Per step, every node pair emits a noise interaction with probability p;
// members of each active planted community additionally emit with probability
// min(1, 10/d). Community sizes and durations are log-uniform, start dates
// uniform. Fully reproducible from rng_seed.
GeneratorOutput generate(const GeneratorParams& params);

}  // namespace stable_streams

#endif
