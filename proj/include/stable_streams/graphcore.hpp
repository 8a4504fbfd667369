#ifndef STABLE_STREAMS_GRAPHCORE_HPP
#define STABLE_STREAMS_GRAPHCORE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "stable_streams/linkstream.hpp"
#include "stable_streams/types.hpp"

namespace stable_streams {

// Disjoint cover of a snapshot's active nodes. Communities are sorted node
// sets, ordered by smallest member; assignment maps node -> community index.
struct Partition {
    std::vector<std::pair<NodeId, std::uint32_t>> assignment;  // sorted by node
    std::vector<NodeSet> communities;

    std::uint32_t label_of(NodeId id) const;
    static Partition from_communities(std::vector<NodeSet> communities);
};

struct LouvainResult {
    Partition partition;
    // Modularity after each aggregation pass; never decreasing.
    std::vector<double> pass_modularity;
};

// Greedy modularity maximization with hierarchical aggregation. Node visit
// order is a deterministic shuffle derived from rng_seed; among equal-gain
// moves a node stays in its current community. Throws on an edgeless graph.
LouvainResult louvain(const Snapshot& g, std::uint64_t rng_seed);

// Weighted Newman modularity of a partition covering exactly g's active
// nodes. Throws when total weight is zero or the cover does not match.
double modularity(const Snapshot& g, const Partition& p);

// cut(C, ~C) / min(A(C), A(~C)) with weighted degrees. Nodes of c absent
// from g contribute zero strength. Degenerate cases score 1: a set with no
// active edges, and a set spanning all active edges.
double conductance(const Snapshot& g, const NodeSet& c);

// Community quality, 1 - conductance. Higher is better.
double qc(const Snapshot& g, const NodeSet& c);

// |a n b| / |a u b|; 0 when both sets are empty.
double jaccard(const NodeSet& a, const NodeSet& b);

// The three pluggable functions of the pipeline: static detection (CD),
// community quality (QC) and set similarity (CSS). Defaults are Louvain,
// 1 - conductance and the Jaccard index.
struct Functions {
    std::function<std::vector<NodeSet>(const Snapshot&, std::uint64_t seed)> cd;
    std::function<double(const Snapshot&, const NodeSet&)> qc;
    std::function<double(const NodeSet&, const NodeSet&)> css;

    static const Functions& defaults();
};

}  // namespace stable_streams

#endif
