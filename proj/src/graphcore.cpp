#include "stable_streams/graphcore.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "stable_streams/rng.hpp"

namespace stable_streams {

std::uint32_t Partition::label_of(NodeId id) const {
    auto it = std::lower_bound(assignment.begin(), assignment.end(), id,
                               [](const auto& p, NodeId n) { return p.first < n; });
    if (it == assignment.end() || it->first != id) {
        throw std::out_of_range("node not covered by partition");
    }
    return it->second;
}

Partition Partition::from_communities(std::vector<NodeSet> communities) {
    for (auto& c : communities) {
        if (c.empty()) throw std::invalid_argument("empty community in partition");
        normalize_node_set(c);
    }
    std::sort(communities.begin(), communities.end(),
              [](const NodeSet& a, const NodeSet& b) { return a.front() < b.front(); });

    Partition p;
    p.communities = std::move(communities);
    for (std::uint32_t label = 0; label < p.communities.size(); ++label) {
        for (NodeId id : p.communities[label]) p.assignment.emplace_back(id, label);
    }
    std::sort(p.assignment.begin(), p.assignment.end());
    for (std::size_t i = 1; i < p.assignment.size(); ++i) {
        if (p.assignment[i].first == p.assignment[i - 1].first) {
            throw std::invalid_argument("node assigned to two communities");
        }
    }
    return p;
}

namespace {

// One aggregation level of the Louvain hierarchy. Self-loop weight w
// contributes 2w to a node's degree, matching the aggregated-graph
// convention.
struct LevelGraph {
    std::size_t n = 0;
    std::vector<std::size_t> offsets;  // n + 1
    std::vector<std::uint32_t> nbr;
    std::vector<double> weight;
    std::vector<double> self_w;
    std::vector<double> degree;
    double two_m = 0.0;

    void finalize_degrees() {
        degree.assign(n, 0.0);
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t e = offsets[u]; e < offsets[u + 1]; ++e) degree[u] += weight[e];
            degree[u] += 2.0 * self_w[u];
        }
        two_m = 0.0;
        for (double d : degree) two_m += d;
    }
};

LevelGraph level_from_edges(std::size_t n,
                            const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges,
                            std::vector<double> self_w) {
    LevelGraph g;
    g.n = n;
    g.self_w = std::move(self_w);
    g.offsets.assign(n + 1, 0);
    for (const auto& [u, v, w] : edges) {
        ++g.offsets[u + 1];
        ++g.offsets[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
    g.nbr.resize(edges.size() * 2);
    g.weight.resize(edges.size() * 2);
    std::vector<std::size_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (const auto& [u, v, w] : edges) {
        g.nbr[cursor[u]] = v;
        g.weight[cursor[u]++] = w;
        g.nbr[cursor[v]] = u;
        g.weight[cursor[v]++] = w;
    }
    g.finalize_degrees();
    return g;
}

double level_modularity(const LevelGraph& g, const std::vector<std::uint32_t>& comm) {
    std::vector<double> internal(g.n, 0.0);
    std::vector<double> tot(g.n, 0.0);
    for (std::size_t u = 0; u < g.n; ++u) {
        tot[comm[u]] += g.degree[u];
        internal[comm[u]] += 2.0 * g.self_w[u];
        for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
            if (comm[g.nbr[e]] == comm[u]) internal[comm[u]] += g.weight[e];
        }
    }
    double q = 0.0;
    for (std::size_t c = 0; c < g.n; ++c) {
        if (tot[c] == 0.0 && internal[c] == 0.0) continue;
        double frac = tot[c] / g.two_m;
        q += internal[c] / g.two_m - frac * frac;
    }
    return q;
}

// Local moving phase. Returns true when at least one node changed community.
bool local_moving(const LevelGraph& g, std::vector<std::uint32_t>& comm, Rng& rng) {
    std::vector<std::uint32_t> order(g.n);
    for (std::size_t i = 0; i < g.n; ++i) order[i] = static_cast<std::uint32_t>(i);
    rng.shuffle(order);

    std::vector<double> tot(g.n, 0.0);
    for (std::size_t u = 0; u < g.n; ++u) tot[comm[u]] += g.degree[u];

    // Scratch accumulator for weights from a node to neighbor communities.
    std::vector<double> to_comm(g.n, 0.0);
    std::vector<std::uint32_t> touched;
    touched.reserve(64);

    bool any_move = false;
    bool improved = true;
    int sweeps = 0;
    while (improved && ++sweeps <= 1000) {
        improved = false;
        for (std::uint32_t u : order) {
            const std::uint32_t c_old = comm[u];

            touched.clear();
            for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
                std::uint32_t c = comm[g.nbr[e]];
                if (to_comm[c] == 0.0 && g.weight[e] != 0.0) touched.push_back(c);
                to_comm[c] += g.weight[e];
            }

            tot[c_old] -= g.degree[u];
            const double degree_scaled = g.degree[u] / g.two_m;
            std::uint32_t best = c_old;
            double best_gain = to_comm[c_old] - degree_scaled * tot[c_old];
            for (std::uint32_t c : touched) {
                if (c == c_old) continue;
                double gain = to_comm[c] - degree_scaled * tot[c];
                if (gain > best_gain) {
                    best_gain = gain;
                    best = c;
                }
            }
            tot[best] += g.degree[u];
            comm[u] = best;
            if (best != c_old) {
                improved = true;
                any_move = true;
            }

            for (std::uint32_t c : touched) to_comm[c] = 0.0;
            to_comm[c_old] = 0.0;
        }
    }
    return any_move;
}

// Compacts community labels by first appearance in node order.
std::size_t relabel(std::vector<std::uint32_t>& comm) {
    std::vector<std::uint32_t> map(comm.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& c : comm) {
        if (map[c] == UINT32_MAX) map[c] = next++;
        c = map[c];
    }
    return next;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::uint32_t>& comm,
                     std::size_t n_comm) {
    std::vector<double> self_w(n_comm, 0.0);
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> agg;
    for (std::size_t u = 0; u < g.n; ++u) {
        self_w[comm[u]] += g.self_w[u];
        for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
            std::uint32_t v = g.nbr[e];
            if (v < u) continue;  // each undirected edge once
            std::uint32_t cu = comm[u];
            std::uint32_t cv = comm[v];
            if (cu == cv) {
                self_w[cu] += g.weight[e];
            } else {
                if (cv < cu) std::swap(cu, cv);
                agg[{cu, cv}] += g.weight[e];
            }
        }
    }
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges;
    edges.reserve(agg.size());
    for (const auto& [key, w] : agg) edges.emplace_back(key.first, key.second, w);
    return level_from_edges(n_comm, edges, std::move(self_w));
}

}  // namespace

LouvainResult louvain(const Snapshot& g, std::uint64_t rng_seed) {
    if (g.edges.empty()) throw std::invalid_argument("louvain: graph has no edges");

    const std::size_t n = g.strengths.size();
    std::vector<NodeId> local_to_global(n);
    for (std::size_t i = 0; i < n; ++i) local_to_global[i] = g.strengths[i].first;
    auto local_id = [&](NodeId id) {
        auto it = std::lower_bound(local_to_global.begin(), local_to_global.end(), id);
        return static_cast<std::uint32_t>(it - local_to_global.begin());
    };

    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges;
    edges.reserve(g.edges.size());
    for (const SnapshotEdge& e : g.edges) edges.emplace_back(local_id(e.u), local_id(e.v), e.w);

    LevelGraph level = level_from_edges(n, edges, std::vector<double>(n, 0.0));

    Rng rng(rng_seed);
    LouvainResult result;

    // node -> community on the original compacted ids, refined per level
    std::vector<std::uint32_t> global(n);
    for (std::size_t i = 0; i < n; ++i) global[i] = static_cast<std::uint32_t>(i);

    for (;;) {
        std::vector<std::uint32_t> comm(level.n);
        for (std::size_t i = 0; i < level.n; ++i) comm[i] = static_cast<std::uint32_t>(i);

        bool moved = local_moving(level, comm, rng);
        std::size_t n_comm = relabel(comm);
        for (auto& c : global) c = comm[c];
        // An idle pass repeats the previous modularity; record it only when
        // it is the first (and so only) pass.
        if (moved || result.pass_modularity.empty()) {
            result.pass_modularity.push_back(level_modularity(level, comm));
        }
        if (!moved || n_comm == level.n) break;
        level = aggregate(level, comm, n_comm);
    }

    std::size_t n_comm = relabel(global);
    std::vector<NodeSet> communities(n_comm);
    for (std::size_t i = 0; i < n; ++i) communities[global[i]].push_back(local_to_global[i]);
    result.partition = Partition::from_communities(std::move(communities));
    return result;
}

double modularity(const Snapshot& g, const Partition& p) {
    const double m = g.total_weight;
    if (m <= 0.0) throw std::invalid_argument("modularity: graph has zero total weight");

    std::size_t covered = 0;
    for (const NodeSet& c : p.communities) covered += c.size();
    if (covered != g.strengths.size() || p.assignment.size() != g.strengths.size()) {
        throw std::invalid_argument("modularity: partition must cover exactly the graph's nodes");
    }
    for (const auto& [id, s] : g.strengths) {
        p.label_of(id);  // throws when a graph node is missing
    }

    const double two_m = 2.0 * m;
    std::vector<double> internal(p.communities.size(), 0.0);
    std::vector<double> tot(p.communities.size(), 0.0);
    for (const SnapshotEdge& e : g.edges) {
        std::uint32_t lu = p.label_of(e.u);
        std::uint32_t lv = p.label_of(e.v);
        if (lu == lv) internal[lu] += 2.0 * e.w;
    }
    for (const auto& [id, s] : g.strengths) tot[p.label_of(id)] += s;

    double q = 0.0;
    for (std::size_t c = 0; c < p.communities.size(); ++c) {
        double frac = tot[c] / two_m;
        q += internal[c] / two_m - frac * frac;
    }
    return q;
}

double conductance(const Snapshot& g, const NodeSet& c) {
    if (c.empty()) throw std::invalid_argument("conductance: empty node set");

    double cut = 0.0;
    for (const SnapshotEdge& e : g.edges) {
        bool in_u = set_contains(c, e.u);
        bool in_v = set_contains(c, e.v);
        if (in_u != in_v) cut += e.w;
    }
    double vol_c = 0.0;
    for (NodeId id : c) vol_c += g.strength_of(id);
    const double vol_rest = 2.0 * g.total_weight - vol_c;

    // Both 0/0 corners resolve to the worst score: a set with no active
    // edges, and a set spanning every active edge.
    if (vol_c <= 0.0 || vol_rest <= 0.0) return 1.0;
    return cut / std::min(vol_c, vol_rest);
}

double qc(const Snapshot& g, const NodeSet& c) { return 1.0 - conductance(g, c); }

double jaccard(const NodeSet& a, const NodeSet& b) {
    if (a.empty() && b.empty()) return 0.0;
    const std::size_t inter = intersection_size(a, b);
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

const Functions& Functions::defaults() {
    static const Functions fns = [] {
        Functions f;
        f.cd = [](const Snapshot& g, std::uint64_t seed) {
            return louvain(g, seed).partition.communities;
        };
        f.qc = [](const Snapshot& g, const NodeSet& c) { return stable_streams::qc(g, c); };
        f.css = [](const NodeSet& a, const NodeSet& b) { return stable_streams::jaccard(a, b); };
        return f;
    }();
    return fns;
}

}  // namespace stable_streams
