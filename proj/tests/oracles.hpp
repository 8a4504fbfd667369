#ifndef STABLE_STREAMS_TEST_ORACLES_HPP
#define STABLE_STREAMS_TEST_ORACLES_HPP

// Brute-force reference implementations used to pin expected values. These
// deliberately avoid the library's data paths: everything works on dense
// adjacency matrices or per-node loops.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "stable_streams/evaluation.hpp"
#include "stable_streams/linkstream.hpp"
#include "stable_streams/types.hpp"

namespace test_oracles {

using stable_streams::Cover;
using stable_streams::NodeId;
using stable_streams::NodeSet;
using stable_streams::Snapshot;

struct DenseGraph {
    std::size_t n = 0;
    std::vector<std::vector<double>> a;  // adjacency matrix

    explicit DenseGraph(std::size_t n_) : n(n_), a(n_, std::vector<double>(n_, 0.0)) {}
};

// Densifies a snapshot onto node ids [0, max_id].
inline DenseGraph densify(const Snapshot& g, std::size_t n) {
    DenseGraph d(n);
    for (const auto& e : g.edges) {
        d.a[e.u][e.v] += e.w;
        d.a[e.v][e.u] += e.w;
    }
    return d;
}

inline double brute_conductance(const DenseGraph& g, const std::vector<bool>& in_c) {
    double cut = 0.0;
    double vol_c = 0.0;
    double vol_rest = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t j = 0; j < g.n; ++j) {
            if (in_c[i]) {
                vol_c += g.a[i][j];
            } else {
                vol_rest += g.a[i][j];
            }
            if (in_c[i] && !in_c[j]) cut += g.a[i][j];
        }
    }
    if (vol_c <= 0.0 || vol_rest <= 0.0) return 1.0;
    return cut / std::min(vol_c, vol_rest);
}

// Modularity of an assignment vector, straight from the definition.
inline double brute_modularity(const DenseGraph& g, const std::vector<int>& label) {
    double two_m = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t j = 0; j < g.n; ++j) two_m += g.a[i][j];
    }
    std::map<int, double> internal;
    std::map<int, double> tot;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t j = 0; j < g.n; ++j) {
            tot[label[i]] += g.a[i][j];
            if (label[i] == label[j]) internal[label[i]] += g.a[i][j];
        }
    }
    double q = 0.0;
    for (const auto& [c, t] : tot) {
        q += internal[c] / two_m - (t / two_m) * (t / two_m);
    }
    return q;
}

// Exhaustive best-modularity assignment over all labelings with at most
// `max_blocks` blocks. Feasible for n <= 10 or so.
inline std::vector<int> brute_best_partition(const DenseGraph& g, int max_blocks,
                                             double* best_q_out = nullptr) {
    std::vector<int> label(g.n, 0);
    std::vector<int> best(g.n, 0);
    double best_q = -1e9;
    const std::size_t total = [&] {
        std::size_t t = 1;
        for (std::size_t i = 0; i < g.n; ++i) t *= static_cast<std::size_t>(max_blocks);
        return t;
    }();
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = 0; i < g.n; ++i) {
            label[i] = static_cast<int>(c % static_cast<std::size_t>(max_blocks));
            c /= static_cast<std::size_t>(max_blocks);
        }
        double q = brute_modularity(g, label);
        if (q > best_q) {
            best_q = q;
            best = label;
        }
    }
    if (best_q_out) *best_q_out = best_q;
    return best;
}

// --- overlapping NMI, computed per node pair from scratch ---------------------

inline double nmi_h(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

inline double brute_set_entropy(const std::vector<bool>& s) {
    std::size_t k = 0;
    for (bool b : s) {
        if (b) ++k;
    }
    double p = static_cast<double>(k) / static_cast<double>(s.size());
    return nmi_h(p) + nmi_h(1.0 - p);
}

// Normalized H(X|Y) for covers given as membership tables, averaged over the
// sets of X; the degenerate-entropy convention matches the library: a set
// with zero entropy counts 0 when the other cover contains an identical set
// and 1 otherwise.
inline double brute_normalized_conditional(const std::vector<std::vector<bool>>& X,
                                           const std::vector<std::vector<bool>>& Y) {
    const std::size_t n = X.front().size();
    double total = 0.0;
    for (const auto& xs : X) {
        double hx = brute_set_entropy(xs);
        if (hx == 0.0) {
            bool matched = false;
            for (const auto& ys : Y) {
                if (ys == xs) matched = true;
            }
            total += matched ? 0.0 : 1.0;
            continue;
        }
        double best = hx;
        for (const auto& ys : Y) {
            std::size_t n11 = 0, n10 = 0, n01 = 0, n00 = 0;
            for (std::size_t v = 0; v < n; ++v) {
                if (xs[v] && ys[v]) ++n11;
                if (xs[v] && !ys[v]) ++n10;
                if (!xs[v] && ys[v]) ++n01;
                if (!xs[v] && !ys[v]) ++n00;
            }
            const double nd = static_cast<double>(n);
            double h11 = nmi_h(static_cast<double>(n11) / nd);
            double h10 = nmi_h(static_cast<double>(n10) / nd);
            double h01 = nmi_h(static_cast<double>(n01) / nd);
            double h00 = nmi_h(static_cast<double>(n00) / nd);
            if (h11 + h00 < h01 + h10) continue;
            double hy = brute_set_entropy(ys);
            double cond = (h11 + h10 + h01 + h00) - hy;
            if (cond < best) best = cond;
        }
        if (best < 0.0) best = 0.0;
        total += best / hx;
    }
    return total / static_cast<double>(X.size());
}

inline std::vector<std::vector<bool>> to_membership(const Cover& c) {
    std::vector<std::vector<bool>> rows;
    for (const NodeSet& s : c.sets) {
        std::vector<bool> row(static_cast<std::size_t>(c.universe_size), false);
        for (NodeId id : s) row[id] = true;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline double brute_overlapping_nmi(const Cover& x, const Cover& y) {
    if (x.sets.empty() && y.sets.empty()) return 1.0;
    if (x.sets.empty() || y.sets.empty()) return 0.0;
    auto mx = to_membership(x);
    auto my = to_membership(y);
    return 1.0 - 0.5 * (brute_normalized_conditional(mx, my) +
                        brute_normalized_conditional(my, mx));
}

// Closed-form CDF of the 1/x log-uniform law on [lo, hi].
inline double loguniform_cdf(long long k, long long lo, long long hi) {
    return (std::log(static_cast<double>(k) + 1.0) - std::log(static_cast<double>(lo))) /
           (std::log(static_cast<double>(hi) + 1.0) - std::log(static_cast<double>(lo)));
}

}  // namespace test_oracles

#endif
