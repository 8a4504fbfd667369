#ifndef STABLE_STREAMS_TYPES_HPP
#define STABLE_STREAMS_TYPES_HPP

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace stable_streams {

// Dense node index assigned at ingestion time. The original (string) node
// name lives in the LinkStream's node table.
using NodeId = std::uint32_t;

// A set of nodes kept as a sorted, duplicate-free vector.
using NodeSet = std::vector<NodeId>;

inline NodeSet make_node_set(std::initializer_list<NodeId> ids) {
    NodeSet s(ids);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline void normalize_node_set(NodeSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline bool set_contains(const NodeSet& s, NodeId id) {
    return std::binary_search(s.begin(), s.end(), id);
}

inline std::size_t intersection_size(const NodeSet& a, const NodeSet& b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

// Half-open time interval [start, end). Right-open so that a window ending at
// t and another starting at t do not intersect.
struct Interval {
    double start = 0.0;
    double end = 0.0;

    double length() const { return end - start; }
    bool contains(double t) const { return t >= start && t < end; }
    bool intersects(const Interval& o) const { return start < o.end && o.start < end; }
    bool operator==(const Interval& o) const = default;
};

}  // namespace stable_streams

#endif
