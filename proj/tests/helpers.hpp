#ifndef STABLE_STREAMS_TEST_HELPERS_HPP
#define STABLE_STREAMS_TEST_HELPERS_HPP

#include <string>
#include <tuple>
#include <vector>

#include "stable_streams/linkstream.hpp"

namespace test_helpers {

using stable_streams::LinkStream;
using stable_streams::LinkStreamBuilder;

using Record = std::tuple<double, std::string, std::string>;

inline LinkStream make_stream(const std::vector<Record>& records) {
    LinkStreamBuilder builder;
    for (const auto& [t, u, v] : records) builder.add(t, u, v);
    return builder.finish();
}

// Clique among `members` at every step in [t_begin, t_end), one interaction
// per pair per step.
inline void add_clique_steps(std::vector<Record>& records,
                             const std::vector<std::string>& members, long long t_begin,
                             long long t_end) {
    for (long long t = t_begin; t < t_end; ++t) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                records.emplace_back(static_cast<double>(t), members[i], members[j]);
            }
        }
    }
}

// The reference fixture for multiscale tests: a 4-clique {a,b,c,d} plus a
// weakly attached pair {e,f}. Within any window the clique's conductance is
// 1/5 (cut 1 against min volume 5), so qc = 0.8; the pair never seeds
// because of the size-3 rule.
inline void add_clique_with_satellite(std::vector<Record>& records, long long t_begin,
                                      long long t_end) {
    add_clique_steps(records, {"a", "b", "c", "d"}, t_begin, t_end);
    for (long long t = t_begin; t < t_end; ++t) {
        records.emplace_back(static_cast<double>(t), "e", "f");
        records.emplace_back(static_cast<double>(t), "e", "f");
        records.emplace_back(static_cast<double>(t), "d", "e");
    }
}

}  // namespace test_helpers

#endif
