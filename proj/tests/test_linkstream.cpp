#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "helpers.hpp"
#include "stable_streams/linkstream.hpp"
#include "stable_streams/rng.hpp"

using namespace stable_streams;
using test_helpers::make_stream;

namespace {

Snapshot snap_of(const LinkStream& s, double t0, double gamma) {
    return build_snapshot(s, t0, gamma);
}

double edge_weight(const Snapshot& snap, const LinkStream& s, const std::string& a,
                   const std::string& b) {
    NodeId u = *s.node_id(a);
    NodeId v = *s.node_id(b);
    if (v < u) std::swap(u, v);
    for (const auto& e : snap.edges) {
        if (e.u == u && e.v == v) return e.w;
    }
    return 0.0;
}

}  // namespace

TEST_CASE("parse: two-line generic edge list") {
    std::istringstream in("0 a b\n10 b c\n");
    ParseResult res = parse_linkstream(in, ParseFormat::generic());
    CHECK(res.stream.size() == 2);
    CHECK(res.stream.node_count() == 3);
    CHECK(res.stream.duration() == 10.0);
    CHECK(res.stream.t_min() == 0.0);
    CHECK(res.stream.t_max() == 10.0);
    CHECK(res.issues.empty());
}

TEST_CASE("parse: sociopatterns line keeps t,i,j and ignores class columns") {
    std::istringstream in("31220\t1558\t1567\t3B\t3B\n");
    ParseResult res = parse_linkstream(in, ParseFormat::sociopatterns());
    REQUIRE(res.stream.size() == 1);
    const Interaction& it = res.stream.interactions()[0];
    CHECK(res.stream.to_original(it.t) == 31220.0);
    CHECK(res.stream.node_name(it.u) == "1558");
    CHECK(res.stream.node_name(it.v) == "1567");
}

TEST_CASE("parse: snap preset reads u v t") {
    std::istringstream in("7 9 100\n9 8 200\n");
    ParseResult res = parse_linkstream(in, ParseFormat::snap());
    REQUIRE(res.stream.size() == 2);
    CHECK(res.stream.t_min() == 100.0);
    CHECK(res.stream.t_max() == 200.0);
    CHECK(res.stream.node_name(res.stream.interactions()[0].u) == "7");
}

TEST_CASE("parse: self-loop line rejected") {
    SUBCASE("strict aborts") {
        std::istringstream in("5 x x\n");
        CHECK_THROWS(parse_linkstream(in, ParseFormat::generic()));
    }
    SUBCASE("lenient skips and reports the line number") {
        std::istringstream in("0 a b\n5 x x\n");
        ParseFormat fmt = ParseFormat::generic();
        fmt.strict = false;
        ParseResult res = parse_linkstream(in, fmt);
        CHECK(res.stream.size() == 1);
        REQUIRE(res.issues.size() == 1);
        CHECK(res.issues[0].line_number == 2);
    }
}

TEST_CASE("parse: malformed lines") {
    SUBCASE("strict mode aborts with line number") {
        std::istringstream in("0 a b\nnot-a-time a b\n");
        try {
            parse_linkstream(in, ParseFormat::generic());
            FAIL("expected parse error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("lenient mode skips and counts") {
        std::istringstream in("0 a b\nbroken\n1 b c\n");
        ParseFormat fmt = ParseFormat::generic();
        fmt.strict = false;
        ParseResult res = parse_linkstream(in, fmt);
        CHECK(res.stream.size() == 2);
        CHECK(res.issues.size() == 1);
    }
}

TEST_CASE("parse: empty input is an error in both modes") {
    std::istringstream strict_in("");
    CHECK_THROWS(parse_linkstream(strict_in, ParseFormat::generic()));
    std::istringstream lenient_in("\n\n");
    ParseFormat fmt = ParseFormat::generic();
    fmt.strict = false;
    CHECK_THROWS(parse_linkstream(lenient_in, fmt));
}

TEST_CASE("parse: header skip, delimiter and time scale") {
    std::istringstream in("time,u,v\n10,a,b\n20,b,c\n");
    ParseFormat fmt = ParseFormat::generic();
    fmt.delimiter = ',';
    fmt.header_skip = 1;
    fmt.time_scale = 0.5;
    ParseResult res = parse_linkstream(in, fmt);
    CHECK(res.stream.size() == 2);
    CHECK(res.stream.t_min() == 5.0);
    CHECK(res.stream.t_max() == 10.0);
}

TEST_CASE("parse: duplicate interactions retained") {
    std::istringstream in("1 a b\n1 a b\n1 a b\n");
    ParseResult res = parse_linkstream(in, ParseFormat::generic());
    CHECK(res.stream.size() == 3);
}

TEST_CASE("build_snapshot: window membership and weights") {
    LinkStream s = make_stream({{0, "a", "b"}, {5, "a", "b"}, {12, "b", "c"}});

    Snapshot w0 = snap_of(s, 0, 10);
    CHECK(w0.edges.size() == 1);
    CHECK(edge_weight(w0, s, "a", "b") == 2.0);
    CHECK(w0.active_node_count() == 2);

    Snapshot w1 = snap_of(s, 10, 10);
    CHECK(w1.edges.size() == 1);
    CHECK(edge_weight(w1, s, "b", "c") == 1.0);

    Snapshot far = snap_of(s, 100, 10);
    CHECK(far.empty());
}

TEST_CASE("build_snapshot: binary aggregation flattens weights") {
    LinkStream s = make_stream({{0, "a", "b"}, {1, "a", "b"}, {2, "a", "c"}});
    Snapshot snap = build_snapshot(s, 0, 10, true);
    for (const auto& e : snap.edges) CHECK(e.w == 1.0);
    CHECK(snap.total_weight == 2.0);
}

TEST_CASE("snapshot: strengths consistent with edges") {
    LinkStream s = make_stream({{0, "a", "b"}, {0, "b", "c"}, {3, "a", "b"}, {7, "c", "d"}});
    Snapshot snap = snap_of(s, 0, 10);
    double total_strength = 0.0;
    for (const auto& [id, st] : snap.strengths) {
        total_strength += st;
        double sum = 0.0;
        for (const auto& e : snap.edges) {
            if (e.u == id || e.v == id) sum += e.w;
        }
        CHECK(st == sum);
    }
    CHECK(total_strength == 2.0 * snap.total_weight);
}

TEST_CASE("snapshot_sequence: coverage") {
    SUBCASE("t_min 0, t_max 25, gamma 10 gives 3 windows") {
        LinkStream s = make_stream({{0, "a", "b"}, {25, "b", "c"}});
        auto seq = snapshot_sequence(s, 10);
        REQUIRE(seq.size() == 3);
        CHECK(seq[0].window_start == 0.0);
        CHECK(seq[1].window_start == 10.0);
        CHECK(seq[2].window_start == 20.0);
    }
    SUBCASE("gamma >= duration gives exactly one window") {
        LinkStream s = make_stream({{0, "a", "b"}, {25, "b", "c"}});
        CHECK(snapshot_sequence(s, 25).size() == 2);  // t=25 starts the next window
        CHECK(snapshot_sequence(s, 26).size() == 1);
        CHECK(snapshot_sequence(s, 1000).size() == 1);
    }
    SUBCASE("single interaction, gamma 1") {
        LinkStream s = make_stream({{0, "a", "b"}});
        CHECK(snapshot_sequence(s, 1).size() == 1);
    }
}

TEST_CASE("snapshot_sequence: half-open boundary puts t0+gamma in the second window") {
    LinkStream s = make_stream({{0, "a", "b"}, {10, "b", "c"}});
    auto seq = snapshot_sequence(s, 10);
    REQUIRE(seq.size() == 2);
    CHECK(edge_weight(seq[0], s, "a", "b") == 1.0);
    CHECK(edge_weight(seq[0], s, "b", "c") == 0.0);
    CHECK(edge_weight(seq[1], s, "b", "c") == 1.0);
}

TEST_CASE("snapshot_sequence: partition and weight conservation on random streams") {
    Rng rng(20240401);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<test_helpers::Record> records;
        const int n_interactions = 1 + static_cast<int>(rng.bounded(120));
        for (int i = 0; i < n_interactions; ++i) {
            double t = static_cast<double>(rng.bounded(100));
            std::string u = "n" + std::to_string(rng.bounded(8));
            std::string v = "n" + std::to_string(rng.bounded(8));
            if (u == v) continue;
            records.emplace_back(t, u, v);
        }
        if (records.empty()) continue;
        LinkStream s = make_stream(records);
        double gamma = 1.0 + static_cast<double>(rng.bounded(30));

        auto seq = snapshot_sequence(s, gamma);
        double total_weight = 0.0;
        for (const auto& snap : seq) total_weight += snap.total_weight;
        CHECK(total_weight == static_cast<double>(s.size()));

        // Every interaction in exactly one window.
        std::size_t covered = 0;
        for (const auto& snap : seq) {
            std::size_t lo = s.lower_bound(s.to_offset(snap.window_start));
            std::size_t hi = s.lower_bound(s.to_offset(snap.window_start + gamma));
            covered += hi - lo;
        }
        CHECK(covered == s.size());
    }
}

TEST_CASE("linkstream: normalization keeps original timestamps") {
    LinkStream s = make_stream({{1000000000.0, "a", "b"}, {1000000100.0, "b", "c"}});
    CHECK(s.t_min() == 1000000000.0);
    CHECK(s.duration() == 100.0);
    CHECK(s.interactions()[0].t == 0.0);
    CHECK(s.integral_times());
}

TEST_CASE("linkstream: fractional offsets flip the integral flag") {
    LinkStream s = make_stream({{0.0, "a", "b"}, {1.5, "b", "c"}});
    CHECK_FALSE(s.integral_times());
}

TEST_CASE("linkstream: builder rejects self-loops and empty streams") {
    LinkStreamBuilder b;
    CHECK_THROWS(b.add(0.0, "x", "x"));
    LinkStreamBuilder empty;
    CHECK_THROWS(empty.finish());
}
