#include <doctest.h>

#include <cmath>
#include <set>
#include <tuple>

#include "oracles.hpp"
#include "stable_streams/benchmark.hpp"

using namespace stable_streams;

TEST_CASE("loguniform_int: degenerate range") {
    Rng rng(1);
    for (int i = 0; i < 100; ++i) CHECK(loguniform_int(7, 7, rng) == 7);
    CHECK_THROWS(loguniform_int(9, 3, rng));
    CHECK_THROWS(loguniform_int(0, 3, rng));
}

TEST_CASE("loguniform_int: range invariant and 1/x CDF") {
    Rng rng(123456);
    const long long lo = 10;
    const long long hi = 1250;
    const int draws = 100000;
    int at_most_35 = 0;
    for (int i = 0; i < draws; ++i) {
        long long x = loguniform_int(lo, hi, rng);
        REQUIRE(x >= lo);
        REQUIRE(x <= hi);
        if (x <= 35) ++at_most_35;
    }
    const double empirical = static_cast<double>(at_most_35) / draws;
    const double expected = test_oracles::loguniform_cdf(35, lo, hi);
    CHECK(expected == doctest::Approx(0.26).epsilon(0.05));
    CHECK(std::abs(empirical - 0.26) < 0.02);
    CHECK(std::abs(empirical - expected) < 0.01);
}

TEST_CASE("generate: parameter validation") {
    GeneratorParams bad;
    bad.T = 10;
    CHECK_THROWS(generate(bad));
    bad = GeneratorParams{};
    bad.N = 4;
    CHECK_THROWS(generate(bad));
    bad = GeneratorParams{};
    bad.p = 1.5;
    CHECK_THROWS(generate(bad));
}

TEST_CASE("generate: noise-only stream matches the binomial expectation") {
    GeneratorParams params;
    params.T = 1000;
    params.N = 100;
    params.p = 0.1;
    params.SC = 0;
    params.rng_seed = 2024;
    auto out = generate(params);

    const double per_step =
        static_cast<double>(out.stream.size()) / static_cast<double>(params.T);
    const double expected = params.p * (100.0 * 99.0 / 2.0);  // 495
    CHECK(per_step == doctest::Approx(expected).epsilon(0.03));
    CHECK(out.truth.planted.empty());
}

TEST_CASE("generate: reproducibility") {
    GeneratorParams params;
    params.T = 120;
    params.N = 30;
    params.p = 0.05;
    params.SC = 3;
    params.rng_seed = 99;
    auto a = generate(params);
    auto b = generate(params);

    REQUIRE(a.stream.size() == b.stream.size());
    for (std::size_t i = 0; i < a.stream.size(); ++i) {
        CHECK(a.stream.interactions()[i].t == b.stream.interactions()[i].t);
        CHECK(a.stream.interactions()[i].u == b.stream.interactions()[i].u);
        CHECK(a.stream.interactions()[i].v == b.stream.interactions()[i].v);
    }
    REQUIRE(a.truth.planted.size() == b.truth.planted.size());
    for (std::size_t i = 0; i < a.truth.planted.size(); ++i) {
        CHECK(a.truth.planted[i].nodes == b.truth.planted[i].nodes);
        CHECK(a.truth.planted[i].start == b.truth.planted[i].start);
        CHECK(a.truth.planted[i].duration == b.truth.planted[i].duration);
    }
}

TEST_CASE("generate: planted communities respect their invariants") {
    GeneratorParams params;
    params.T = 2000;
    params.N = 64;
    params.p = 0.02;
    params.SC = 8;
    params.rng_seed = 31337;
    auto out = generate(params);

    REQUIRE(out.truth.planted.size() == 8);
    for (const auto& pc : out.truth.planted) {
        CHECK(pc.nodes.size() >= 4);
        CHECK(pc.nodes.size() <= static_cast<std::size_t>(params.N / 4));
        CHECK(pc.duration >= 10);
        CHECK(pc.duration <= params.T / 4);
        CHECK(pc.start >= 0);
        CHECK(pc.start + pc.duration <= params.T);
        CHECK(pc.edge_prob == std::min(1.0, 10.0 / static_cast<double>(pc.duration)));
        for (NodeId id : pc.nodes) CHECK(id < static_cast<NodeId>(params.N));
    }

    // No interaction outside [0, T).
    CHECK(out.stream.t_min() >= 0.0);
    CHECK(out.stream.t_max() < static_cast<double>(params.T));
}

TEST_CASE("generate: duration 10 communities are complete cliques while active") {
    // T = 40 forces duration exactly 10 (T/4 = 10) and N = 16 forces size 4.
    GeneratorParams params;
    params.T = 40;
    params.N = 16;
    params.p = 0.0;  // no noise: every interaction belongs to a community
    params.SC = 2;
    params.rng_seed = 5;
    auto out = generate(params);

    for (const auto& pc : out.truth.planted) {
        REQUIRE(pc.duration == 10);
        REQUIRE(pc.edge_prob == 1.0);
        for (long long t = pc.start; t < pc.start + pc.duration; ++t) {
            Snapshot snap = build_snapshot(out.stream, static_cast<double>(t), 1.0);
            for (std::size_t i = 0; i < pc.nodes.size(); ++i) {
                for (std::size_t j = i + 1; j < pc.nodes.size(); ++j) {
                    auto u = out.stream.node_id(std::to_string(pc.nodes[i]));
                    auto v = out.stream.node_id(std::to_string(pc.nodes[j]));
                    REQUIRE(u.has_value());
                    REQUIRE(v.has_value());
                    NodeId a = *u, b = *v;
                    if (b < a) std::swap(a, b);
                    bool found = false;
                    for (const auto& e : snap.edges) {
                        if (e.u == a && e.v == b) found = true;
                    }
                    CHECK(found);
                }
            }
        }
    }
}

TEST_CASE("generate: intra-community pair rate matches the two-process overlay") {
    GeneratorParams params;
    params.T = 4000;
    params.N = 20;
    params.p = 0.2;
    params.SC = 2;
    params.rng_seed = 424242;
    auto out = generate(params);

    // Count distinct active (step, pair) hits per planted community.
    bool asserted = false;
    for (const auto& pc : out.truth.planted) {
        const double pairs =
            static_cast<double>(pc.nodes.size() * (pc.nodes.size() - 1)) / 2.0;
        const double samples = pairs * static_cast<double>(pc.duration);
        if (samples < 4000) continue;  // not enough samples for a tight check

        std::set<std::tuple<long long, NodeId, NodeId>> hits;
        for (const Interaction& it : out.stream.interactions()) {
            long long t = static_cast<long long>(out.stream.to_original(it.t));
            if (t < pc.start || t >= pc.start + pc.duration) continue;
            NodeId a_truth, b_truth;
            auto parse = [&](NodeId stream_id) {
                return static_cast<NodeId>(std::stoul(out.stream.node_name(stream_id)));
            };
            a_truth = parse(it.u);
            b_truth = parse(it.v);
            if (b_truth < a_truth) std::swap(a_truth, b_truth);
            if (!set_contains(pc.nodes, a_truth) || !set_contains(pc.nodes, b_truth)) continue;
            hits.insert({t, a_truth, b_truth});
        }
        const double rate = static_cast<double>(hits.size()) / samples;
        const double q = pc.edge_prob;
        const double expected = params.p + (1.0 - params.p) * q;
        CHECK(rate == doctest::Approx(expected).epsilon(0.10));
        asserted = true;
    }
    CHECK(asserted);  // the chosen seed must plant at least one big community
}
