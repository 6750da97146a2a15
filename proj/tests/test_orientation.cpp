#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdint>
#include <vector>

#include "bdi/errors.hpp"
#include "bdi/gen.hpp"
#include "bdi/oracle.hpp"
#include "bdi/orientation.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace bdi;
using namespace bdi::testing;

TEST_CASE("edge mechanics: add, find, flip, remove") {
    Orientation o(2, 2, 1, Side::UpperU);
    o.add_directed_edge(u_node(0), v_node(0));
    o.add_directed_edge(v_node(1), u_node(0));
    CHECK(o.edge_count() == 2);
    CHECK(o.indegree(v_node(0)) == 1);
    CHECK(o.indegree(u_node(0)) == 1);
    CHECK(o.directed_toward(0, 0, Side::LowerV));
    CHECK(o.directed_toward(0, 1, Side::UpperU));

    const uint32_t id = o.find_edge(0, 0);
    CHECK(o.tail(id) == u_node(0));
    CHECK(o.head(id) == v_node(0));
    o.flip(id);
    CHECK(o.indegree(v_node(0)) == 0);
    CHECK(o.indegree(u_node(0)) == 2);

    o.remove_edge(0, 1);
    CHECK(o.edge_count() == 1);
    CHECK(o.indegree(u_node(0)) == 1);
    CHECK_THROWS_AS(o.find_edge(0, 1), MissingEdgeError);
    CHECK_THROWS_AS(o.remove_edge(0, 1), MissingEdgeError);
    CHECK_THROWS_AS(o.add_directed_edge(u_node(0), v_node(0)), DuplicateEdgeError);
    CHECK_THROWS_AS(o.add_directed_edge(u_node(0), u_node(1)), InvalidOrientationError);
    CHECK_THROWS_AS(o.add_directed_edge(u_node(5), v_node(0)), InvalidNodeError);

    o.ensure_counts(3, 3);
    o.add_directed_edge(u_node(2), v_node(2));
    CHECK(o.edge_count() == 2);
}

TEST_CASE("initial orientation keeps lowest-index neighbors inbound") {
    // u0 has degree 3 at level 1: edge to v0 stays inbound, v1 and v2 flip out.
    BipartiteGraph g = graph_from_edges(2, 3, {{0, 0}, {0, 1}, {0, 2}, {1, 2}});
    Orientation o = init_orientation(g, 1, Side::UpperU);
    CHECK(o.indegree(u_node(0)) == 1);
    CHECK(o.directed_toward(0, 0, Side::UpperU));
    CHECK(o.directed_toward(0, 1, Side::LowerV));
    CHECK(o.directed_toward(0, 2, Side::LowerV));
    CHECK(o.directed_toward(1, 2, Side::UpperU)); // deg 1 <= level: stays inbound
    // V-capped mirror.
    Orientation ov = init_orientation(g, 0, Side::LowerV);
    CHECK(ov.indegree(v_node(2)) == 0);
    CHECK(ov.directed_toward(0, 2, Side::UpperU));
    CHECK(ov.directed_toward(1, 2, Side::UpperU));
}

TEST_CASE("capped-side condition always holds after init") {
    BipartiteGraph g = gen_random(7, 6, 24, 3);
    for (int32_t level = 0; level <= 3; ++level) {
        for (Side capped : {Side::UpperU, Side::LowerV}) {
            Orientation o = init_orientation(g, level, capped);
            for (uint32_t i = 0; i < o.side_count(capped); ++i) {
                NodeRef n{capped, i};
                CHECK(o.indegree(n) ==
                      std::min<uint32_t>(g.degree(n), static_cast<uint32_t>(level)));
            }
        }
    }
}

TEST_CASE("reference orientation is already egalitarian") {
    Orientation o = example_level1_orientation();
    CHECK(verify_egalitarian(o).ok);
    CHECK(balance_orientation(o) == 0);
}

TEST_CASE("rank extraction on the reference orientation") {
    RankTable t = orientation_to_rank(example_level1_orientation());
    CHECK(t.level == 1);
    CHECK(t.capped == Side::UpperU);
    CHECK(t.u == level1_u_ranks());
    CHECK(t.v == level1_v_ranks());
    CHECK(t.max_rank == 2);
}

TEST_CASE("init plus balance reproduces the reference ranks") {
    BipartiteGraph g = example_graph();
    for (int32_t level : {0, 1}) {
        Orientation o = init_orientation(g, level, Side::UpperU);
        balance_orientation(o);
        CHECK(verify_egalitarian(o).ok);
        RankTable t = orientation_to_rank(o);
        CHECK(t.u == (level == 0 ? level0_u_ranks() : level1_u_ranks()));
        CHECK(t.v == (level == 0 ? level0_v_ranks() : level1_v_ranks()));
    }
}

TEST_CASE("balance reaches the minimum sum of squared loads") {
    // Exhaustive ground truth: among all orientations meeting the capped-side
    // condition, the egalitarian ones minimize the squared uncapped loads.
    for (uint64_t seed = 1; seed <= 8; ++seed) {
        BipartiteGraph g = gen_random(4, 4, 10, seed);
        std::vector<std::pair<uint32_t, uint32_t>> edges;
        for (uint32_t u = 0; u < 4; ++u)
            for (uint32_t v : g.neighbors(u_node(u))) edges.push_back({u, v});
        const int32_t level = 1;
        uint64_t best = UINT64_MAX;
        for (uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
            std::vector<uint32_t> du(4, 0), dv(4, 0);
            for (size_t i = 0; i < edges.size(); ++i) {
                if (mask & (1u << i))
                    ++du[edges[i].first];
                else
                    ++dv[edges[i].second];
            }
            bool capped_ok = true;
            for (uint32_t u = 0; u < 4; ++u)
                if (du[u] != std::min<uint32_t>(g.degree(u_node(u)),
                                                static_cast<uint32_t>(level)))
                    capped_ok = false;
            if (!capped_ok) continue;
            uint64_t sum = 0;
            for (uint32_t v = 0; v < 4; ++v) sum += uint64_t{dv[v]} * dv[v];
            best = std::min(best, sum);
        }
        Orientation o = init_orientation(g, level, Side::UpperU);
        balance_orientation(o);
        CHECK(verify_egalitarian(o).ok);
        uint64_t got = 0;
        for (uint32_t v = 0; v < 4; ++v) {
            const uint64_t d = o.indegree(v_node(v));
            got += d * d;
        }
        CAPTURE(seed);
        CHECK(got == best);
    }
}

TEST_CASE("egalitarian check spots violations") {
    // v0 (load 0) reaches v1 (load 2) through either capped node: a gap-two
    // path. Both capped nodes hold exactly one of their two edges.
    Orientation bad(2, 2, 1, Side::UpperU);
    bad.add_directed_edge(v_node(0), u_node(0));
    bad.add_directed_edge(u_node(0), v_node(1));
    bad.add_directed_edge(v_node(0), u_node(1));
    bad.add_directed_edge(u_node(1), v_node(1));
    VerifyResult r = verify_egalitarian(bad);
    CHECK_FALSE(r.ok);
    REQUIRE(r.violation.has_value());
    CHECK(r.violation->first == v_node(0));
    CHECK(r.violation->second == v_node(1));

    // Gap-one paths are fine.
    Orientation ok(1, 2, 1, Side::UpperU);
    ok.add_directed_edge(v_node(0), u_node(0));
    ok.add_directed_edge(u_node(0), v_node(1));
    CHECK(verify_egalitarian(ok).ok);

    // Capped-side violation: u0 holds both edges at level 1.
    Orientation over(1, 2, 1, Side::UpperU);
    over.add_directed_edge(v_node(0), u_node(0));
    over.add_directed_edge(v_node(1), u_node(0));
    CHECK_FALSE(verify_egalitarian(over).ok);
    CHECK_THROWS_AS(balance_orientation(over), InvalidOrientationError);
}

TEST_CASE("balance fixes random orientations at scale") {
    for (uint64_t seed = 11; seed <= 14; ++seed) {
        BipartiteGraph g = gen_random(20, 20, 120, seed);
        for (int32_t level : {0, 1, 2}) {
            for (Side capped : {Side::UpperU, Side::LowerV}) {
                Orientation o = init_orientation(g, level, capped);
                balance_orientation(o);
                VerifyResult r = verify_egalitarian(o);
                CAPTURE(seed);
                CAPTURE(level);
                CHECK(r.ok);
            }
        }
    }
}

TEST_CASE("ranks match the oracle on random graphs, both families") {
    for (uint64_t seed = 21; seed <= 26; ++seed) {
        BipartiteGraph g = gen_random(5, 5, 12 + seed % 5, seed);
        for (int32_t level = 0; level <= 2; ++level) {
            for (Side capped : {Side::UpperU, Side::LowerV}) {
                Orientation o = init_orientation(g, level, capped);
                balance_orientation(o);
                RankTable t = orientation_to_rank(o);
                OracleRanks expect = oracle_rank(g, level, capped);
                CAPTURE(seed);
                CAPTURE(level);
                CAPTURE(static_cast<int>(capped));
                CHECK(t.u == expect.u);
                CHECK(t.v == expect.v);
            }
        }
    }
}

TEST_CASE("load and direction structure of egalitarian orientations") {
    // Uncapped loads sit at rank or rank+1, and edges between rank classes
    // point downward.
    for (uint64_t seed = 31; seed <= 34; ++seed) {
        BipartiteGraph g = gen_random(12, 12, 60, seed);
        Orientation o = init_orientation(g, 1, Side::UpperU);
        balance_orientation(o);
        RankTable t = orientation_to_rank(o);
        for (uint32_t v = 0; v < 12; ++v) {
            const int32_t d = static_cast<int32_t>(o.indegree(v_node(v)));
            const int32_t r = t.v[v];
            CHECK(d >= r);
            CHECK(d <= r + 1);
        }
        for (uint32_t id = 0; id < o.edge_count(); ++id) {
            NodeRef from = o.tail(id), to = o.head(id);
            CHECK(t.rank(from) >= t.rank(to));
        }
    }
}

TEST_CASE("reachability helpers on the reference orientation") {
    Orientation o = example_level1_orientation();

    // After directing one more edge into u5, its cheapest reacher is v4
    // (load 1, versus v1 and v2 at load 2).
    Orientation grown = o;
    grown.add_directed_edge(v_node(2), u_node(5));
    auto w = min_reacher(grown, u_node(5));
    REQUIRE(w.has_value());
    CHECK(w->node == v_node(4));
    REQUIRE(w->path.size() == 1);
    CHECK(grown.tail(w->path[0]) == v_node(4));
    CHECK(grown.head(w->path[0]) == u_node(5));

    // Heaviest node reachable from u0 is v0 (load 3).
    auto m = max_reachable(o, u_node(0), false);
    REQUIRE(m.has_value());
    CHECK(m->node == v_node(0));
    REQUIRE(m->path.size() == 1);

    // v4's only successor is the sink u5, so with include_self it returns
    // itself via the empty path and without it there is no candidate.
    auto self = max_reachable(o, v_node(4), true);
    REQUIRE(self.has_value());
    CHECK(self->node == v_node(4));
    CHECK(self->path.empty());
    CHECK_FALSE(max_reachable(o, v_node(4), false).has_value());

    // The target itself is never a reacher candidate. v5's reachers are v1
    // and v2, both at load 2; the tie breaks to the lower index.
    auto r5 = min_reacher(o, v_node(5));
    REQUIRE(r5.has_value());
    CHECK(r5->node == v_node(1));
    REQUIRE(r5->path.size() == 2);
    CHECK(o.tail(r5->path[0]) == v_node(1));
    CHECK(o.head(r5->path[1]) == v_node(5));
}

TEST_CASE("path reversal moves one unit end to end") {
    Orientation o = example_level1_orientation();
    // v2 -> u2 -> v0 is a directed path in the reference orientation.
    const uint32_t e1 = o.find_edge(2, 2);
    const uint32_t e2 = o.find_edge(2, 0);
    REQUIRE(o.head(e1) == u_node(2));
    REQUIRE(o.head(e2) == v_node(0));
    const uint32_t before_v2 = o.indegree(v_node(2));
    const uint32_t before_v0 = o.indegree(v_node(0));
    const uint32_t before_u2 = o.indegree(u_node(2));
    reverse_path(o, {e1, e2});
    CHECK(o.indegree(v_node(2)) == before_v2 + 1);
    CHECK(o.indegree(v_node(0)) == before_v0 - 1);
    CHECK(o.indegree(u_node(2)) == before_u2);
    CHECK(o.directed_toward(2, 2, Side::LowerV));
    CHECK(o.directed_toward(2, 0, Side::UpperU));

    // Non-chaining sequences are rejected.
    Orientation fresh = example_level1_orientation();
    const uint32_t a = fresh.find_edge(2, 2); // v2 -> u2
    const uint32_t b = fresh.find_edge(3, 1); // u3 -> v1... not tail-connected
    CHECK_THROWS_AS(reverse_path(fresh, {a, b}), InvalidPathError);
}
