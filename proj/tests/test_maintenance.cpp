#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "bdi/dense.hpp"
#include "bdi/errors.hpp"
#include "bdi/gen.hpp"
#include "bdi/index.hpp"
#include "bdi/maintenance.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace bdi;
using namespace bdi::testing;

namespace {

bool rows_equal(const IndexRow& a, const IndexRow& b) {
    return a.level == b.level && a.nodes == b.nodes && a.ranks == b.ranks &&
           a.cursor_low == b.cursor_low && a.cursors == b.cursors;
}

bool index_equal(const BDIndex& a, const BDIndex& b) {
    if (a.p != b.p || a.u_rows.size() != b.u_rows.size() || a.v_rows.size() != b.v_rows.size())
        return false;
    for (size_t i = 0; i < a.u_rows.size(); ++i)
        if (!rows_equal(a.u_rows[i], b.u_rows[i])) return false;
    for (size_t i = 0; i < a.v_rows.size(); ++i)
        if (!rows_equal(a.v_rows[i], b.v_rows[i])) return false;
    return true;
}

bool matches_rebuild(const Maintainer& m) {
    return index_equal(m.index(), build_index(m.graph()).index);
}

} // namespace

TEST_CASE("update boundaries on the reference tables") {
    BipartiteGraph g = example_graph();
    BuildResult b = build_index(g);
    const RankTable& t0 = b.u_tables[0];
    const RankTable& t1 = b.u_tables[1];

    // Inserting (u5, v2): the level-0 neighborhood rank is max over
    // {v5 at 1, v2 at 3}, the endpoint sits at 3, so the boundary is 3.
    CHECK(insertion_boundary(g, t0, u_node(5), v_node(2)) == 3);
    // Deleting (u4, v3): both endpoints hold level-0 rank 2.
    CHECK(deletion_boundary(t0, u_node(4), v_node(3)) == 2);

    // At level 1 the new edge gives u5 degree 2, still enough: the 2nd
    // highest of {v5 at 0, v2 at 2} is 0, the endpoint rank is 2.
    CHECK(insertion_boundary(g, t1, u_node(5), v_node(2)) == 0);
    CHECK(deletion_boundary(t1, u_node(4), v_node(3)) == -1);

    // Capped-side rank recomputation reproduces the stored table.
    for (uint32_t u = 0; u < 6; ++u) {
        CHECK(capped_side_rank(g, t0, u_node(u)) == t0.u[u]);
        CHECK(capped_side_rank(g, t1, u_node(u)) == t1.u[u]);
    }
    const RankTable& s0 = b.v_tables[0];
    for (uint32_t v = 0; v < 6; ++v)
        CHECK(capped_side_rank(g, s0, v_node(v)) == s0.v[v]);
}

TEST_CASE("a single insertion, space mode") {
    BipartiteGraph g = example_graph();
    Maintainer m(g, MaintenanceMode::Space);
    m.insert_edge(5, 2);
    CHECK(g.edge_count() == 18);
    CHECK(matches_rebuild(m));
    // The endpoint climbs past the old boundary; the capped side follows.
    const RankTable& t0 = m.side_tables(Side::UpperU)[0];
    CHECK(t0.v[2] == 4);
    CHECK(t0.u[0] == 4);
    CHECK(t0.u[5] == 4);
    CHECK(m.index().p == compute_p(g));
}

TEST_CASE("a single deletion, space mode") {
    BipartiteGraph g = example_graph();
    Maintainer m(g, MaintenanceMode::Space);
    m.erase_edge(4, 3);
    CHECK(g.edge_count() == 16);
    CHECK(matches_rebuild(m));
    const RankTable& t0 = m.side_tables(Side::UpperU)[0];
    CHECK(t0.v[3] == 1); // dropped from the boundary rank 2
    CHECK(t0.u[4] == -1); // u4 lost its only edge
}

TEST_CASE("a single insertion, time mode") {
    BipartiteGraph g = example_graph();
    Maintainer m(g, MaintenanceMode::Time);
    m.insert_edge(5, 2);
    CHECK(matches_rebuild(m));
    const RankTable& t1 = m.side_tables(Side::UpperU)[1];
    CHECK(t1.u == std::vector<int32_t>{2, 2, 2, 2, -1, 1});
    CHECK(t1.v == std::vector<int32_t>{2, 2, 2, 1, 1, 0});
    for (const Orientation& o : m.orientations().u_levels) CHECK(verify_egalitarian(o).ok);
    for (const Orientation& o : m.orientations().v_levels) CHECK(verify_egalitarian(o).ok);
}

TEST_CASE("a single deletion, time mode") {
    BipartiteGraph g = example_graph();
    Maintainer m(g, MaintenanceMode::Time);
    m.erase_edge(4, 3);
    CHECK(matches_rebuild(m));
    // One orientation per published level plus the probe level above.
    CHECK(m.orientations().p() == m.index().p + 1);
}

TEST_CASE("mixed update streams match full rebuilds in both modes") {
    for (uint64_t seed = 61; seed <= 63; ++seed) {
        BipartiteGraph gs = gen_random(7, 7, 18, seed);
        BipartiteGraph gt = gs;
        Maintainer ms(gs, MaintenanceMode::Space);
        Maintainer mt(gt, MaintenanceMode::Time);

        std::mt19937_64 rng(seed * 977);
        std::set<std::pair<uint32_t, uint32_t>> present;
        for (uint32_t u = 0; u < gs.u_count(); ++u)
            for (uint32_t v : gs.neighbors(u_node(u))) present.insert({u, v});

        for (int step = 0; step < 50; ++step) {
            const bool grow = present.empty() || (rng() % 100) < 55;
            uint32_t u, v;
            if (grow) {
                do {
                    u = static_cast<uint32_t>(rng() % 8); // index 7 grows the graph
                    v = static_cast<uint32_t>(rng() % 8);
                } while (present.count({u, v}));
                present.insert({u, v});
                ms.insert_edge(u, v);
                mt.insert_edge(u, v);
            } else {
                auto it = present.begin();
                std::advance(it, static_cast<long>(rng() % present.size()));
                u = it->first;
                v = it->second;
                present.erase(it);
                ms.erase_edge(u, v);
                mt.erase_edge(u, v);
            }

            CAPTURE(seed);
            CAPTURE(step);
            CAPTURE(u);
            CAPTURE(v);
            BDIndex want = build_index(gs).index;
            REQUIRE(index_equal(ms.index(), want));
            REQUIRE(index_equal(mt.index(), want));
            REQUIRE(ms.index().p == compute_p(gs));

            // Time mode must also keep every stored orientation egalitarian,
            // covering the published levels plus the probe level.
            const EgalitarianSet& es = mt.orientations();
            REQUIRE(es.p() == mt.index().p + 1);
            for (const Orientation& o : es.u_levels) REQUIRE(verify_egalitarian(o).ok);
            for (const Orientation& o : es.v_levels) REQUIRE(verify_egalitarian(o).ok);
        }
    }
}

TEST_CASE("uncapped rank changes stay confined to the boundary") {
    for (uint64_t seed = 71; seed <= 73; ++seed) {
        BipartiteGraph g = gen_random(6, 6, 14, seed);
        Maintainer m(g, MaintenanceMode::Space);
        std::mt19937_64 rng(seed);

        std::set<std::pair<uint32_t, uint32_t>> present;
        for (uint32_t u = 0; u < 6; ++u)
            for (uint32_t v : g.neighbors(u_node(u))) present.insert({u, v});

        for (int step = 0; step < 30; ++step) {
            const bool grow = present.empty() || (rng() % 2 == 0);
            uint32_t u, v;
            if (grow) {
                do {
                    u = static_cast<uint32_t>(rng() % 6);
                    v = static_cast<uint32_t>(rng() % 6);
                } while (present.count({u, v}));
            } else {
                auto it = present.begin();
                std::advance(it, static_cast<long>(rng() % present.size()));
                u = it->first;
                v = it->second;
            }

            // Capture the pre state: tables and per-row boundaries.
            std::vector<RankTable> pre_u = m.side_tables(Side::UpperU);
            std::vector<RankTable> pre_v = m.side_tables(Side::LowerV);
            std::vector<int32_t> bound_u, bound_v;
            for (const RankTable& t : pre_u)
                bound_u.push_back(grow ? insertion_boundary(g, t, u_node(u), v_node(v))
                                       : deletion_boundary(t, u_node(u), v_node(v)));
            for (const RankTable& t : pre_v)
                bound_v.push_back(grow ? insertion_boundary(g, t, v_node(v), u_node(u))
                                       : deletion_boundary(t, u_node(u), v_node(v)));

            if (grow) {
                present.insert({u, v});
                m.insert_edge(u, v);
            } else {
                present.erase({u, v});
                m.erase_edge(u, v);
            }

            const int32_t delta = grow ? 1 : -1;
            const auto& post_u = m.side_tables(Side::UpperU);
            const auto& post_v = m.side_tables(Side::LowerV);
            for (size_t L = 0; L < pre_u.size() && L < post_u.size(); ++L) {
                for (uint32_t i = 0; i < 6; ++i) { // uncapped side of the U family
                    const int32_t before = pre_u[L].v[i], after = post_u[L].v[i];
                    if (before == after) continue;
                    CAPTURE(seed);
                    CAPTURE(step);
                    CAPTURE(L);
                    CAPTURE(i);
                    REQUIRE(before == bound_u[L]);
                    REQUIRE(after == before + delta);
                }
            }
            for (size_t L = 0; L < pre_v.size() && L < post_v.size(); ++L) {
                for (uint32_t i = 0; i < 6; ++i) {
                    const int32_t before = pre_v[L].u[i], after = post_v[L].u[i];
                    if (before == after) continue;
                    REQUIRE(before == bound_v[L]);
                    REQUIRE(after == before + delta);
                }
            }
        }
    }
}

TEST_CASE("misuse is rejected without corrupting the state") {
    BipartiteGraph g = example_graph();
    Maintainer m(g, MaintenanceMode::Time);
    BDIndex before = m.index();
    CHECK_THROWS_AS(m.insert_edge(0, 0), DuplicateEdgeError);
    CHECK_THROWS_AS(m.erase_edge(5, 0), MissingEdgeError);
    CHECK(index_equal(m.index(), before));
    CHECK(g.edge_count() == 17);
}

TEST_CASE("draining and refilling the graph") {
    for (MaintenanceMode mode : {MaintenanceMode::Space, MaintenanceMode::Time}) {
        BipartiteGraph g = graph_from_edges(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
        Maintainer m(g, mode);
        CHECK(m.index().p == 0); // a perfect one-each assignment empties the level-1 core

        m.erase_edge(0, 0);
        CHECK(matches_rebuild(m));
        m.erase_edge(0, 1);
        CHECK(matches_rebuild(m));
        m.erase_edge(1, 0);
        CHECK(matches_rebuild(m));
        m.erase_edge(1, 1);
        CHECK(m.index().p == -1);
        CHECK(m.index().u_rows.empty());

        // Growth out of the empty state, including brand-new node indices.
        m.insert_edge(3, 2);
        CHECK(m.graph().u_count() >= 4);
        CHECK(matches_rebuild(m));
        CHECK(m.index().p == 0);
        for (uint32_t u = 1; u <= 3; ++u)
            for (uint32_t v = 1; v <= 3; ++v)
                if (!m.graph().has_edge(u, v)) m.insert_edge(u, v);
        CHECK(matches_rebuild(m));
        CHECK(m.index().p == 1); // a complete 3x3 block pushes the core to level 1
    }
}

TEST_CASE("node growth through updates") {
    BipartiteGraph g = example_graph();
    Maintainer m(g, MaintenanceMode::Time);
    m.insert_edge(9, 11); // far beyond both current sides
    CHECK(g.u_count() == 10);
    CHECK(g.v_count() == 12);
    CHECK(matches_rebuild(m));
    m.erase_edge(9, 11);
    CHECK(matches_rebuild(m));
}
