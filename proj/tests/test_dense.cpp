#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "bdi/dense.hpp"
#include "bdi/errors.hpp"
#include "bdi/gen.hpp"
#include "bdi/oracle.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace bdi;
using namespace bdi::testing;

namespace {

// Replays the witness conditions literally: caps respected as claimed by
// S/T membership, every edge counted at exactly one endpoint, and no
// directed path from an under-cap node to an over-cap node.
void check_witness(const BipartiteGraph& g, const DenseResult& r) {
    const Orientation& o = r.witness.orientation;
    REQUIRE(o.edge_count() == g.edge_count());
    uint64_t indeg_sum = 0;
    for (uint32_t u = 0; u < o.u_count(); ++u) indeg_sum += o.indegree(u_node(u));
    for (uint32_t v = 0; v < o.v_count(); ++v) indeg_sum += o.indegree(v_node(v));
    CHECK(indeg_sum == g.edge_count());

    auto cap = [&](NodeRef n) {
        return n.side == Side::UpperU ? r.witness.caps.alpha : r.witness.caps.beta;
    };
    std::vector<std::vector<uint8_t>> under(2), over(2);
    under[0].assign(o.u_count(), 0);
    under[1].assign(o.v_count(), 0);
    over[0].assign(o.u_count(), 0);
    over[1].assign(o.v_count(), 0);
    for (Side s : {Side::UpperU, Side::LowerV}) {
        for (uint32_t i = 0; i < o.side_count(s); ++i) {
            NodeRef n{s, i};
            const int64_t d = o.indegree(n);
            if (d < cap(n)) under[static_cast<size_t>(s)][i] = 1;
            if (d > cap(n)) over[static_cast<size_t>(s)][i] = 1;
        }
    }
    for (NodeRef n : r.witness.s_nodes) CHECK(under[static_cast<size_t>(n.side)][n.index]);
    for (NodeRef n : r.witness.t_nodes) CHECK(over[static_cast<size_t>(n.side)][n.index]);

    // Forward reachability from all of S must avoid T.
    std::vector<std::vector<uint8_t>> seen(2);
    seen[0].assign(o.u_count(), 0);
    seen[1].assign(o.v_count(), 0);
    std::deque<NodeRef> queue;
    for (NodeRef n : r.witness.s_nodes) {
        seen[static_cast<size_t>(n.side)][n.index] = 1;
        queue.push_back(n);
    }
    while (!queue.empty()) {
        NodeRef x = queue.front();
        queue.pop_front();
        CHECK_FALSE(over[static_cast<size_t>(x.side)][x.index]);
        for (const Orientation::IncEntry& en : o.incident(x)) {
            if (en.toward_me()) continue;
            NodeRef y{opposite(x.side), en.other};
            auto& flag = seen[static_cast<size_t>(y.side)][y.index];
            if (!flag) {
                flag = 1;
                queue.push_back(y);
            }
        }
    }
}

} // namespace

TEST_CASE("reference example queries") {
    BipartiteGraph g = example_graph();
    CHECK(compute_dense_subgraph(g, {1, 2}) == dense_1_2());
    CHECK(compute_dense_subgraph(g, {1, 1}) == dense_1_1());
    CHECK(compute_dense_subgraph(g, {0, 2}) == dense_0_2());
    CHECK(compute_dense_subgraph(g, {1, 3}).empty());
}

TEST_CASE("single edge") {
    BipartiteGraph g = graph_from_edges(1, 1, {{0, 0}});
    CHECK(compute_dense_subgraph(g, {0, 0}) == refs({u_node(0), v_node(0)}));
    CHECK(compute_dense_subgraph(g, {0, 1}).empty());
    CHECK(compute_dense_subgraph(g, {1, 0}).empty());
}

TEST_CASE("empty inputs and negative caps") {
    BipartiteGraph empty;
    CHECK(compute_dense_subgraph(empty, {0, 0}).empty());
    BipartiteGraph g = example_graph();
    CHECK_THROWS_AS(compute_dense_subgraph(g, {-1, 0}), Error);
    CHECK_THROWS_AS(compute_dense_subgraph(g, {0, -1}), Error);
}

TEST_CASE("matches the oracle on random small graphs") {
    for (uint64_t seed = 1; seed <= 12; ++seed) {
        BipartiteGraph g = gen_random(5, 4, 3 + seed % 13, seed);
        for (int32_t a = 0; a <= 3; ++a) {
            for (int32_t b = 0; b <= 3; ++b) {
                CAPTURE(seed);
                CAPTURE(a);
                CAPTURE(b);
                CHECK(compute_dense_subgraph(g, {a, b}) == oracle_dense(g, a, b));
            }
        }
    }
}

TEST_CASE("witness structure is valid") {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        BipartiteGraph g = gen_random(8, 7, 26, seed);
        for (auto caps : {LevelPair{0, 0}, {0, 2}, {1, 1}, {2, 1}, {3, 3}}) {
            DenseResult r = compute_dense_witness(g, caps);
            check_witness(g, r);
        }
    }
}

TEST_CASE("degree bound: members exceed their side's cap in G") {
    for (uint64_t seed = 20; seed <= 23; ++seed) {
        BipartiteGraph g = gen_random(9, 9, 40, seed);
        for (auto caps : {LevelPair{1, 1}, {1, 2}, {2, 2}}) {
            for (NodeRef x : compute_dense_subgraph(g, caps)) {
                const int32_t cap = x.side == Side::UpperU ? caps.alpha : caps.beta;
                CHECK(static_cast<int32_t>(g.degree(x)) > cap);
            }
        }
    }
}

TEST_CASE("hierarchy on a graph beyond oracle limits") {
    BipartiteGraph g = gen_random(30, 30, 220, 5);
    auto contains = [](const std::vector<NodeRef>& big, const std::vector<NodeRef>& small) {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    };
    for (int32_t a = 0; a <= 4; ++a) {
        for (int32_t b = 0; b <= 4; ++b) {
            std::vector<NodeRef> base = compute_dense_subgraph(g, {a, b});
            CHECK(contains(base, compute_dense_subgraph(g, {a + 1, b})));
            CHECK(contains(base, compute_dense_subgraph(g, {a, b + 1})));
        }
    }
}

TEST_CASE("p values") {
    CHECK(compute_p(example_graph()) == 1);
    CHECK(compute_p(graph_from_edges(1, 1, {{0, 0}})) == 0);
    CHECK(compute_p(BipartiteGraph{}) == -1);
    CHECK(compute_p(BipartiteGraph{4, 4}) == -1);
    CHECK(compute_p(gen_complete(4, 4)) == 1); // perfect 2-regular orientation exists
    CHECK(compute_p(gen_complete(5, 5)) == 2);
    CHECK(compute_p(gen_complete(2, 2)) == 0);
}

TEST_CASE("p is consistent with the dense sets and the edge bound") {
    for (uint64_t seed = 31; seed <= 36; ++seed) {
        BipartiteGraph g = gen_random(10, 10, 20 + 7 * (seed % 5), seed);
        const int32_t p = compute_p(g);
        CHECK(p <= static_cast<int32_t>(std::sqrt(static_cast<double>(g.edge_count())) / 2));
        CHECK_FALSE(compute_dense_subgraph(g, {p, p}).empty());
        CHECK(compute_dense_subgraph(g, {p + 1, p + 1}).empty());
    }
}

TEST_CASE("p matches the oracle within exhaustive limits") {
    for (uint64_t seed = 41; seed <= 46; ++seed) {
        BipartiteGraph g = gen_random(6, 6, 10 + seed % 7, seed);
        CHECK(compute_p(g) == oracle_p(g));
    }
}
