#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "bdi/graph.hpp"
#include "bdi/oracle.hpp"
#include "bdi/orientation.hpp"

namespace bdi::testing {

/// 6x6 reference graph used throughout the tests: small enough for the
/// exhaustive oracle, rich enough to exercise every rank transition.
inline const std::vector<std::pair<uint32_t, uint32_t>>& example_edges() {
    static const std::vector<std::pair<uint32_t, uint32_t>> edges = {
        {0, 0}, {0, 1}, {0, 2}, {0, 5}, {1, 0}, {1, 1}, {1, 2}, {2, 0}, {2, 1},
        {2, 2}, {2, 3}, {3, 1}, {3, 2}, {3, 3}, {3, 4}, {4, 3}, {5, 4},
    };
    return edges;
}

inline BipartiteGraph example_graph() { return graph_from_edges(6, 6, example_edges()); }

/// Limits wide enough for the 17-edge example.
inline OracleLimits example_limits() { return {17, 14}; }

/// A level-1 egalitarian orientation of example_graph with U capped.
inline Orientation example_level1_orientation() {
    Orientation o(6, 6, 1, Side::UpperU);
    auto to_v = [&](uint32_t u, uint32_t v) { o.add_directed_edge(u_node(u), v_node(v)); };
    auto to_u = [&](uint32_t u, uint32_t v) { o.add_directed_edge(v_node(v), u_node(u)); };
    to_v(0, 0);
    to_u(0, 1);
    to_v(0, 2);
    to_v(0, 5);
    to_v(1, 0);
    to_u(1, 1);
    to_v(1, 2);
    to_v(2, 0);
    to_v(2, 1);
    to_u(2, 2);
    to_v(2, 3);
    to_v(3, 1);
    to_u(3, 2);
    to_v(3, 3);
    to_v(3, 4);
    to_u(4, 3);
    to_u(5, 4);
    return o;
}

// Hand-checked ranks of example_graph over the U-capped axis.
inline std::vector<int32_t> level0_u_ranks() { return {3, 3, 3, 3, 2, 1}; }
inline std::vector<int32_t> level0_v_ranks() { return {2, 3, 3, 2, 1, 0}; }
inline std::vector<int32_t> level1_u_ranks() { return {2, 2, 2, 2, -1, -1}; }
inline std::vector<int32_t> level1_v_ranks() { return {2, 2, 2, 1, 0, 0}; }

inline std::vector<NodeRef> refs(std::initializer_list<NodeRef> list) {
    std::vector<NodeRef> out(list);
    std::sort(out.begin(), out.end());
    return out;
}

// Hand-checked dense subgraphs of example_graph.
inline std::vector<NodeRef> dense_1_1() {
    return refs({u_node(0), u_node(1), u_node(2), u_node(3), v_node(0), v_node(1), v_node(2),
                 v_node(3)});
}
inline std::vector<NodeRef> dense_1_2() {
    return refs({u_node(0), u_node(1), u_node(2), u_node(3), v_node(0), v_node(1), v_node(2)});
}
inline std::vector<NodeRef> dense_0_2() {
    return refs({u_node(0), u_node(1), u_node(2), u_node(3), u_node(4), v_node(0), v_node(1),
                 v_node(2), v_node(3)});
}

} // namespace bdi::testing
