#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bdi/graph.hpp"

namespace bdi {

/// Hard size caps for the exhaustive reference implementations below; calls
/// on larger inputs are refused rather than attempted.
struct OracleLimits {
    std::size_t max_edges = 16;
    std::size_t max_nodes = 14;  // |U| + |V|
};

/// Reference answer for the (alpha, beta)-dense subgraph, found by
/// enumerating every one of the 2^|E| edge orientations and applying the
/// definition literally. All valid witness orientations are checked to agree;
/// disagreement throws ModelViolationError. Result is sorted by (side, index).
std::vector<NodeRef> oracle_dense(const BipartiteGraph& g, int32_t alpha, int32_t beta,
                                  const OracleLimits& limits = {});

/// Reference rank of every node at a fixed level of one side: the largest k
/// such that the node lies in the level-k dense subgraph along the other
/// axis, or -1 if it lies in none. capped == UpperU fixes alpha = level and
/// sweeps beta; capped == LowerV fixes beta = level and sweeps alpha.
struct OracleRanks {
    std::vector<int32_t> u;
    std::vector<int32_t> v;
};
OracleRanks oracle_rank(const BipartiteGraph& g, int32_t level, Side capped,
                        const OracleLimits& limits = {});

/// Reference value of p: the largest k with a nonempty (k, k)-dense subgraph,
/// -1 for edgeless graphs. Linear scan from k = 0.
int32_t oracle_p(const BipartiteGraph& g, const OracleLimits& limits = {});

/// Counterexample to the dense-inside / sparse-outside property, if any.
struct Theorem1Violation {
    bool inside = false;              // true: a subset of D removes too few edges
    std::vector<NodeRef> subset;      // the offending X (inside) or Y (outside)
    std::size_t edges_changed = 0;    // edges removed (inside) or gained (outside)
    std::size_t bound = 0;            // alpha*|X_U| + beta*|X_V|
};

/// Exhaustively checks both halves of the density property of a claimed
/// dense subgraph D: every nonempty X subseteq D must remove strictly more
/// than alpha|X_U| + beta|X_V| edges from G(D), and every Y disjoint from D
/// must add at most alpha|Y_U| + beta|Y_V| edges when joined to D.
std::optional<Theorem1Violation> verify_theorem1(const BipartiteGraph& g,
                                                 const std::vector<NodeRef>& dense,
                                                 int32_t alpha, int32_t beta,
                                                 const OracleLimits& limits = {});

} // namespace bdi
