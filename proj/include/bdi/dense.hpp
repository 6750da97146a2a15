#pragma once

#include <cstdint>
#include <vector>

#include "bdi/graph.hpp"
#include "bdi/orientation.hpp"

namespace bdi {

/// A query point: cap alpha on U-side indegrees, beta on V-side.
struct LevelPair {
    int32_t alpha = 0;
    int32_t beta = 0;

    friend bool operator==(const LevelPair&, const LevelPair&) = default;
};

/// Certificate produced by the online computation: an orientation in which
/// no directed path runs from an under-cap node (S) to an over-cap node (T).
struct OrientationWitness {
    Orientation orientation;
    LevelPair caps;
    std::vector<NodeRef> s_nodes;
    std::vector<NodeRef> t_nodes;
};

struct DenseResult {
    std::vector<NodeRef> nodes;  // sorted by (side, index)
    OrientationWitness witness;
};

/// Online (alpha, beta)-dense subgraph: treats each edge as one unit to be
/// assigned to exactly one endpoint under per-side caps, saturates the
/// assignment with shortest augmenting paths (batched breadth-first phases
/// from all under-cap nodes), and reads D off the witness as the over-cap
/// nodes plus everything that can reach one.
DenseResult compute_dense_witness(const BipartiteGraph& g, LevelPair caps);
std::vector<NodeRef> compute_dense_subgraph(const BipartiteGraph& g, LevelPair caps);

/// Largest k with a nonempty (k, k)-dense subgraph, found by binary search
/// over [0, floor(sqrt(|E|)/2)]; -1 for edgeless graphs.
int32_t compute_p(const BipartiteGraph& g);

} // namespace bdi
