#include "bdi/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bdi {

namespace {

constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();

struct FlatView {
    uint32_t uc, n;
    explicit FlatView(const Orientation& o)
        : uc(o.u_count()), n(o.u_count() + o.v_count()) {}
    uint32_t flat(NodeRef x) const { return x.side == Side::UpperU ? x.index : uc + x.index; }
    NodeRef ref(uint32_t id) const { return id < uc ? u_node(id) : v_node(id - uc); }
};

int32_t cap_of(const LevelPair& caps, NodeRef x) {
    return x.side == Side::UpperU ? caps.alpha : caps.beta;
}

// One saturation phase: a breadth-first layering from every under-cap node,
// then a maximal set of vertex-disjoint shortest paths into over-cap nodes,
// each reversed to shift one unit of indegree. Returns the number of paths.
std::size_t augment_phase(Orientation& o, const LevelPair& caps) {
    const FlatView f(o);
    std::vector<uint32_t> dist(f.n, kNone);
    std::vector<uint32_t> queue;
    for (uint32_t id = 0; id < f.n; ++id) {
        NodeRef x = f.ref(id);
        if (static_cast<int32_t>(o.indegree(x)) < cap_of(caps, x)) {
            dist[id] = 0;
            queue.push_back(id);
        }
    }
    uint32_t t_dist = kNone;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        uint32_t y = queue[h];
        if (dist[y] >= t_dist) break;
        NodeRef yr = f.ref(y);
        if (dist[y] > 0 && static_cast<int32_t>(o.indegree(yr)) > cap_of(caps, yr)) {
            t_dist = dist[y];  // shortest distance to any over-cap node
            continue;
        }
        const Side os = opposite(yr.side);
        for (const Orientation::IncEntry& en : o.incident(yr)) {
            if (en.toward_me()) continue;
            uint32_t x = f.flat({os, en.other});
            if (dist[x] != kNone) continue;
            dist[x] = dist[y] + 1;
            queue.push_back(x);
        }
    }
    if (t_dist == kNone) return 0;

    // Depth-first path packing along dist+1 edges, one path per start node,
    // with a per-node cursor so dead ends are never rescanned.
    std::vector<uint32_t> cursor(f.n, 0);
    std::vector<char> used(f.n, 0);
    std::vector<uint32_t> stack_node, stack_edge;
    std::size_t paths = 0;
    for (uint32_t s = 0; s < f.n; ++s) {
        if (dist[s] != 0 || used[s]) continue;
        stack_node.assign(1, s);
        stack_edge.clear();
        while (!stack_node.empty()) {
            uint32_t y = stack_node.back();
            NodeRef yr = f.ref(y);
            if (dist[y] == t_dist &&
                static_cast<int32_t>(o.indegree(yr)) > cap_of(caps, yr)) {
                // Reversing the path feeds one unit to s and relieves y.
                reverse_path(o, stack_edge);
                ++paths;
                for (uint32_t id : stack_node) used[id] = 1;
                break;
            }
            const auto& inc = o.incident(yr);
            const Side os = opposite(yr.side);
            bool advanced = false;
            while (cursor[y] < inc.size()) {
                const Orientation::IncEntry en = inc[cursor[y]++];
                if (en.toward_me()) continue;
                uint32_t x = f.flat({os, en.other});
                if (used[x] || dist[x] != dist[y] + 1 || dist[x] > t_dist) continue;
                NodeRef xr = f.ref(x);
                // Interior nodes must not themselves be over cap before the
                // final layer; such nodes terminate paths only at t_dist.
                if (dist[x] < t_dist &&
                    static_cast<int32_t>(o.indegree(xr)) > cap_of(caps, xr))
                    continue;
                stack_node.push_back(x);
                stack_edge.push_back(en.edge());
                advanced = true;
                break;
            }
            if (!advanced) {
                used[y] = 1;  // exhausted; no path through here this phase
                stack_node.pop_back();
                if (!stack_edge.empty()) stack_edge.pop_back();
            }
        }
    }
    return paths;
}

} // namespace

DenseResult compute_dense_witness(const BipartiteGraph& g, LevelPair caps) {
    if (caps.alpha < 0 || caps.beta < 0)
        throw Error("compute_dense_subgraph: negative level");
    DenseResult out;
    out.witness.caps = caps;
    Orientation& o = out.witness.orientation;
    o = Orientation(g.u_count(), g.v_count(), caps.alpha, Side::UpperU);

    // Greedy seed: an edge goes to its V endpoint while that has room, then
    // to its U endpoint, and to the V endpoint once both are full.
    o.reserve_degrees(g);
    for (uint32_t u = 0; u < g.u_count(); ++u) {
        for (uint32_t v : g.neighbors(u_node(u))) {
            if (static_cast<int32_t>(o.indegree(v_node(v))) < caps.beta)
                o.add_directed_edge_unchecked(u_node(u), v_node(v));
            else if (static_cast<int32_t>(o.indegree(u_node(u))) < caps.alpha)
                o.add_directed_edge_unchecked(v_node(v), u_node(u));
            else
                o.add_directed_edge_unchecked(u_node(u), v_node(v));
        }
    }

    while (augment_phase(o, caps) > 0) {
    }

    const FlatView f(o);
    std::vector<char> in_dense(f.n, 0);
    std::vector<uint32_t> queue;
    for (uint32_t id = 0; id < f.n; ++id) {
        NodeRef x = f.ref(id);
        int32_t cap = cap_of(caps, x);
        if (static_cast<int32_t>(o.indegree(x)) < cap) out.witness.s_nodes.push_back(x);
        if (static_cast<int32_t>(o.indegree(x)) > cap) {
            out.witness.t_nodes.push_back(x);
            in_dense[id] = 1;
            queue.push_back(id);
        }
    }
    // D is T closed under "can reach T", via backward search.
    for (std::size_t h = 0; h < queue.size(); ++h) {
        NodeRef yr = f.ref(queue[h]);
        const Side os = opposite(yr.side);
        for (const Orientation::IncEntry& en : o.incident(yr)) {
            if (!en.toward_me()) continue;
            uint32_t x = f.flat({os, en.other});
            if (!in_dense[x]) {
                in_dense[x] = 1;
                queue.push_back(x);
            }
        }
    }
    for (uint32_t id = 0; id < f.n; ++id)
        if (in_dense[id]) out.nodes.push_back(f.ref(id));
    return out;
}

std::vector<NodeRef> compute_dense_subgraph(const BipartiteGraph& g, LevelPair caps) {
    return compute_dense_witness(g, caps).nodes;
}

int32_t compute_p(const BipartiteGraph& g) {
    if (g.edge_count() == 0) return -1;
    auto nonempty = [&](int32_t k) {
        return !compute_dense_witness(g, {k, k}).witness.t_nodes.empty();
    };
    int32_t hi = static_cast<int32_t>(std::sqrt(static_cast<double>(g.edge_count())));
    while (static_cast<std::size_t>(hi) * hi > g.edge_count()) --hi;
    while (static_cast<std::size_t>(hi + 1) * (hi + 1) <= g.edge_count()) ++hi;
    hi /= 2;
    int32_t lo = 0;
    while (lo < hi) {
        int32_t mid = lo + (hi - lo + 1) / 2;
        if (nonempty(mid))
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

} // namespace bdi
