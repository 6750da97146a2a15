#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdi/graph.hpp"

namespace bdi {

/// Directed view of a bipartite graph in which one side is capped at a fixed
/// level. Stores one direction flag per edge against the canonical (U, V)
/// record and keeps node indegrees cached. Incident entries live in one
/// contiguous arena per side, grouped into per-node blocks, so traversals
/// stream through memory without touching the edge records; blocks delete by
/// swap-with-last, so iteration order is unspecified.
class Orientation {
public:
    struct DirectedEdge {
        uint32_t u, v;
        uint32_t pos_u, pos_v;  // block-relative slots in each endpoint's list
        bool toward_u;
    };

    /// One incident-list entry: the opposite endpoint's index plus the edge id
    /// and its direction relative to the list's owner.
    struct IncEntry {
        uint32_t other;
        uint32_t eid_dir;  // edge id << 1 | (1 when directed toward the owner)

        uint32_t edge() const { return eid_dir >> 1; }
        bool toward_me() const { return (eid_dir & 1u) != 0; }
    };

    /// Contiguous view of one node's incident entries. Invalidated by edge
    /// insertion or removal (block relocation); edge flips keep it valid.
    struct IncView {
        const IncEntry* base = nullptr;
        uint32_t n = 0;

        const IncEntry* begin() const { return base; }
        const IncEntry* end() const { return base + n; }
        uint32_t size() const { return n; }
        const IncEntry& operator[](uint32_t i) const { return base[i]; }
    };

    Orientation() = default;
    Orientation(uint32_t u_count, uint32_t v_count, int32_t level, Side capped)
        : head_u_(u_count), head_v_(v_count), indeg_u_(u_count), indeg_v_(v_count),
          level_(level), capped_(capped) {}

    int32_t level() const { return level_; }
    Side capped_side() const { return capped_; }
    Side uncapped_side() const { return opposite(capped_); }

    uint32_t u_count() const { return static_cast<uint32_t>(head_u_.size()); }
    uint32_t v_count() const { return static_cast<uint32_t>(head_v_.size()); }
    uint32_t side_count(Side s) const { return s == Side::UpperU ? u_count() : v_count(); }
    std::size_t edge_count() const { return edges_.size(); }

    const DirectedEdge& edge(uint32_t id) const { return edges_[id]; }
    NodeRef head(uint32_t id) const {
        return edges_[id].toward_u ? u_node(edges_[id].u) : v_node(edges_[id].v);
    }
    NodeRef tail(uint32_t id) const {
        return edges_[id].toward_u ? v_node(edges_[id].v) : u_node(edges_[id].u);
    }

    /// Incident entries of a node, both directions mixed.
    IncView incident(NodeRef x) const {
        if (x.side == Side::UpperU) return {arena_u_.data() + head_u_[x.index].begin,
                                            head_u_[x.index].size};
        return {arena_v_.data() + head_v_[x.index].begin, head_v_[x.index].size};
    }
    uint32_t indegree(NodeRef x) const {
        return x.side == Side::UpperU ? indeg_u_[x.index] : indeg_v_[x.index];
    }

    /// Smallest and largest indegree over the uncapped side (0 when that side
    /// is empty), letting reachability searches stop at a candidate that
    /// provably attains the bound. The backing histogram materializes on the
    /// first call and is kept current from then on, so orientations that
    /// never ask (e.g. the flow solver's) pay nothing per edge change. Not
    /// thread-safe against concurrent first calls.
    uint32_t min_uncapped_load() const {
        if (!loads_tracked_) track_loads();
        return load_lo_;
    }
    uint32_t max_uncapped_load() const {
        if (!loads_tracked_) track_loads();
        return load_hi_;
    }

    void ensure_counts(uint32_t u_count, uint32_t v_count);
    void add_directed_edge(NodeRef from, NodeRef to);
    /// add_directed_edge without the duplicate scan; the caller must guarantee
    /// the node pair is not already connected. Meant for bulk seeding from a
    /// graph, whose edge set is duplicate-free by construction.
    void add_directed_edge_unchecked(NodeRef from, NodeRef to);
    void remove_edge(uint32_t u, uint32_t v);
    bool directed_toward(uint32_t u, uint32_t v, Side s) const;

    /// Lays each side's arena out with one exactly-degree-sized block per
    /// node (on top of any entries already present) and pre-sizes the edge
    /// store, sparing bulk loads the growth churn.
    void reserve_degrees(const BipartiteGraph& g);

    /// Flips one edge, moving a unit of indegree between its endpoints.
    void flip(uint32_t id);

    uint32_t find_edge(uint32_t u, uint32_t v) const;

private:
    // Per-node block of incident entries inside the side's arena. Growth
    // relocates the block to the arena tail (positions are block-relative,
    // so the edge records never change); the vacated span is reclaimed by
    // the next compaction.
    struct Block {
        uint32_t begin = 0, size = 0, cap = 0;
    };

    void push_edge(uint32_t u, uint32_t v, bool toward_u);
    uint32_t block_append(Side s, uint32_t node, IncEntry en);
    void compact(Side s);

    // Moves one uncapped node between load classes in the histogram backing
    // min/max_uncapped_load; a no-op until the histogram has materialized.
    void shift_load(uint32_t from, uint32_t to) {
        if (!loads_tracked_) return;
        if (to >= load_cnt_.size()) load_cnt_.resize(to + 1, 0);
        --load_cnt_[from];
        ++load_cnt_[to];
        if (to < load_lo_) load_lo_ = to;
        if (to > load_hi_) load_hi_ = to;
        while (load_lo_ < load_hi_ && load_cnt_[load_lo_] == 0) ++load_lo_;
        while (load_hi_ > load_lo_ && load_cnt_[load_hi_] == 0) --load_hi_;
    }
    void track_loads() const;

    std::vector<DirectedEdge> edges_;
    std::vector<IncEntry> arena_u_, arena_v_;
    std::vector<Block> head_u_, head_v_;
    uint64_t dead_u_ = 0, dead_v_ = 0;
    std::vector<uint32_t> indeg_u_, indeg_v_;
    mutable std::vector<uint64_t> load_cnt_;
    mutable uint32_t load_lo_ = 0, load_hi_ = 0;
    mutable bool loads_tracked_ = false;
    int32_t level_ = 0;
    Side capped_ = Side::UpperU;
};

/// Directs every edge into its capped-side endpoint, then flips the excess
/// edges of each over-full capped node outward, retaining the edges to its
/// lowest-index neighbors inbound. The result satisfies the capped-side
/// degree condition but is generally not yet egalitarian.
Orientation init_orientation(const BipartiteGraph& g, int32_t level, Side capped);

/// Removes every uncapped-side imbalance by path reversals until no directed
/// path runs from an uncapped node to another uncapped node with indegree at
/// least two higher. Preserves the capped-side condition. Returns the number
/// of reversals performed (length-two reversals included).
std::size_t balance_orientation(Orientation& o);

struct VerifyResult {
    bool ok = true;
    std::string message;
    // For a balance violation: (low-indegree node, reachable high-indegree node).
    std::optional<std::pair<NodeRef, NodeRef>> violation;
};

/// Checks both egalitarian conditions plus cached-indegree integrity.
VerifyResult verify_egalitarian(const Orientation& o);

/// Ranks of all nodes at one level of one side: the largest k such that the
/// node belongs to the level-k dense subgraph along the other axis, or -1.
struct RankTable {
    int32_t level = 0;
    Side capped = Side::UpperU;
    std::vector<int32_t> u, v;
    int32_t max_rank = -1;

    int32_t rank(NodeRef x) const { return x.side == Side::UpperU ? u[x.index] : v[x.index]; }
    std::vector<int32_t>& side_ranks(Side s) { return s == Side::UpperU ? u : v; }
    const std::vector<int32_t>& side_ranks(Side s) const { return s == Side::UpperU ? u : v; }

    void refresh_max_rank();
};

/// Extracts the full rank table from an egalitarian orientation in one
/// backward sweep over descending uncapped indegree classes.
RankTable orientation_to_rank(const Orientation& o);

/// A node found by a reachability search plus the directed path connecting
/// it to the query node (edge ids in path order; empty when node == query).
struct ReachWitness {
    NodeRef node;
    std::vector<uint32_t> path;
};

/// Minimum-indegree uncapped node that can reach `target`; path runs from
/// that node to `target`. The search stops at the first candidate whose
/// indegree matches the orientation-wide minimum; otherwise it sweeps the
/// whole reachable set and ties break to the lowest node index. Either way
/// the result is deterministic and its indegree is minimal.
std::optional<ReachWitness> min_reacher(const Orientation& o, NodeRef target);

/// Maximum-indegree uncapped node reachable from `start`; path runs from
/// `start` to that node. With include_self, `start` itself is a candidate
/// (reached by the empty path) when it lies on the uncapped side. Stops at
/// the first candidate matching the orientation-wide maximum, with the same
/// full-sweep fallback and determinism as min_reacher.
std::optional<ReachWitness> max_reachable(const Orientation& o, NodeRef start,
                                          bool include_self);

/// Flips every edge along a directed path, transferring one unit of indegree
/// from the path's head to its tail. The edges must chain head-to-tail.
void reverse_path(Orientation& o, const std::vector<uint32_t>& path);

/// The egalitarian orientations kept by time-efficient maintenance: one per
/// maintained level for each capped side (a maintainer also keeps one probe
/// level above its published top row).
struct EgalitarianSet {
    std::vector<Orientation> u_levels;
    std::vector<Orientation> v_levels;

    int32_t p() const { return static_cast<int32_t>(u_levels.size()) - 1; }
    std::vector<Orientation>& side_levels(Side s) {
        return s == Side::UpperU ? u_levels : v_levels;
    }
};

} // namespace bdi
