#pragma once

#include <cstdint>
#include <vector>

#include "bdi/graph.hpp"
#include "bdi/index.hpp"
#include "bdi/orientation.hpp"

namespace bdi {

enum class MaintenanceMode : uint8_t {
    Space, // keeps only rank tables, repairs rows with fresh flow runs
    Time,  // additionally keeps one egalitarian orientation per row
};

/// Highest rank that an edge insertion between `capped_end` and
/// `uncapped_end` can disturb in the row family capped on
/// `capped_end.side`, evaluated against the pre-insertion graph and table.
/// Nodes above the boundary keep their rank; only uncapped-side nodes at
/// exactly the boundary may gain one.
int32_t insertion_boundary(const BipartiteGraph& g, const RankTable& t, NodeRef capped_end,
                           NodeRef uncapped_end);

/// Deletion counterpart: only uncapped-side nodes at exactly this rank may
/// lose one. Evaluated against the pre-deletion table.
int32_t deletion_boundary(const RankTable& t, NodeRef a, NodeRef b);

/// Recomputes one capped-side node's rank from its neighbors' current
/// uncapped-side ranks (-1 when degree <= level, otherwise the
/// (level+1)-th highest neighbor rank).
int32_t capped_side_rank(const BipartiteGraph& g, const RankTable& t, NodeRef n);

/// Keeps a BDIndex consistent with a graph across single-edge updates.
/// Space mode reruns a bounded flow per row; Time mode repairs the stored
/// orientations with one path reversal per row. Both end in identical
/// index states.
class Maintainer {
public:
    Maintainer(BipartiteGraph& g, MaintenanceMode mode);

    void insert_edge(uint32_t u, uint32_t v);
    void erase_edge(uint32_t u, uint32_t v);

    MaintenanceMode mode() const { return mode_; }
    const BipartiteGraph& graph() const { return *g_; }
    const BDIndex& index() const { return index_; }
    /// Rank tables for levels 0..p; Time mode keeps one extra probe level at
    /// p+1, maintained like any published row, so that detecting growth of
    /// the top level costs O(1) instead of a from-scratch build per update.
    const std::vector<RankTable>& side_tables(Side s) const {
        return s == Side::UpperU ? u_tables_ : v_tables_;
    }
    /// Time mode only: the maintained orientations (including the probe
    /// level).
    const EgalitarianSet& orientations() const { return eset_; }

private:
    std::vector<RankTable>& tables(Side s) { return s == Side::UpperU ? u_tables_ : v_tables_; }
    void ensure_nodes(uint32_t u, uint32_t v);
    void rebuild_row(Side family, int32_t level);
    void append_probe_level();
    void promote_levels(uint32_t u, uint32_t v);
    void shrink_levels();

    void space_insert_row(Side family, int32_t level, int32_t boundary, NodeRef capped_end);
    void space_erase_row(Side family, int32_t level, int32_t boundary, NodeRef capped_end);
    void refresh_capped_ranks(Side family, int32_t level, NodeRef capped_end,
                              const std::vector<NodeRef>& moved_uncapped, bool* row_dirty);

    void time_insert_row(Side family, int32_t level, NodeRef capped_end, NodeRef uncapped_end);
    void time_erase_row(Side family, int32_t level, NodeRef capped_end, NodeRef uncapped_end,
                        uint32_t u, uint32_t v);

    BipartiteGraph* g_;
    MaintenanceMode mode_;
    BDIndex index_;
    std::vector<RankTable> u_tables_;
    std::vector<RankTable> v_tables_;
    EgalitarianSet eset_; // populated in Time mode only
};

} // namespace bdi
