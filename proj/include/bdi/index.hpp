#pragma once

#include <cstdint>
#include <vector>

#include "bdi/dense.hpp"
#include "bdi/graph.hpp"
#include "bdi/orientation.hpp"

namespace bdi {

/// One level of the index: every node whose rank at this level clears the
/// row's threshold, ascending by rank with (side, index) order within a
/// rank, plus one cursor per queryable rank pointing at the first node of at
/// least that rank. U-family rows keep rank >= level and carry cursors from
/// level upward; V-family rows keep rank > level with cursors from level+1.
struct IndexRow {
    int32_t level = 0;
    std::vector<NodeRef> nodes;
    std::vector<int32_t> ranks;      // parallel to nodes
    int32_t cursor_low = 0;
    std::vector<uint32_t> cursors;   // cursors[b - cursor_low], b in [cursor_low, max_rank]

    int32_t max_rank() const {
        return cursor_low + static_cast<int32_t>(cursors.size()) - 1;
    }
};

/// The two row families plus p. Answers any (alpha, beta) query in output
/// time: alpha <= beta from U row alpha, alpha > beta from V row beta.
struct BDIndex {
    int32_t p = -1;
    std::vector<IndexRow> u_rows;
    std::vector<IndexRow> v_rows;

    std::vector<IndexRow>& side_rows(Side s) { return s == Side::UpperU ? u_rows : v_rows; }
    const std::vector<IndexRow>& side_rows(Side s) const {
        return s == Side::UpperU ? u_rows : v_rows;
    }
};

struct QueryStats {
    uint64_t entries_touched = 0;
};

/// Contiguous suffix lookup per the routing rule above; empty when the level
/// exceeds p or the other coordinate exceeds the row's highest rank.
std::vector<NodeRef> query(const BDIndex& idx, LevelPair q, QueryStats* stats = nullptr);

/// Builds a row of the family given by the table's capped side (counting
/// sort by rank; intra-rank order is (side, index)).
IndexRow make_index_row(const RankTable& t);

struct BuildResult {
    BDIndex index;
    EgalitarianSet orientations;       // one egalitarian orientation per row
    std::vector<RankTable> u_tables;   // full rank tables per level
    std::vector<RankTable> v_tables;

    std::vector<RankTable>& side_tables(Side s) {
        return s == Side::UpperU ? u_tables : v_tables;
    }
};

/// Full construction: p by binary search, then one balanced orientation and
/// one row per level and side.
BuildResult build_index(const BipartiteGraph& g);

struct IndexStats {
    uint64_t u_entries = 0, v_entries = 0;
    uint64_t u_cursors = 0, v_cursors = 0;

    uint64_t entry_count() const { return u_entries + v_entries; }
    uint64_t cursor_count() const { return u_cursors + v_cursors; }
    // 4 bytes of node id + 4 of rank per entry, 4 per cursor.
    uint64_t model_bytes() const { return 8 * entry_count() + 4 * cursor_count(); }
};

IndexStats index_stats(const BDIndex& idx);

/// Bit-exact little-endian encoding; optionally appends the external-id map
/// as a trailer. deserialize(serialize(x)) reproduces x exactly.
std::vector<uint8_t> serialize(const BDIndex& idx, const IdMaps* ids = nullptr);

/// Strict decode; malformed input raises FormatError naming the byte offset.
/// When `ids` is non-null and the file carries an id-map trailer, it is
/// filled in.
BDIndex deserialize(const std::vector<uint8_t>& bytes, IdMaps* ids = nullptr);

} // namespace bdi
