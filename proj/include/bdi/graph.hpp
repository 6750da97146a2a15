#pragma once

#include <compare>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bdi/errors.hpp"

namespace bdi {

enum class Side : uint8_t { UpperU = 0, LowerV = 1 };

inline Side opposite(Side s) { return s == Side::UpperU ? Side::LowerV : Side::UpperU; }
inline char side_letter(Side s) { return s == Side::UpperU ? 'u' : 'v'; }

/// One node of a bipartite graph: the side it lives on plus a dense 0-based
/// index within that side. Ordered by (side, index).
struct NodeRef {
    Side side = Side::UpperU;
    uint32_t index = 0;

    friend bool operator==(const NodeRef&, const NodeRef&) = default;
    friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

inline NodeRef u_node(uint32_t i) { return {Side::UpperU, i}; }
inline NodeRef v_node(uint32_t i) { return {Side::LowerV, i}; }

/// Undirected bipartite graph over two disjoint node sets U and V.
/// Node indices are dense per side and never shrink; deleting edges may leave
/// isolated nodes behind. Adjacency lists delete by swap-with-last, so
/// neighbor iteration order is unspecified.
class BipartiteGraph {
public:
    BipartiteGraph() = default;
    BipartiteGraph(uint32_t u_count, uint32_t v_count)
        : adj_u_(u_count), adj_v_(v_count) {}

    uint32_t u_count() const { return static_cast<uint32_t>(adj_u_.size()); }
    uint32_t v_count() const { return static_cast<uint32_t>(adj_v_.size()); }
    std::size_t edge_count() const { return edges_.size(); }

    uint32_t side_count(Side s) const { return s == Side::UpperU ? u_count() : v_count(); }

    /// Appends a fresh isolated node and returns its index.
    uint32_t add_node(Side s);

    /// Grows the graph so that it has at least the given node counts.
    void ensure_counts(uint32_t u_count, uint32_t v_count);

    void insert_edge(uint32_t u, uint32_t v);
    void delete_edge(uint32_t u, uint32_t v);
    bool has_edge(uint32_t u, uint32_t v) const;

    uint32_t degree(NodeRef x) const;
    /// Neighbor indices on the opposite side; order unspecified.
    const std::vector<uint32_t>& neighbors(NodeRef x) const;

private:
    void check_u(uint32_t u) const;
    void check_v(uint32_t v) const;
    static uint64_t key(uint32_t u, uint32_t v) {
        return (static_cast<uint64_t>(u) << 32) | v;
    }

    std::vector<std::vector<uint32_t>> adj_u_;  // neighbors in V, per U node
    std::vector<std::vector<uint32_t>> adj_v_;  // neighbors in U, per V node
    std::unordered_set<uint64_t> edges_;
};

/// External-id bookkeeping for graphs loaded from edge-list files. The two
/// sides use separate id namespaces; indices are assigned in order of first
/// appearance.
struct IdMaps {
    std::vector<uint64_t> u_external;  // index -> external id
    std::vector<uint64_t> v_external;
    std::unordered_map<uint64_t, uint32_t> u_index;  // external id -> index
    std::unordered_map<uint64_t, uint32_t> v_index;

    uint32_t intern(Side s, uint64_t external_id);
    /// Index of an already-interned external id; nullopt if never seen.
    std::optional<uint32_t> find(Side s, uint64_t external_id) const;
};

struct LoadResult {
    BipartiteGraph graph;
    IdMaps ids;
    std::size_t duplicate_count = 0;  // input lines collapsed into existing edges
};

/// Parses a whitespace-separated edge list: one "u v" pair of positive
/// integers per line, '%' or '#' lines as comments, blank lines skipped,
/// extra trailing fields ignored. Duplicate edges are collapsed and counted.
/// With `seed`, interning starts from an existing id map, so the result's
/// internal indices agree with it regardless of the file's line order; ids
/// in the seed but absent from the file come out as isolated nodes.
LoadResult load_edge_list(std::istream& in, const IdMaps* seed = nullptr);
LoadResult load_edge_list_file(const std::string& path, const IdMaps* seed = nullptr);

/// Builds a graph from explicit (u, v) index pairs. Duplicates are rejected.
BipartiteGraph graph_from_edges(uint32_t u_count, uint32_t v_count,
                                const std::vector<std::pair<uint32_t, uint32_t>>& edges);

} // namespace bdi
