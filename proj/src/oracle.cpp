#include "bdi/oracle.hpp"

#include <algorithm>
#include <cstddef>

namespace bdi {
namespace {

// Flat node numbering for the enumeration scratch arrays: U nodes first.
struct Flat {
    uint32_t u_count, v_count, n;
    uint32_t id(Side s, uint32_t i) const { return s == Side::UpperU ? i : u_count + i; }
    NodeRef ref(uint32_t id) const {
        return id < u_count ? u_node(id) : v_node(id - u_count);
    }
};

std::vector<std::pair<uint32_t, uint32_t>> edge_list(const BipartiteGraph& g) {
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    edges.reserve(g.edge_count());
    for (uint32_t u = 0; u < g.u_count(); ++u)
        for (uint32_t v : g.neighbors(u_node(u))) edges.emplace_back(u, v);
    std::sort(edges.begin(), edges.end());
    return edges;
}

void check_limits(const BipartiteGraph& g, const OracleLimits& limits, bool count_edges) {
    std::size_t nodes = static_cast<std::size_t>(g.u_count()) + g.v_count();
    if (nodes > limits.max_nodes)
        throw OracleLimitError("oracle refused: " + std::to_string(nodes) + " nodes > limit " +
                               std::to_string(limits.max_nodes));
    if (count_edges && g.edge_count() > limits.max_edges)
        throw OracleLimitError("oracle refused: " + std::to_string(g.edge_count()) +
                               " edges > limit " + std::to_string(limits.max_edges));
}

} // namespace

std::vector<NodeRef> oracle_dense(const BipartiteGraph& g, int32_t alpha, int32_t beta,
                                  const OracleLimits& limits) {
    if (alpha < 0 || beta < 0) throw Error("oracle_dense: negative level");
    check_limits(g, limits, true);

    const auto edges = edge_list(g);
    const Flat flat{g.u_count(), g.v_count(), g.u_count() + g.v_count()};
    const std::size_t m = edges.size();

    std::vector<int> indeg(flat.n);
    std::vector<std::vector<uint32_t>> out(flat.n), in(flat.n);
    std::vector<char> mark(flat.n);
    std::vector<uint32_t> queue;
    std::vector<char> dense_mask(flat.n);

    bool found_valid = false;
    // Every orientation of the m edges, one per bit pattern. Bit i set means
    // edge i points into its U endpoint.
    for (uint64_t mask = 0; mask < (uint64_t{1} << m); ++mask) {
        std::fill(indeg.begin(), indeg.end(), 0);
        for (auto& o : out) o.clear();
        for (auto& o : in) o.clear();
        for (std::size_t i = 0; i < m; ++i) {
            uint32_t uid = flat.id(Side::UpperU, edges[i].first);
            uint32_t vid = flat.id(Side::LowerV, edges[i].second);
            uint32_t head = (mask >> i) & 1 ? uid : vid;
            uint32_t tail = (mask >> i) & 1 ? vid : uid;
            ++indeg[head];
            out[tail].push_back(head);
            in[head].push_back(tail);
        }

        // S: nodes strictly under their side's cap. T: strictly over.
        std::fill(mark.begin(), mark.end(), 0);
        queue.clear();
        bool has_t = false;
        for (uint32_t id = 0; id < flat.n; ++id) {
            int cap = id < flat.u_count ? alpha : beta;
            if (indeg[id] < cap) {
                mark[id] = 1;
                queue.push_back(id);
            } else if (indeg[id] > cap) {
                has_t = true;
            }
        }

        // Witness is valid exactly when no directed path leads from S to T.
        bool valid = true;
        for (std::size_t head = 0; head < queue.size() && valid; ++head) {
            for (uint32_t next : out[queue[head]]) {
                if (mark[next]) continue;
                int cap = next < flat.u_count ? alpha : beta;
                if (indeg[next] > cap) {
                    valid = false;
                    break;
                }
                mark[next] = 1;
                queue.push_back(next);
            }
        }
        if (!valid) continue;

        // D: T plus everything that can reach T, by backward search.
        std::fill(mark.begin(), mark.end(), 0);
        queue.clear();
        if (has_t) {
            for (uint32_t id = 0; id < flat.n; ++id) {
                int cap = id < flat.u_count ? alpha : beta;
                if (indeg[id] > cap) {
                    mark[id] = 1;
                    queue.push_back(id);
                }
            }
            for (std::size_t head = 0; head < queue.size(); ++head) {
                for (uint32_t prev : in[queue[head]]) {
                    if (!mark[prev]) {
                        mark[prev] = 1;
                        queue.push_back(prev);
                    }
                }
            }
        }

        if (!found_valid) {
            found_valid = true;
            dense_mask = mark;
        } else if (dense_mask != mark) {
            throw ModelViolationError("two valid witness orientations disagree on D");
        }
    }

    if (!found_valid)
        throw ModelViolationError("no valid witness orientation exists");

    std::vector<NodeRef> dense;
    for (uint32_t id = 0; id < flat.n; ++id)
        if (dense_mask[id]) dense.push_back(flat.ref(id));
    return dense;
}

OracleRanks oracle_rank(const BipartiteGraph& g, int32_t level, Side capped,
                        const OracleLimits& limits) {
    OracleRanks ranks;
    ranks.u.assign(g.u_count(), -1);
    ranks.v.assign(g.v_count(), -1);
    for (int32_t k = 0;; ++k) {
        auto dense = capped == Side::UpperU ? oracle_dense(g, level, k, limits)
                                            : oracle_dense(g, k, level, limits);
        if (dense.empty()) break;
        for (NodeRef x : dense)
            (x.side == Side::UpperU ? ranks.u : ranks.v)[x.index] = k;
    }
    return ranks;
}

int32_t oracle_p(const BipartiteGraph& g, const OracleLimits& limits) {
    int32_t p = -1;
    while (!oracle_dense(g, p + 1, p + 1, limits).empty()) ++p;
    return p;
}

std::optional<Theorem1Violation> verify_theorem1(const BipartiteGraph& g,
                                                 const std::vector<NodeRef>& dense,
                                                 int32_t alpha, int32_t beta,
                                                 const OracleLimits& limits) {
    check_limits(g, limits, false);
    const Flat flat{g.u_count(), g.v_count(), g.u_count() + g.v_count()};
    const auto edges = edge_list(g);

    std::vector<char> in_dense(flat.n, 0);
    for (NodeRef x : dense) in_dense[flat.id(x.side, x.index)] = 1;

    std::vector<uint32_t> d_ids, c_ids;
    for (uint32_t id = 0; id < flat.n; ++id)
        (in_dense[id] ? d_ids : c_ids).push_back(id);

    auto bound_of = [&](const std::vector<uint32_t>& ids, uint64_t subset) {
        std::size_t bound = 0;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if ((subset >> i) & 1)
                bound += ids[i] < flat.u_count ? static_cast<std::size_t>(alpha)
                                               : static_cast<std::size_t>(beta);
        return bound;
    };
    auto members_of = [&](const std::vector<uint32_t>& ids, uint64_t subset) {
        std::vector<NodeRef> out;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if ((subset >> i) & 1) out.push_back(flat.ref(ids[i]));
        return out;
    };

    // Inside half: removing any nonempty X from G(D) must delete strictly
    // more than alpha|X_U| + beta|X_V| edges.
    std::vector<char> in_subset(flat.n);
    for (uint64_t subset = 1; subset < (uint64_t{1} << d_ids.size()); ++subset) {
        std::fill(in_subset.begin(), in_subset.end(), 0);
        for (std::size_t i = 0; i < d_ids.size(); ++i)
            if ((subset >> i) & 1) in_subset[d_ids[i]] = 1;
        std::size_t removed = 0;
        for (auto [u, v] : edges) {
            uint32_t uid = flat.id(Side::UpperU, u), vid = flat.id(Side::LowerV, v);
            if (!in_dense[uid] || !in_dense[vid]) continue;
            if (in_subset[uid] || in_subset[vid]) ++removed;
        }
        std::size_t bound = bound_of(d_ids, subset);
        if (removed <= bound)
            return Theorem1Violation{true, members_of(d_ids, subset), removed, bound};
    }

    // Outside half: adding any Y from the complement gains at most
    // alpha|Y_U| + beta|Y_V| edges.
    for (uint64_t subset = 1; subset < (uint64_t{1} << c_ids.size()); ++subset) {
        std::fill(in_subset.begin(), in_subset.end(), 0);
        for (std::size_t i = 0; i < c_ids.size(); ++i)
            if ((subset >> i) & 1) in_subset[c_ids[i]] = 1;
        std::size_t gained = 0;
        for (auto [u, v] : edges) {
            uint32_t uid = flat.id(Side::UpperU, u), vid = flat.id(Side::LowerV, v);
            bool u_in = in_dense[uid] || in_subset[uid];
            bool v_in = in_dense[vid] || in_subset[vid];
            bool was = in_dense[uid] && in_dense[vid];
            if (u_in && v_in && !was) ++gained;
        }
        std::size_t bound = bound_of(c_ids, subset);
        if (gained > bound)
            return Theorem1Violation{false, members_of(c_ids, subset), gained, bound};
    }
    return std::nullopt;
}

} // namespace bdi
