#include "bdi/orientation.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace bdi {

namespace {

constexpr uint32_t kNoEdge = std::numeric_limits<uint32_t>::max();

// Flat node numbering (U first, then V) for search scratch arrays.
struct FlatView {
    uint32_t uc, n;
    explicit FlatView(const Orientation& o)
        : uc(o.u_count()), n(o.u_count() + o.v_count()) {}
    uint32_t flat(NodeRef x) const { return x.side == Side::UpperU ? x.index : uc + x.index; }
    NodeRef ref(uint32_t id) const { return id < uc ? u_node(id) : v_node(id - uc); }
};

std::string node_name(NodeRef x) {
    return std::string(1, side_letter(x.side)) + std::to_string(x.index);
}

// Uncapped-side nodes grouped by indegree class via counting sort: class k
// occupies nodes[off[k] .. off[k+1]), ascending node index within a class.
struct ClassBuckets {
    uint32_t dmax = 0;
    std::vector<uint32_t> off;
    std::vector<uint32_t> nodes;
};

ClassBuckets bucket_by_class(const Orientation& o) {
    const Side us = o.uncapped_side();
    const uint32_t un = o.side_count(us);
    ClassBuckets b;
    for (uint32_t i = 0; i < un; ++i) b.dmax = std::max(b.dmax, o.indegree({us, i}));
    b.off.assign(b.dmax + 2, 0);
    for (uint32_t i = 0; i < un; ++i) ++b.off[o.indegree({us, i}) + 1];
    for (std::size_t k = 1; k < b.off.size(); ++k) b.off[k] += b.off[k - 1];
    b.nodes.resize(un);
    std::vector<uint32_t> fill(b.off.begin(), b.off.end() - 1);
    for (uint32_t i = 0; i < un; ++i) b.nodes[fill[o.indegree({us, i})]++] = i;
    return b;
}

// Reusable per-thread search workspace. The visited set is one bit per node
// so the membership probes that dominate a traversal stay cache-resident;
// parent entries are written only at discovery, so the array never needs
// clearing between calls.
struct SearchScratch {
    std::vector<uint64_t> vis;
    std::vector<uint32_t> parent;
    std::vector<uint32_t> queue;

    void reset(uint32_t n) {
        vis.assign((static_cast<std::size_t>(n) + 63) / 64, 0);
        if (parent.size() < n) parent.resize(n);
        queue.clear();
    }
    // Marks a node, reporting whether it was already marked. Writes only on
    // first visit to keep re-probed cache lines clean.
    bool test_set(uint32_t i) {
        uint64_t& w = vis[i >> 6];
        const uint64_t m = 1ull << (i & 63);
        if (w & m) return true;
        w |= m;
        return false;
    }
};

SearchScratch& tls_scratch() {
    thread_local SearchScratch s;
    return s;
}

} // namespace

void Orientation::ensure_counts(uint32_t u_count, uint32_t v_count) {
    if (u_count > head_u_.size()) {
        if (loads_tracked_ && capped_ == Side::LowerV) {
            load_cnt_[0] += u_count - head_u_.size();
            load_lo_ = 0;
        }
        head_u_.resize(u_count);
        indeg_u_.resize(u_count, 0);
    }
    if (v_count > head_v_.size()) {
        if (loads_tracked_ && capped_ == Side::UpperU) {
            load_cnt_[0] += v_count - head_v_.size();
            load_lo_ = 0;
        }
        head_v_.resize(v_count);
        indeg_v_.resize(v_count, 0);
    }
}

void Orientation::track_loads() const {
    const std::vector<uint32_t>& deg = capped_ == Side::UpperU ? indeg_v_ : indeg_u_;
    uint32_t top = 0;
    for (uint32_t d : deg) top = std::max(top, d);
    load_cnt_.assign(static_cast<std::size_t>(top) + 1, 0);
    for (uint32_t d : deg) ++load_cnt_[d];
    load_lo_ = top;
    load_hi_ = top;
    for (uint32_t d = 0; d <= top; ++d)
        if (load_cnt_[d] != 0) {
            load_lo_ = d;
            break;
        }
    loads_tracked_ = true;
}

// Appends one entry to a node's block, returning its block-relative slot. A
// full block relocates to the arena tail with doubled capacity; once vacated
// spans outweigh the live entries, the arena is compacted in node order.
uint32_t Orientation::block_append(Side s, uint32_t node, IncEntry en) {
    std::vector<IncEntry>& arena = s == Side::UpperU ? arena_u_ : arena_v_;
    std::vector<Block>& heads = s == Side::UpperU ? head_u_ : head_v_;
    uint64_t& dead = s == Side::UpperU ? dead_u_ : dead_v_;
    Block& h = heads[node];
    if (h.size == h.cap) {
        if (dead > arena.size() / 2 && dead > 4096) compact(s);
        const uint32_t ncap = h.cap ? h.cap * 2 : 4;
        const std::size_t at = arena.size();
        if (at + ncap > std::numeric_limits<uint32_t>::max())
            throw IntegrityError("orientation incident arena exhausted");
        arena.resize(at + ncap);
        std::copy_n(arena.begin() + h.begin, h.size, arena.begin() + at);
        dead += h.cap;
        h.begin = static_cast<uint32_t>(at);
        h.cap = ncap;
    }
    arena[h.begin + h.size] = en;
    return h.size++;
}

void Orientation::compact(Side s) {
    std::vector<IncEntry>& arena = s == Side::UpperU ? arena_u_ : arena_v_;
    std::vector<Block>& heads = s == Side::UpperU ? head_u_ : head_v_;
    std::size_t live = 0;
    for (const Block& h : heads) live += h.size;
    std::vector<IncEntry> fresh(live);
    std::size_t at = 0;
    for (Block& h : heads) {
        std::copy_n(arena.begin() + h.begin, h.size, fresh.begin() + at);
        h.begin = static_cast<uint32_t>(at);
        h.cap = h.size;
        at += h.size;
    }
    arena = std::move(fresh);
    (s == Side::UpperU ? dead_u_ : dead_v_) = 0;
}

void Orientation::push_edge(uint32_t u, uint32_t v, bool toward_u) {
    if (edges_.size() >= (1u << 31) - 1u)
        throw IntegrityError("orientation edge id space exhausted");
    const uint32_t id = static_cast<uint32_t>(edges_.size());
    const uint32_t pu = block_append(Side::UpperU, u, {v, id << 1 | (toward_u ? 1u : 0u)});
    const uint32_t pv = block_append(Side::LowerV, v, {u, id << 1 | (toward_u ? 0u : 1u)});
    edges_.push_back({u, v, pu, pv, toward_u});
    if (toward_u) {
        if (capped_ == Side::LowerV) shift_load(indeg_u_[u], indeg_u_[u] + 1);
        ++indeg_u_[u];
    } else {
        if (capped_ == Side::UpperU) shift_load(indeg_v_[v], indeg_v_[v] + 1);
        ++indeg_v_[v];
    }
}

void Orientation::add_directed_edge(NodeRef from, NodeRef to) {
    if (from.side == to.side)
        throw InvalidOrientationError("directed edge endpoints lie on one side");
    uint32_t u = from.side == Side::UpperU ? from.index : to.index;
    uint32_t v = from.side == Side::LowerV ? from.index : to.index;
    if (u >= u_count() || v >= v_count())
        throw InvalidNodeError("orientation node out of range");
    const bool scan_u = head_u_[u].size <= head_v_[v].size;
    const uint32_t want = scan_u ? v : u;
    for (const IncEntry& en : incident(scan_u ? u_node(u) : v_node(v)))
        if (en.other == want)
            throw DuplicateEdgeError("orientation already holds edge (" + std::to_string(u) +
                                     "," + std::to_string(v) + ")");
    push_edge(u, v, to.side == Side::UpperU);
}

void Orientation::add_directed_edge_unchecked(NodeRef from, NodeRef to) {
    if (from.side == to.side)
        throw InvalidOrientationError("directed edge endpoints lie on one side");
    uint32_t u = from.side == Side::UpperU ? from.index : to.index;
    uint32_t v = from.side == Side::LowerV ? from.index : to.index;
    if (u >= u_count() || v >= v_count())
        throw InvalidNodeError("orientation node out of range");
    push_edge(u, v, to.side == Side::UpperU);
}

void Orientation::reserve_degrees(const BipartiteGraph& g) {
    edges_.reserve(edges_.size() + g.edge_count());
    for (Side s : {Side::UpperU, Side::LowerV}) {
        std::vector<IncEntry>& arena = s == Side::UpperU ? arena_u_ : arena_v_;
        std::vector<Block>& heads = s == Side::UpperU ? head_u_ : head_v_;
        const uint32_t known = std::min(g.side_count(s), static_cast<uint32_t>(heads.size()));
        std::size_t total = 0;
        for (uint32_t i = 0; i < heads.size(); ++i)
            total += heads[i].size + (i < known ? g.degree({s, i}) : 0);
        if (total > std::numeric_limits<uint32_t>::max())
            throw IntegrityError("orientation incident arena exhausted");
        std::vector<IncEntry> fresh(total);
        std::size_t at = 0;
        for (uint32_t i = 0; i < heads.size(); ++i) {
            Block& h = heads[i];
            std::copy_n(arena.begin() + h.begin, h.size, fresh.begin() + at);
            h.begin = static_cast<uint32_t>(at);
            h.cap = h.size + (i < known ? g.degree({s, i}) : 0);
            at += h.cap;
        }
        arena = std::move(fresh);
        (s == Side::UpperU ? dead_u_ : dead_v_) = 0;
    }
}

uint32_t Orientation::find_edge(uint32_t u, uint32_t v) const {
    if (u >= u_count() || v >= v_count())
        throw InvalidNodeError("orientation node out of range");
    const bool scan_u = head_u_[u].size <= head_v_[v].size;
    const uint32_t want = scan_u ? v : u;
    for (const IncEntry& en : incident(scan_u ? u_node(u) : v_node(v)))
        if (en.other == want) return en.edge();
    throw MissingEdgeError("orientation holds no edge (" + std::to_string(u) + "," +
                           std::to_string(v) + ")");
}

bool Orientation::directed_toward(uint32_t u, uint32_t v, Side s) const {
    const DirectedEdge& e = edges_[find_edge(u, v)];
    return e.toward_u == (s == Side::UpperU);
}

void Orientation::remove_edge(uint32_t u, uint32_t v) {
    uint32_t id = find_edge(u, v);
    if (edges_[id].toward_u) {
        if (capped_ == Side::LowerV) shift_load(indeg_u_[u], indeg_u_[u] - 1);
        --indeg_u_[u];
    } else {
        if (capped_ == Side::UpperU) shift_load(indeg_v_[v], indeg_v_[v] - 1);
        --indeg_v_[v];
    }
    // Swap-pop the edge's entry out of each endpoint block, repointing the
    // relocated entry's edge at its new slot. The freed tail slot stays
    // inside the block's capacity for reuse.
    auto detach = [&](std::vector<IncEntry>& arena, Block& h, uint32_t pos, bool u_list) {
        const IncEntry moved = arena[h.begin + h.size - 1];
        arena[h.begin + pos] = moved;
        --h.size;
        if (moved.edge() != id) {
            DirectedEdge& m = edges_[moved.edge()];
            (u_list ? m.pos_u : m.pos_v) = pos;
        }
    };
    detach(arena_u_, head_u_[u], edges_[id].pos_u, true);
    detach(arena_v_, head_v_[v], edges_[id].pos_v, false);
    const uint32_t last = static_cast<uint32_t>(edges_.size()) - 1;
    if (id != last) {
        // Move the tail record into the freed slot and patch its id in both
        // incident blocks (positions are exact, no scan needed).
        const DirectedEdge m = edges_[last];
        edges_[id] = m;
        IncEntry& eu = arena_u_[head_u_[m.u].begin + m.pos_u];
        IncEntry& ev = arena_v_[head_v_[m.v].begin + m.pos_v];
        eu.eid_dir = id << 1 | (eu.eid_dir & 1u);
        ev.eid_dir = id << 1 | (ev.eid_dir & 1u);
    }
    edges_.pop_back();
}

void Orientation::flip(uint32_t id) {
    DirectedEdge& e = edges_[id];
    if (e.toward_u) {
        if (capped_ == Side::LowerV)
            shift_load(indeg_u_[e.u], indeg_u_[e.u] - 1);
        else
            shift_load(indeg_v_[e.v], indeg_v_[e.v] + 1);
        --indeg_u_[e.u];
        ++indeg_v_[e.v];
    } else {
        if (capped_ == Side::LowerV)
            shift_load(indeg_u_[e.u], indeg_u_[e.u] + 1);
        else
            shift_load(indeg_v_[e.v], indeg_v_[e.v] - 1);
        --indeg_v_[e.v];
        ++indeg_u_[e.u];
    }
    e.toward_u = !e.toward_u;
    arena_u_[head_u_[e.u].begin + e.pos_u].eid_dir ^= 1u;
    arena_v_[head_v_[e.v].begin + e.pos_v].eid_dir ^= 1u;
}

Orientation init_orientation(const BipartiteGraph& g, int32_t level, Side capped) {
    if (level < 0) throw Error("init_orientation: negative level");
    Orientation o(g.u_count(), g.v_count(), level, capped);
    o.reserve_degrees(g);
    for (uint32_t u = 0; u < g.u_count(); ++u)
        for (uint32_t v : g.neighbors(u_node(u)))
            o.add_directed_edge_unchecked(capped == Side::UpperU ? v_node(v) : u_node(u),
                                          capped == Side::UpperU ? u_node(u) : v_node(v));
    // Every edge now points into its capped endpoint; flip the excess of each
    // over-full capped node outward, keeping the lowest-index neighbors in.
    uint32_t cn = o.side_count(capped);
    for (uint32_t i = 0; i < cn; ++i) {
        NodeRef x{capped, i};
        if (o.indegree(x) <= static_cast<uint32_t>(level)) continue;
        std::vector<std::pair<uint32_t, uint32_t>> by_neighbor;  // (neighbor index, edge id)
        for (const Orientation::IncEntry& en : o.incident(x))
            by_neighbor.emplace_back(en.other, en.edge());
        std::sort(by_neighbor.begin(), by_neighbor.end());
        for (std::size_t k = level; k < by_neighbor.size(); ++k) o.flip(by_neighbor[k].second);
    }
    return o;
}

namespace {

// One pass of pairwise trades: every capped node hands an inbound edge of a
// low-load neighbor out in exchange for the edge of a high-load neighbor, as
// long as the loads differ by at least two. Each trade is a length-two path
// reversal. Returns the number performed.
std::size_t trade_pass(Orientation& o) {
    const Side cs = o.capped_side(), us = o.uncapped_side();
    const uint32_t cn = o.side_count(cs);
    struct Cand {
        uint32_t load, idx, eid;
    };
    std::size_t done = 0;
    std::vector<Cand> held, released;
    for (uint32_t i = 0; i < cn; ++i) {
        NodeRef x{cs, i};
        const auto& inc = o.incident(x);
        if (inc.size() <= static_cast<std::size_t>(o.level())) continue;
        held.clear();
        released.clear();
        for (const Orientation::IncEntry& en : inc) {
            uint32_t w = en.other;
            uint32_t load = o.indegree({us, w});
            if (en.toward_me())
                held.push_back({load, w, en.edge()});
            else
                released.push_back({load, w, en.edge()});
        }
        std::sort(held.begin(), held.end(), [](const Cand& a, const Cand& b) {
            return a.load != b.load ? a.load < b.load : a.idx < b.idx;
        });
        std::sort(released.begin(), released.end(), [](const Cand& a, const Cand& b) {
            return a.load != b.load ? a.load > b.load : a.idx < b.idx;
        });
        std::size_t a = 0, b = 0;
        while (a < held.size() && b < released.size() &&
               released[b].load >= held[a].load + 2) {
            o.flip(held[a].eid);      // low-load neighbor takes this edge
            o.flip(released[b].eid);  // high-load neighbor is relieved
            ++done;
            ++a;
            ++b;
        }
    }
    return done;
}

// One descending sweep over uncapped indegree classes: backward search from
// each class, reversing every extractable path from a node at least two
// classes below. Returns the number of reversals.
std::size_t violation_sweep(Orientation& o) {
    const FlatView f(o);
    const Side us = o.uncapped_side();
    const ClassBuckets b = bucket_by_class(o);
    if (b.dmax < 2) return 0;

    std::vector<char> visited(f.n, 0), used(f.n, 0);
    std::vector<uint32_t> parent(f.n, kNoEdge);
    std::vector<uint32_t> queue;
    std::vector<uint32_t> path, path_nodes;
    std::size_t done = 0;

    for (int64_t cls = b.dmax; cls >= 2; --cls) {
        queue.clear();
        for (uint32_t bi = b.off[static_cast<std::size_t>(cls)];
             bi < b.off[static_cast<std::size_t>(cls) + 1]; ++bi) {
            uint32_t i = b.nodes[bi];
            uint32_t id = f.flat({us, i});
            if (visited[id] || used[id]) continue;
            if (o.indegree({us, i}) != static_cast<uint32_t>(cls)) continue;  // drifted
            visited[id] = 1;
            parent[id] = kNoEdge;
            queue.push_back(id);
        }
        for (std::size_t h = 0; h < queue.size(); ++h) {
            uint32_t y = queue[h];
            if (used[y]) continue;
            NodeRef yr = f.ref(y);
            const Side os = opposite(yr.side);
            for (const Orientation::IncEntry& en : o.incident(yr)) {
                if (!en.toward_me()) continue;
                NodeRef xr{os, en.other};
                uint32_t x = f.flat(xr);
                if (visited[x] || used[x]) continue;
                visited[x] = 1;
                parent[x] = en.edge();
                queue.push_back(x);
                if (xr.side != us || o.indegree(xr) + 2 > static_cast<uint32_t>(cls)) continue;
                // Candidate: chase the parent chain back to its class source,
                // skipping if any of it was consumed by an earlier reversal.
                path.clear();
                path_nodes.clear();
                uint32_t cur = x;
                bool clean = true;
                path_nodes.push_back(cur);
                while (parent[cur] != kNoEdge) {
                    path.push_back(parent[cur]);
                    cur = f.flat(o.head(parent[cur]));
                    path_nodes.push_back(cur);
                    if (used[cur]) {
                        clean = false;
                        break;
                    }
                }
                if (!clean) continue;
                assert(o.indegree(f.ref(cur)) >= o.indegree(xr) + 2);
                reverse_path(o, path);
                ++done;
                for (uint32_t pn : path_nodes) used[pn] = 1;
            }
        }
    }
    return done;
}

} // namespace

std::size_t balance_orientation(Orientation& o) {
    const Side cs = o.capped_side();
    const uint32_t cn = o.side_count(cs);
    for (uint32_t i = 0; i < cn; ++i) {
        NodeRef x{cs, i};
        uint32_t want = std::min<uint32_t>(static_cast<uint32_t>(o.incident(x).size()),
                                           static_cast<uint32_t>(o.level()));
        if (o.indegree(x) != want)
            throw InvalidOrientationError("capped-side condition violated at " + node_name(x));
    }
    std::size_t reversals = 0;
    // Cheap local trades first, then full sweeps until one passes clean.
    while (true) {
        std::size_t n = trade_pass(o);
        reversals += n;
        if (n == 0) break;
    }
    while (true) {
        std::size_t n = violation_sweep(o);
        reversals += n;
        if (n == 0) break;
        while (true) {
            std::size_t t = trade_pass(o);
            reversals += t;
            if (t == 0) break;
        }
    }
    return reversals;
}

VerifyResult verify_egalitarian(const Orientation& o) {
    const FlatView f(o);
    // Cached indegrees must match a recount.
    std::vector<uint32_t> recount(f.n, 0);
    for (uint32_t e = 0; e < o.edge_count(); ++e) ++recount[f.flat(o.head(e))];
    for (uint32_t id = 0; id < f.n; ++id) {
        NodeRef x = f.ref(id);
        if (recount[id] != o.indegree(x))
            return {false, "cached indegree of " + node_name(x) + " is stale", std::nullopt};
    }
    // Capped-side degree condition.
    const Side cs = o.capped_side();
    for (uint32_t i = 0; i < o.side_count(cs); ++i) {
        NodeRef x{cs, i};
        uint32_t want = std::min<uint32_t>(static_cast<uint32_t>(o.incident(x).size()),
                                           static_cast<uint32_t>(o.level()));
        if (o.indegree(x) != want)
            return {false,
                    "capped node " + node_name(x) + " holds " + std::to_string(o.indegree(x)) +
                        " edges, expected " + std::to_string(want),
                    std::nullopt};
    }
    // Balance condition: no uncapped node may reach one of a class at least
    // two higher. One descending sweep computes each node's highest
    // reachable class.
    const Side us = o.uncapped_side();
    const uint32_t un = o.side_count(us);
    const ClassBuckets b = bucket_by_class(o);
    std::vector<char> visited(f.n, 0);
    std::vector<uint32_t> highest(f.n, 0), source(f.n, 0);
    std::vector<uint32_t> queue;
    for (int64_t cls = b.dmax; cls >= 1; --cls) {
        queue.clear();
        for (uint32_t bi = b.off[static_cast<std::size_t>(cls)];
             bi < b.off[static_cast<std::size_t>(cls) + 1]; ++bi) {
            uint32_t id = f.flat({us, b.nodes[bi]});
            if (visited[id]) continue;
            visited[id] = 1;
            highest[id] = static_cast<uint32_t>(cls);
            source[id] = id;
            queue.push_back(id);
        }
        for (std::size_t h = 0; h < queue.size(); ++h) {
            uint32_t y = queue[h];
            NodeRef yr = f.ref(y);
            const Side os = opposite(yr.side);
            for (const Orientation::IncEntry& en : o.incident(yr)) {
                if (!en.toward_me()) continue;
                uint32_t x = f.flat({os, en.other});
                if (visited[x]) continue;
                visited[x] = 1;
                highest[x] = static_cast<uint32_t>(cls);
                source[x] = source[y];
                queue.push_back(x);
            }
        }
    }
    for (uint32_t i = 0; i < un; ++i) {
        uint32_t id = f.flat({us, i});
        if (!visited[id]) continue;
        if (highest[id] >= o.indegree({us, i}) + 2) {
            NodeRef lo{us, i}, hi = f.ref(source[id]);
            return {false,
                    node_name(lo) + " (indegree " + std::to_string(o.indegree(lo)) +
                        ") reaches " + node_name(hi) + " (indegree " +
                        std::to_string(o.indegree(hi)) + ")",
                    std::make_pair(lo, hi)};
        }
    }
    return {};
}

void RankTable::refresh_max_rank() {
    max_rank = -1;
    for (int32_t r : u) max_rank = std::max(max_rank, r);
    for (int32_t r : v) max_rank = std::max(max_rank, r);
}

RankTable orientation_to_rank(const Orientation& o) {
    RankTable t;
    t.level = o.level();
    t.capped = o.capped_side();
    t.u.assign(o.u_count(), -1);
    t.v.assign(o.v_count(), -1);

    const FlatView f(o);
    const Side us = o.uncapped_side();
    const ClassBuckets b = bucket_by_class(o);

    SearchScratch& s = tls_scratch();
    s.reset(f.n);
    int32_t* const ru = t.u.data();
    int32_t* const rv = t.v.data();
    auto assign = [&](uint32_t id, int32_t rank) {
        if (id < f.uc)
            ru[id] = rank;
        else
            rv[id - f.uc] = rank;
    };
    const uint32_t ubase = us == Side::UpperU ? 0 : f.uc;
    // Highest class first: nodes of uncapped indegree k+1, plus everything
    // still unvisited that can reach them, have rank k.
    for (int64_t cls = b.dmax; cls >= 1; --cls) {
        s.queue.clear();
        for (uint32_t bi = b.off[static_cast<std::size_t>(cls)];
             bi < b.off[static_cast<std::size_t>(cls) + 1]; ++bi) {
            uint32_t id = ubase + b.nodes[bi];
            if (s.test_set(id)) continue;
            assign(id, static_cast<int32_t>(cls) - 1);
            s.queue.push_back(id);
        }
        for (std::size_t h = 0; h < s.queue.size(); ++h) {
            NodeRef yr = f.ref(s.queue[h]);
            const Side os = opposite(yr.side);
            const uint32_t obase = os == Side::UpperU ? 0 : f.uc;
            for (const Orientation::IncEntry& en : o.incident(yr)) {
                if (!en.toward_me()) continue;
                uint32_t x = obase + en.other;
                if (s.test_set(x)) continue;
                assign(x, static_cast<int32_t>(cls) - 1);
                s.queue.push_back(x);
            }
        }
    }
    t.refresh_max_rank();
    return t;
}

std::optional<ReachWitness> min_reacher(const Orientation& o, NodeRef target) {
    const FlatView f(o);
    const Side us = o.uncapped_side();
    SearchScratch& s = tls_scratch();
    s.reset(f.n);
    uint32_t t = f.flat(target);
    s.test_set(t);
    s.parent[t] = kNoEdge;  // root marker for the path walk
    s.queue.push_back(t);
    const uint32_t floor_load = o.min_uncapped_load();
    bool found = false;
    NodeRef best{};
    uint32_t best_load = 0;
    for (std::size_t h = 0; h < s.queue.size() && !(found && best_load == floor_load); ++h) {
        NodeRef yr = f.ref(s.queue[h]);
        const Side os = opposite(yr.side);
        const uint32_t obase = os == Side::UpperU ? 0 : f.uc;
        const bool nb_uncapped = os == us;
        for (const Orientation::IncEntry& en : o.incident(yr)) {
            if (!en.toward_me()) continue;
            uint32_t x = obase + en.other;
            if (s.test_set(x)) continue;
            s.parent[x] = en.edge();
            s.queue.push_back(x);
            if (!nb_uncapped) continue;
            uint32_t load = o.indegree({us, en.other});
            if (!found || load < best_load || (load == best_load && en.other < best.index)) {
                found = true;
                best = NodeRef{us, en.other};
                best_load = load;
                if (load == floor_load) break;  // attains the global minimum
            }
        }
    }
    if (!found) return std::nullopt;
    ReachWitness w{best, {}};
    for (uint32_t cur = f.flat(best); s.parent[cur] != kNoEdge;) {
        w.path.push_back(s.parent[cur]);
        cur = f.flat(o.head(s.parent[cur]));
    }
    return w;
}

std::optional<ReachWitness> max_reachable(const Orientation& o, NodeRef start,
                                          bool include_self) {
    const FlatView f(o);
    const Side us = o.uncapped_side();
    SearchScratch& sc = tls_scratch();
    sc.reset(f.n);
    uint32_t s = f.flat(start);
    sc.test_set(s);
    sc.parent[s] = kNoEdge;  // root marker for the path walk
    sc.queue.push_back(s);
    const uint32_t ceil_load = o.max_uncapped_load();
    bool found = false;
    NodeRef best{};
    uint32_t best_load = 0;
    if (include_self && start.side == us) {
        found = true;
        best = start;
        best_load = o.indegree(start);
    }
    for (std::size_t h = 0;
         h < sc.queue.size() && !(found && best_load == ceil_load); ++h) {
        NodeRef yr = f.ref(sc.queue[h]);
        const Side os = opposite(yr.side);
        const uint32_t obase = os == Side::UpperU ? 0 : f.uc;
        const bool nb_uncapped = os == us;
        for (const Orientation::IncEntry& en : o.incident(yr)) {
            if (en.toward_me()) continue;
            uint32_t x = obase + en.other;
            if (sc.test_set(x)) continue;
            sc.parent[x] = en.edge();
            sc.queue.push_back(x);
            if (!nb_uncapped) continue;
            uint32_t load = o.indegree({us, en.other});
            if (!found || load > best_load || (load == best_load && en.other < best.index)) {
                found = true;
                best = NodeRef{us, en.other};
                best_load = load;
                if (load == ceil_load) break;  // attains the global maximum
            }
        }
    }
    if (!found) return std::nullopt;
    ReachWitness w{best, {}};
    for (uint32_t cur = f.flat(best); sc.parent[cur] != kNoEdge;) {
        w.path.push_back(sc.parent[cur]);
        cur = f.flat(o.tail(sc.parent[cur]));
    }
    std::reverse(w.path.begin(), w.path.end());
    return w;
}

void reverse_path(Orientation& o, const std::vector<uint32_t>& path) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        if (o.head(path[i]) != o.tail(path[i + 1]))
            throw InvalidPathError("edges do not chain into a directed path");
    for (uint32_t e : path) o.flip(e);
}

} // namespace bdi
