#include "bdi/maintenance.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "bdi/dense.hpp"
#include "bdi/errors.hpp"

namespace bdi {

namespace {

int32_t kth_highest(std::vector<int32_t>& vals, std::size_t k) {
    auto nth = vals.begin() + static_cast<std::ptrdiff_t>(k);
    std::nth_element(vals.begin(), nth, vals.end(), std::greater<int32_t>());
    return *nth;
}

std::string edge_name(uint32_t u, uint32_t v) {
    return "(u" + std::to_string(u) + ", v" + std::to_string(v) + ")";
}

} // namespace

int32_t capped_side_rank(const BipartiteGraph& g, const RankTable& t, NodeRef n) {
    const uint32_t deg = g.degree(n);
    if (static_cast<int32_t>(deg) <= t.level) return -1;
    std::vector<int32_t> vals;
    vals.reserve(deg);
    const Side other = opposite(n.side);
    for (uint32_t nb : g.neighbors(n)) vals.push_back(t.rank(NodeRef{other, nb}));
    return kth_highest(vals, static_cast<std::size_t>(t.level));
}

int32_t insertion_boundary(const BipartiteGraph& g, const RankTable& t, NodeRef capped_end,
                           NodeRef uncapped_end) {
    const int32_t r_other = t.rank(uncapped_end);
    int32_t r_n = -1;
    if (static_cast<int32_t>(g.degree(capped_end)) >= t.level) {
        std::vector<int32_t> vals;
        vals.reserve(g.degree(capped_end) + 1);
        const Side other = opposite(capped_end.side);
        for (uint32_t nb : g.neighbors(capped_end)) vals.push_back(t.rank(NodeRef{other, nb}));
        vals.push_back(r_other);
        r_n = kth_highest(vals, static_cast<std::size_t>(t.level));
    }
    return std::min(r_n, r_other);
}

int32_t deletion_boundary(const RankTable& t, NodeRef a, NodeRef b) {
    return std::min(t.rank(a), t.rank(b));
}

Maintainer::Maintainer(BipartiteGraph& g, MaintenanceMode mode) : g_(&g), mode_(mode) {
    BuildResult b = build_index(g);
    index_ = std::move(b.index);
    u_tables_ = std::move(b.u_tables);
    v_tables_ = std::move(b.v_tables);
    if (mode_ == MaintenanceMode::Time) {
        eset_ = std::move(b.orientations);
        append_probe_level();
    }
}

void Maintainer::ensure_nodes(uint32_t u, uint32_t v) {
    const uint32_t uc = std::max(g_->u_count(), u + 1);
    const uint32_t vc = std::max(g_->v_count(), v + 1);
    if (uc == g_->u_count() && vc == g_->v_count()) return;
    g_->ensure_counts(uc, vc);
    for (auto* tabs : {&u_tables_, &v_tables_}) {
        for (RankTable& t : *tabs) {
            t.u.resize(uc, -1);
            t.v.resize(vc, -1);
        }
    }
    if (mode_ == MaintenanceMode::Time) {
        for (auto* levels : {&eset_.u_levels, &eset_.v_levels})
            for (Orientation& o : *levels) o.ensure_counts(uc, vc);
    }
}

void Maintainer::rebuild_row(Side family, int32_t level) {
    if (level > index_.p) return;  // the probe level has no published row
    index_.side_rows(family)[static_cast<size_t>(level)] =
        make_index_row(tables(family)[static_cast<size_t>(level)]);
}

void Maintainer::insert_edge(uint32_t u, uint32_t v) {
    ensure_nodes(u, v);
    if (g_->has_edge(u, v)) throw DuplicateEdgeError("edge already present " + edge_name(u, v));
    const NodeRef un = u_node(u), vn = v_node(v);
    const int32_t levels = static_cast<int32_t>(u_tables_.size());
    if (mode_ == MaintenanceMode::Space) {
        std::vector<int32_t> bu(static_cast<size_t>(levels));
        std::vector<int32_t> bv(static_cast<size_t>(levels));
        for (int32_t a = 0; a < levels; ++a)
            bu[static_cast<size_t>(a)] = insertion_boundary(*g_, u_tables_[static_cast<size_t>(a)], un, vn);
        for (int32_t b = 0; b < levels; ++b)
            bv[static_cast<size_t>(b)] = insertion_boundary(*g_, v_tables_[static_cast<size_t>(b)], vn, un);
        g_->insert_edge(u, v);
        for (int32_t a = 0; a < levels; ++a)
            space_insert_row(Side::UpperU, a, bu[static_cast<size_t>(a)], un);
        for (int32_t b = 0; b < levels; ++b)
            space_insert_row(Side::LowerV, b, bv[static_cast<size_t>(b)], vn);
    } else {
        for (int32_t a = 0; a < levels; ++a) time_insert_row(Side::UpperU, a, un, vn);
        for (int32_t b = 0; b < levels; ++b) time_insert_row(Side::LowerV, b, vn, un);
        g_->insert_edge(u, v);
    }
    promote_levels(u, v);
}

void Maintainer::erase_edge(uint32_t u, uint32_t v) {
    if (u >= g_->u_count() || v >= g_->v_count() || !g_->has_edge(u, v))
        throw MissingEdgeError("no such edge " + edge_name(u, v));
    const NodeRef un = u_node(u), vn = v_node(v);
    const int32_t levels = static_cast<int32_t>(u_tables_.size());
    if (mode_ == MaintenanceMode::Space) {
        std::vector<int32_t> bu(static_cast<size_t>(levels));
        std::vector<int32_t> bv(static_cast<size_t>(levels));
        for (int32_t a = 0; a < levels; ++a)
            bu[static_cast<size_t>(a)] = deletion_boundary(u_tables_[static_cast<size_t>(a)], un, vn);
        for (int32_t b = 0; b < levels; ++b)
            bv[static_cast<size_t>(b)] = deletion_boundary(v_tables_[static_cast<size_t>(b)], un, vn);
        g_->delete_edge(u, v);
        for (int32_t a = 0; a < levels; ++a)
            space_erase_row(Side::UpperU, a, bu[static_cast<size_t>(a)], un);
        for (int32_t b = 0; b < levels; ++b)
            space_erase_row(Side::LowerV, b, bv[static_cast<size_t>(b)], vn);
    } else {
        for (int32_t a = 0; a < levels; ++a) time_erase_row(Side::UpperU, a, un, vn, u, v);
        for (int32_t b = 0; b < levels; ++b) time_erase_row(Side::LowerV, b, vn, un, u, v);
        g_->delete_edge(u, v);
    }
    shrink_levels();
}

void Maintainer::space_insert_row(Side family, int32_t level, int32_t boundary,
                                  NodeRef capped_end) {
    RankTable& t = tables(family)[static_cast<size_t>(level)];
    const Side uncapped = opposite(family);
    const LevelPair caps = family == Side::UpperU ? LevelPair{level, boundary + 1}
                                                  : LevelPair{boundary + 1, level};
    std::vector<NodeRef> promoted;
    for (NodeRef x : compute_dense_subgraph(*g_, caps)) {
        if (x.side != uncapped) continue;
        int32_t& r = t.side_ranks(uncapped)[x.index];
        if (r == boundary) {
            r = boundary + 1;
            promoted.push_back(x);
        }
    }
    bool dirty = !promoted.empty();
    refresh_capped_ranks(family, level, capped_end, promoted, &dirty);
    if (dirty) {
        t.refresh_max_rank();
        rebuild_row(family, level);
    }
}

void Maintainer::space_erase_row(Side family, int32_t level, int32_t boundary,
                                 NodeRef capped_end) {
    RankTable& t = tables(family)[static_cast<size_t>(level)];
    const Side uncapped = opposite(family);
    std::vector<NodeRef> demoted;
    if (boundary >= 0) {
        const LevelPair caps = family == Side::UpperU ? LevelPair{level, boundary}
                                                      : LevelPair{boundary, level};
        std::vector<uint8_t> in_dense(g_->side_count(uncapped), 0);
        for (NodeRef x : compute_dense_subgraph(*g_, caps))
            if (x.side == uncapped) in_dense[x.index] = 1;
        std::vector<int32_t>& ranks = t.side_ranks(uncapped);
        for (uint32_t i = 0; i < ranks.size(); ++i) {
            if (ranks[i] == boundary && !in_dense[i]) {
                ranks[i] = boundary - 1;
                demoted.push_back(NodeRef{uncapped, i});
            }
        }
    }
    bool dirty = !demoted.empty();
    refresh_capped_ranks(family, level, capped_end, demoted, &dirty);
    if (dirty) {
        t.refresh_max_rank();
        rebuild_row(family, level);
    }
}

void Maintainer::refresh_capped_ranks(Side family, int32_t level, NodeRef capped_end,
                                      const std::vector<NodeRef>& moved_uncapped,
                                      bool* row_dirty) {
    RankTable& t = tables(family)[static_cast<size_t>(level)];
    std::vector<uint32_t> cand;
    std::vector<uint8_t> seen(g_->side_count(family), 0);
    auto add = [&](uint32_t i) {
        if (!seen[i]) {
            seen[i] = 1;
            cand.push_back(i);
        }
    };
    add(capped_end.index);
    for (NodeRef x : moved_uncapped)
        for (uint32_t nb : g_->neighbors(x)) add(nb);
    std::vector<int32_t>& ranks = t.side_ranks(family);
    for (uint32_t i : cand) {
        const int32_t r = capped_side_rank(*g_, t, NodeRef{family, i});
        if (r != ranks[i]) {
            ranks[i] = r;
            *row_dirty = true;
        }
    }
}

void Maintainer::time_insert_row(Side family, int32_t level, NodeRef capped_end,
                                 NodeRef uncapped_end) {
    Orientation& o = eset_.side_levels(family)[static_cast<size_t>(level)];
    o.add_directed_edge(uncapped_end, capped_end);
    // Pre-insertion degree below the cap: the new unit parks at the capped
    // endpoint and no rank moves.
    if (static_cast<int32_t>(g_->degree(capped_end)) < level) return;
    auto w = min_reacher(o, capped_end);
    if (!w) throw IntegrityError("over-full node has no uncapped reacher");
    reverse_path(o, w->path);
    RankTable nt = orientation_to_rank(o);
    RankTable& t = tables(family)[static_cast<size_t>(level)];
    if (nt.u != t.u || nt.v != t.v) {
        t = std::move(nt);
        rebuild_row(family, level);
    }
}

void Maintainer::time_erase_row(Side family, int32_t level, NodeRef capped_end,
                                NodeRef uncapped_end, uint32_t u, uint32_t v) {
    Orientation& o = eset_.side_levels(family)[static_cast<size_t>(level)];
    // Pre-deletion degree at or below the cap: every incident edge points at
    // the capped endpoint, so the doomed edge leaves without any rank moving.
    if (static_cast<int32_t>(g_->degree(capped_end)) <= level) {
        o.remove_edge(u, v);
        return;
    }
    const uint32_t id = o.find_edge(u, v);
    if (o.head(id) == capped_end) {
        auto w = max_reachable(o, capped_end, false);
        if (!w) throw IntegrityError("capped node with spare degree has no outgoing path");
        reverse_path(o, w->path);
    } else {
        auto w = max_reachable(o, uncapped_end, true);
        if (!w) throw IntegrityError("unreachable uncapped endpoint");
        if (w->node != uncapped_end) reverse_path(o, w->path);
    }
    o.remove_edge(u, v);
    RankTable nt = orientation_to_rank(o);
    RankTable& t = tables(family)[static_cast<size_t>(level)];
    if (nt.u != t.u || nt.v != t.v) {
        t = std::move(nt);
        rebuild_row(family, level);
    }
}

void Maintainer::append_probe_level() {
    const int32_t level = static_cast<int32_t>(u_tables_.size());
    for (Side family : {Side::UpperU, Side::LowerV}) {
        Orientation o = init_orientation(*g_, level, family);
        balance_orientation(o);
        tables(family).push_back(orientation_to_rank(o));
        eset_.side_levels(family).push_back(std::move(o));
    }
}

void Maintainer::promote_levels(uint32_t u, uint32_t v) {
    if (mode_ == MaintenanceMode::Time) {
        // The probe row one level above the published top is maintained like
        // every published row, so the top grows exactly when the probe's U
        // row gains its first node -- an O(1) peak-rank check instead of a
        // from-scratch build per update.
        while (u_tables_.back().max_rank >= static_cast<int32_t>(u_tables_.size()) - 1) {
            const size_t top = u_tables_.size() - 1;
            index_.u_rows.push_back(make_index_row(u_tables_[top]));
            index_.v_rows.push_back(make_index_row(v_tables_[top]));
            ++index_.p;
            append_probe_level();
        }
        return;
    }
    // Space mode probes a fresh level only when the necessary condition
    // holds: a new top level could only have been created by the edge just
    // inserted, so its node set would contain both endpoints, and that set
    // also qualifies at the looser cap pairs (p, p+1) and (p+1, p), which
    // the current top rows answer in O(1).
    while (true) {
        if (index_.p >= 0) {
            const RankTable& tu = u_tables_[static_cast<size_t>(index_.p)];
            const RankTable& tv = v_tables_[static_cast<size_t>(index_.p)];
            const int32_t need = index_.p;
            if (tu.u[u] < need || tu.v[v] < need || tv.u[u] < need || tv.v[v] < need) return;
        }
        const int32_t level = index_.p + 1;
        Orientation ou = init_orientation(*g_, level, Side::UpperU);
        balance_orientation(ou);
        RankTable nu = orientation_to_rank(ou);
        IndexRow ru = make_index_row(nu);
        if (ru.nodes.empty()) return;
        Orientation ov = init_orientation(*g_, level, Side::LowerV);
        balance_orientation(ov);
        RankTable nv = orientation_to_rank(ov);
        index_.u_rows.push_back(std::move(ru));
        index_.v_rows.push_back(make_index_row(nv));
        u_tables_.push_back(std::move(nu));
        v_tables_.push_back(std::move(nv));
        ++index_.p;
    }
}

void Maintainer::shrink_levels() {
    while (index_.p >= 0 && index_.u_rows[static_cast<size_t>(index_.p)].nodes.empty()) {
        index_.u_rows.pop_back();
        index_.v_rows.pop_back();
        u_tables_.pop_back();
        v_tables_.pop_back();
        if (mode_ == MaintenanceMode::Time) {
            eset_.u_levels.pop_back();
            eset_.v_levels.pop_back();
        }
        --index_.p;
    }
}

} // namespace bdi
