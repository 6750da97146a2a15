#include "bdi/index.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "bdi/errors.hpp"

namespace bdi {

namespace {

constexpr uint32_t kSideBit = 0x80000000u;

void put_u32(std::vector<uint8_t>& out, uint32_t x) {
    out.push_back(static_cast<uint8_t>(x));
    out.push_back(static_cast<uint8_t>(x >> 8));
    out.push_back(static_cast<uint8_t>(x >> 16));
    out.push_back(static_cast<uint8_t>(x >> 24));
}

void put_i32(std::vector<uint8_t>& out, int32_t x) {
    put_u32(out, static_cast<uint32_t>(x));
}

void put_u64(std::vector<uint8_t>& out, uint64_t x) {
    put_u32(out, static_cast<uint32_t>(x));
    put_u32(out, static_cast<uint32_t>(x >> 32));
}

uint32_t pack_node(NodeRef n) {
    if (n.index & kSideBit) throw IntegrityError("node index does not fit in 31 bits");
    return (n.side == Side::LowerV ? kSideBit : 0u) | n.index;
}

void put_row(std::vector<uint8_t>& out, const IndexRow& row) {
    put_i32(out, row.level);
    put_u32(out, static_cast<uint32_t>(row.nodes.size()));
    for (NodeRef n : row.nodes) put_u32(out, pack_node(n));
    for (int32_t r : row.ranks) put_i32(out, r);
    put_i32(out, row.cursor_low);
    put_i32(out, row.max_rank());
    for (uint32_t c : row.cursors) put_u32(out, c);
}

struct Reader {
    const std::vector<uint8_t>& bytes;
    size_t pos = 0;

    uint32_t u32(const char* what) {
        if (pos + 4 > bytes.size())
            throw FormatError(pos, std::string("truncated while reading ") + what);
        uint32_t x = static_cast<uint32_t>(bytes[pos]) |
                     static_cast<uint32_t>(bytes[pos + 1]) << 8 |
                     static_cast<uint32_t>(bytes[pos + 2]) << 16 |
                     static_cast<uint32_t>(bytes[pos + 3]) << 24;
        pos += 4;
        return x;
    }

    int32_t i32(const char* what) { return static_cast<int32_t>(u32(what)); }

    uint64_t u64(const char* what) {
        uint64_t lo = u32(what);
        uint64_t hi = u32(what);
        return lo | hi << 32;
    }
};

IndexRow read_row(Reader& r, Side family, int32_t expected_level) {
    IndexRow row;
    size_t off = r.pos;
    row.level = r.i32("row level");
    if (row.level != expected_level) throw FormatError(off, "row level out of order");
    uint32_t n = r.u32("row size");
    row.nodes.reserve(n);
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t packed = r.u32("node entry");
        row.nodes.push_back(NodeRef{(packed & kSideBit) ? Side::LowerV : Side::UpperU,
                                    packed & ~kSideBit});
    }
    row.ranks.reserve(n);
    for (uint32_t i = 0; i < n; ++i) row.ranks.push_back(r.i32("rank entry"));
    off = r.pos;
    row.cursor_low = r.i32("cursor base");
    int32_t expected_low = family == Side::UpperU ? row.level : row.level + 1;
    if (row.cursor_low != expected_low) throw FormatError(off, "cursor base does not match level");
    off = r.pos;
    int32_t hi = r.i32("cursor top");
    if (hi < row.cursor_low - 1) throw FormatError(off, "cursor top below cursor base");
    row.cursors.reserve(static_cast<size_t>(hi - row.cursor_low + 1));
    uint32_t prev = 0;
    for (int32_t b = row.cursor_low; b <= hi; ++b) {
        off = r.pos;
        uint32_t c = r.u32("cursor");
        if (c > n || c < prev) throw FormatError(off, "cursor out of range");
        row.cursors.push_back(c);
        prev = c;
    }
    return row;
}

} // namespace

std::vector<NodeRef> query(const BDIndex& idx, LevelPair q, QueryStats* stats) {
    if (q.alpha < 0 || q.beta < 0) throw Error("query levels must be non-negative");
    const bool u_side = q.alpha <= q.beta;
    const auto& rows = u_side ? idx.u_rows : idx.v_rows;
    const int32_t level = u_side ? q.alpha : q.beta;
    const int32_t other = u_side ? q.beta : q.alpha;
    if (stats) stats->entries_touched += 1;
    if (level >= static_cast<int32_t>(rows.size())) return {};
    const IndexRow& row = rows[static_cast<size_t>(level)];
    if (stats) stats->entries_touched += 1;
    if (other > row.max_rank()) return {};
    uint32_t pos = row.cursors[static_cast<size_t>(other - row.cursor_low)];
    std::vector<NodeRef> out(row.nodes.begin() + pos, row.nodes.end());
    if (stats) stats->entries_touched += out.size();
    return out;
}

IndexRow make_index_row(const RankTable& t) {
    IndexRow row;
    row.level = t.level;
    row.cursor_low = t.capped == Side::UpperU ? t.level : t.level + 1;

    int32_t top = -1;
    for (int32_t r : t.u) top = std::max(top, r);
    for (int32_t r : t.v) top = std::max(top, r);
    if (top < row.cursor_low) return row;

    const size_t buckets = static_cast<size_t>(top - row.cursor_low + 1);
    std::vector<uint32_t> cnt(buckets, 0);
    for (int32_t r : t.u)
        if (r >= row.cursor_low) ++cnt[static_cast<size_t>(r - row.cursor_low)];
    for (int32_t r : t.v)
        if (r >= row.cursor_low) ++cnt[static_cast<size_t>(r - row.cursor_low)];

    row.cursors.resize(buckets);
    uint32_t total = 0;
    for (size_t b = 0; b < buckets; ++b) {
        row.cursors[b] = total;
        total += cnt[b];
    }
    row.nodes.resize(total);
    row.ranks.resize(total);

    std::vector<uint32_t> fill(row.cursors);
    auto place = [&](Side s, const std::vector<int32_t>& ranks) {
        for (uint32_t i = 0; i < ranks.size(); ++i) {
            int32_t r = ranks[i];
            if (r < row.cursor_low) continue;
            uint32_t slot = fill[static_cast<size_t>(r - row.cursor_low)]++;
            row.nodes[slot] = NodeRef{s, i};
            row.ranks[slot] = r;
        }
    };
    place(Side::UpperU, t.u);
    place(Side::LowerV, t.v);
    return row;
}

BuildResult build_index(const BipartiteGraph& g) {
    BuildResult out;
    out.index.p = compute_p(g);
    for (Side family : {Side::UpperU, Side::LowerV}) {
        for (int32_t level = 0; level <= out.index.p; ++level) {
            Orientation o = init_orientation(g, level, family);
            balance_orientation(o);
            RankTable t = orientation_to_rank(o);
            out.index.side_rows(family).push_back(make_index_row(t));
            out.side_tables(family).push_back(std::move(t));
            out.orientations.side_levels(family).push_back(std::move(o));
        }
    }
    return out;
}

IndexStats index_stats(const BDIndex& idx) {
    IndexStats s;
    for (const IndexRow& row : idx.u_rows) {
        s.u_entries += row.nodes.size();
        s.u_cursors += row.cursors.size();
    }
    for (const IndexRow& row : idx.v_rows) {
        s.v_entries += row.nodes.size();
        s.v_cursors += row.cursors.size();
    }
    return s;
}

std::vector<uint8_t> serialize(const BDIndex& idx, const IdMaps* ids) {
    std::vector<uint8_t> out;
    out.push_back('B');
    out.push_back('D');
    out.push_back('I');
    out.push_back('X');
    put_u32(out, 1);
    put_i32(out, idx.p);
    for (Side family : {Side::UpperU, Side::LowerV}) {
        const auto& rows = idx.side_rows(family);
        put_u32(out, static_cast<uint32_t>(rows.size()));
        for (const IndexRow& row : rows) put_row(out, row);
    }
    if (ids) {
        out.push_back('I');
        out.push_back('D');
        out.push_back('M');
        out.push_back('P');
        put_u32(out, static_cast<uint32_t>(ids->u_external.size()));
        put_u32(out, static_cast<uint32_t>(ids->v_external.size()));
        for (uint64_t x : ids->u_external) put_u64(out, x);
        for (uint64_t x : ids->v_external) put_u64(out, x);
    }
    return out;
}

BDIndex deserialize(const std::vector<uint8_t>& bytes, IdMaps* ids) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "BDIX", 4) != 0)
        throw FormatError(0, "bad magic, expected BDIX");
    Reader r{bytes, 4};
    size_t off = r.pos;
    uint32_t version = r.u32("version");
    if (version != 1) throw FormatError(off, "unsupported version " + std::to_string(version));
    off = r.pos;
    BDIndex idx;
    idx.p = r.i32("p");
    if (idx.p < -1) throw FormatError(off, "invalid p");
    for (Side family : {Side::UpperU, Side::LowerV}) {
        off = r.pos;
        uint32_t rows = r.u32("row count");
        if (rows != static_cast<uint32_t>(idx.p + 1))
            throw FormatError(off, "row count does not match p");
        auto& dst = idx.side_rows(family);
        dst.reserve(rows);
        for (uint32_t i = 0; i < rows; ++i)
            dst.push_back(read_row(r, family, static_cast<int32_t>(i)));
    }
    if (r.pos == bytes.size()) {
        if (ids) *ids = IdMaps{};
        return idx;
    }
    off = r.pos;
    if (bytes.size() - r.pos < 4 || std::memcmp(bytes.data() + r.pos, "IDMP", 4) != 0)
        throw FormatError(off, "unexpected trailing bytes");
    r.pos += 4;
    uint32_t uc = r.u32("id map U size");
    uint32_t vc = r.u32("id map V size");
    IdMaps maps;
    maps.u_external.reserve(uc);
    maps.v_external.reserve(vc);
    for (uint32_t i = 0; i < uc; ++i) maps.u_external.push_back(r.u64("U id"));
    for (uint32_t i = 0; i < vc; ++i) maps.v_external.push_back(r.u64("V id"));
    if (r.pos != bytes.size()) throw FormatError(r.pos, "trailing bytes after id map");
    if (ids) {
        for (uint32_t i = 0; i < uc; ++i) maps.u_index.emplace(maps.u_external[i], i);
        for (uint32_t i = 0; i < vc; ++i) maps.v_index.emplace(maps.v_external[i], i);
        *ids = std::move(maps);
    }
    return idx;
}

} // namespace bdi
