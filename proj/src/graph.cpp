#include "bdi/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace bdi {

uint32_t BipartiteGraph::add_node(Side s) {
    auto& adj = s == Side::UpperU ? adj_u_ : adj_v_;
    adj.emplace_back();
    return static_cast<uint32_t>(adj.size() - 1);
}

void BipartiteGraph::ensure_counts(uint32_t u_count, uint32_t v_count) {
    if (u_count > adj_u_.size()) adj_u_.resize(u_count);
    if (v_count > adj_v_.size()) adj_v_.resize(v_count);
}

void BipartiteGraph::check_u(uint32_t u) const {
    if (u >= adj_u_.size())
        throw InvalidNodeError("U index " + std::to_string(u) + " out of range");
}

void BipartiteGraph::check_v(uint32_t v) const {
    if (v >= adj_v_.size())
        throw InvalidNodeError("V index " + std::to_string(v) + " out of range");
}

void BipartiteGraph::insert_edge(uint32_t u, uint32_t v) {
    check_u(u);
    check_v(v);
    if (!edges_.insert(key(u, v)).second)
        throw DuplicateEdgeError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                 ") already present");
    adj_u_[u].push_back(v);
    adj_v_[v].push_back(u);
}

void BipartiteGraph::delete_edge(uint32_t u, uint32_t v) {
    check_u(u);
    check_v(v);
    if (edges_.erase(key(u, v)) == 0)
        throw MissingEdgeError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                               ") not present");
    auto drop = [](std::vector<uint32_t>& list, uint32_t x) {
        auto it = std::find(list.begin(), list.end(), x);
        *it = list.back();
        list.pop_back();
    };
    drop(adj_u_[u], v);
    drop(adj_v_[v], u);
}

bool BipartiteGraph::has_edge(uint32_t u, uint32_t v) const {
    return edges_.count(key(u, v)) != 0;
}

uint32_t BipartiteGraph::degree(NodeRef x) const {
    return static_cast<uint32_t>(neighbors(x).size());
}

const std::vector<uint32_t>& BipartiteGraph::neighbors(NodeRef x) const {
    if (x.side == Side::UpperU) {
        check_u(x.index);
        return adj_u_[x.index];
    }
    check_v(x.index);
    return adj_v_[x.index];
}

uint32_t IdMaps::intern(Side s, uint64_t external_id) {
    auto& map = s == Side::UpperU ? u_index : v_index;
    auto& rev = s == Side::UpperU ? u_external : v_external;
    auto [it, fresh] = map.try_emplace(external_id, static_cast<uint32_t>(rev.size()));
    if (fresh) rev.push_back(external_id);
    return it->second;
}

std::optional<uint32_t> IdMaps::find(Side s, uint64_t external_id) const {
    const auto& map = s == Side::UpperU ? u_index : v_index;
    auto it = map.find(external_id);
    if (it == map.end()) return std::nullopt;
    return it->second;
}

LoadResult load_edge_list(std::istream& in, const IdMaps* seed) {
    LoadResult out;
    if (seed) out.ids = *seed;
    std::vector<std::pair<uint32_t, uint32_t>> pending;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '%' || line[start] == '#') continue;
        std::istringstream fields(line.substr(start));
        uint64_t ext[2];
        for (int i = 0; i < 2; ++i) {
            std::string tok;
            if (!(fields >> tok))
                throw ParseError(line_no, "expected two node ids");
            try {
                std::size_t used = 0;
                long long value = std::stoll(tok, &used);
                if (used != tok.size() || value <= 0)
                    throw std::invalid_argument(tok);
                ext[i] = static_cast<uint64_t>(value);
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad node id '" + tok + "'");
            }
        }
        uint32_t u = out.ids.intern(Side::UpperU, ext[0]);
        uint32_t v = out.ids.intern(Side::LowerV, ext[1]);
        pending.emplace_back(u, v);
    }
    out.graph.ensure_counts(static_cast<uint32_t>(out.ids.u_external.size()),
                            static_cast<uint32_t>(out.ids.v_external.size()));
    for (auto [u, v] : pending) {
        if (out.graph.has_edge(u, v)) {
            ++out.duplicate_count;
            continue;
        }
        out.graph.insert_edge(u, v);
    }
    return out;
}

LoadResult load_edge_list_file(const std::string& path, const IdMaps* seed) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return load_edge_list(in, seed);
}

BipartiteGraph graph_from_edges(uint32_t u_count, uint32_t v_count,
                                const std::vector<std::pair<uint32_t, uint32_t>>& edges) {
    BipartiteGraph g(u_count, v_count);
    for (auto [u, v] : edges) g.insert_edge(u, v);
    return g;
}

} // namespace bdi
