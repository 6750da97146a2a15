#include "bdi/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bdi/dense.hpp"
#include "bdi/errors.hpp"
#include "bdi/gen.hpp"
#include "bdi/index.hpp"
#include "bdi/maintenance.hpp"

namespace bdi {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

int64_t micros_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::microseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

std::vector<uint8_t> read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>());
}

void write_binary(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + path);
}

/// Appends benchmark rows to a CSV file; inactive when no path was given.
class CsvSink {
public:
    explicit CsvSink(const std::string& path) {
        if (path.empty()) return;
        out_.open(path, std::ios::trunc);
        if (!out_) throw Error("cannot write " + path);
        out_ << csv_header() << '\n';
    }
    void add(const CsvRow& row) {
        if (out_.is_open()) out_ << csv_line(row) << '\n';
    }

private:
    std::ofstream out_;
};

LoadResult load_graph(const std::string& path, bool lenient, const IdMaps* seed = nullptr) {
    LoadResult loaded = load_edge_list_file(path, seed);
    if (!lenient && loaded.duplicate_count > 0)
        throw Error(path + ": " + std::to_string(loaded.duplicate_count) +
                    " duplicate edge lines (pass --lenient to collapse them)");
    return loaded;
}

bool same_ids(const IdMaps& a, const IdMaps& b) {
    return a.u_external == b.u_external && a.v_external == b.v_external;
}

bool rows_equal(const IndexRow& a, const IndexRow& b) {
    return a.level == b.level && a.nodes == b.nodes && a.ranks == b.ranks &&
           a.cursor_low == b.cursor_low && a.cursors == b.cursors;
}

bool index_equal(const BDIndex& a, const BDIndex& b) {
    if (a.p != b.p || a.u_rows.size() != b.u_rows.size() || a.v_rows.size() != b.v_rows.size())
        return false;
    for (size_t i = 0; i < a.u_rows.size(); ++i)
        if (!rows_equal(a.u_rows[i], b.u_rows[i])) return false;
    for (size_t i = 0; i < a.v_rows.size(); ++i)
        if (!rows_equal(a.v_rows[i], b.v_rows[i])) return false;
    return true;
}

void write_edge_list(const std::string& path, const BipartiteGraph& g, const IdMaps& ids) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    for (uint32_t u = 0; u < g.u_count(); ++u) {
        for (uint32_t v : g.neighbors(u_node(u))) {
            const uint64_t ue = u < ids.u_external.size() ? ids.u_external[u] : u + 1;
            const uint64_t ve = v < ids.v_external.size() ? ids.v_external[v] : v + 1;
            out << ue << ' ' << ve << '\n';
        }
    }
    if (!out) throw Error("short write to " + path);
}

struct BuildOpts {
    std::string graph, index, csv;
    bool lenient = false;
};

int cmd_build(const BuildOpts& o) {
    CsvSink csv(o.csv);
    LoadResult loaded = load_graph(o.graph, o.lenient);
    const auto t0 = std::chrono::steady_clock::now();
    BuildResult built = build_index(loaded.graph);
    const int64_t elapsed = micros_since(t0);
    write_binary(o.index, serialize(built.index, &loaded.ids));
    const IndexStats s = index_stats(built.index);
    csv.add({"build", -1, -1, s.entry_count(), elapsed, 0});
    std::cout << "p=" << built.index.p << " entries=" << s.entry_count()
              << " cursors=" << s.cursor_count() << " model_bytes=" << s.model_bytes()
              << " elapsed_micros=" << elapsed << '\n';
    return kExitOk;
}

struct QueryOpts {
    std::string index, queries, csv, graph;
    int32_t alpha = -1, beta = -1;
    bool online = false;
    bool lenient = false;
};

int cmd_query(const QueryOpts& o) {
    CsvSink csv(o.csv);
    std::vector<LevelPair> points;
    if (!o.queries.empty()) {
        std::ifstream in(o.queries);
        if (!in) throw Error("cannot open " + o.queries);
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::istringstream ls(line);
            std::string first;
            if (!(ls >> first) || first[0] == '%' || first[0] == '#') continue;
            int64_t a = -1, b = -1;
            try {
                a = std::stoll(first);
            } catch (const std::exception&) {
                throw ParseError(lineno, "expected two levels per line");
            }
            if (!(ls >> b)) throw ParseError(lineno, "expected two levels per line");
            if (a < 0 || b < 0) throw ParseError(lineno, "levels must be non-negative");
            points.push_back({static_cast<int32_t>(a), static_cast<int32_t>(b)});
        }
    } else {
        if (o.alpha < 0 || o.beta < 0)
            throw Error("pass --alpha and --beta, or a --queries file");
        points.push_back({o.alpha, o.beta});
    }

    if (o.online) {
        LoadResult loaded = load_graph(o.graph, o.lenient);
        for (LevelPair q : points) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<NodeRef> nodes = compute_dense_subgraph(loaded.graph, q);
            const int64_t elapsed = micros_since(t0);
            csv.add({"online", q.alpha, q.beta, nodes.size(), elapsed, 0});
            std::cout << format_nodes(nodes, &loaded.ids) << '\n';
        }
        return kExitOk;
    }

    IdMaps ids;
    const BDIndex idx = deserialize(read_binary(o.index), &ids);
    for (LevelPair q : points) {
        QueryStats stats;
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<NodeRef> nodes = query(idx, q, &stats);
        const int64_t elapsed = micros_since(t0);
        csv.add({"query", q.alpha, q.beta, nodes.size(), elapsed, stats.entries_touched});
        std::cout << format_nodes(nodes, &ids) << '\n';
    }
    return kExitOk;
}

struct UpdateOpts {
    std::string index, graph, stream, mode = "time", csv, out_graph;
    bool verify_each = false;
    bool lenient = false;
};

int cmd_update(const UpdateOpts& o) {
    CsvSink csv(o.csv);
    IdMaps index_ids;
    const BDIndex stored = deserialize(read_binary(o.index), &index_ids);
    // Seeding the load with the index's id map keeps internal indices aligned
    // even if the edge list's line order differs from the original build; the
    // maps can then only diverge when the file holds ids the index has never
    // seen.
    const bool seeded = !index_ids.u_external.empty();
    LoadResult loaded = load_graph(o.graph, o.lenient, seeded ? &index_ids : nullptr);
    if (seeded && !same_ids(index_ids, loaded.ids))
        throw Error("graph file contains ids the index has never seen");

    std::ifstream in(o.stream);
    if (!in) throw Error("cannot open " + o.stream);
    const std::vector<UpdateOp> ops = parse_update_stream(in);

    const MaintenanceMode mode =
        o.mode == "space" ? MaintenanceMode::Space : MaintenanceMode::Time;
    Maintainer m(loaded.graph, mode);
    if (!index_equal(m.index(), stored))
        throw Error("stored index does not match the graph file; rebuild it first");

    size_t applied = 0, skipped = 0;
    for (const UpdateOp& op : ops) {
        const std::string op_text = std::string(op.insert ? "+ " : "- ") +
                                    std::to_string(op.u) + ' ' + std::to_string(op.v);
        uint32_t u, v;
        if (op.insert) {
            // Inserts may introduce nodes, so unseen ids get fresh indices.
            u = loaded.ids.intern(Side::UpperU, op.u);
            v = loaded.ids.intern(Side::LowerV, op.v);
        } else {
            // Deletes must not: an unseen id is a missing edge, and interning
            // it would leave a phantom entry in the index's id map.
            const auto ui = loaded.ids.find(Side::UpperU, op.u);
            const auto vi = loaded.ids.find(Side::LowerV, op.v);
            if (!ui.has_value() || !vi.has_value()) {
                if (!o.lenient) throw MissingEdgeError("delete of a missing edge: " + op_text);
                ++skipped;
                continue;
            }
            u = *ui;
            v = *vi;
        }
        const auto t0 = std::chrono::steady_clock::now();
        try {
            if (op.insert)
                m.insert_edge(u, v);
            else
                m.erase_edge(u, v);
        } catch (const DuplicateEdgeError&) {
            if (!o.lenient)
                throw DuplicateEdgeError("insert of an edge already present: " + op_text);
            ++skipped;
            continue;
        } catch (const MissingEdgeError&) {
            if (!o.lenient) throw MissingEdgeError("delete of a missing edge: " + op_text);
            ++skipped;
            continue;
        }
        const int64_t elapsed = micros_since(t0);
        ++applied;
        const IndexStats s = index_stats(m.index());
        csv.add({op.insert ? "insert" : "delete", -1, -1, s.entry_count(), elapsed, 0});
        if (o.verify_each) {
            BuildResult fresh = build_index(loaded.graph);
            if (!index_equal(m.index(), fresh.index)) {
                std::cerr << "maintained index diverged from a fresh build after "
                          << (op.insert ? "+ " : "- ") << op.u << ' ' << op.v << '\n';
                return kExitVerifyFailed;
            }
        }
    }
    write_binary(o.index, serialize(m.index(), &loaded.ids));
    if (!o.out_graph.empty()) write_edge_list(o.out_graph, loaded.graph, loaded.ids);
    std::cout << "applied=" << applied << " skipped=" << skipped << " p=" << m.index().p
              << '\n';
    return kExitOk;
}

struct VerifyOpts {
    std::string index, graph;
    bool lenient = false;
};

int cmd_verify(const VerifyOpts& o) {
    IdMaps index_ids;
    const BDIndex stored = deserialize(read_binary(o.index), &index_ids);
    const bool seeded = !index_ids.u_external.empty();
    LoadResult loaded = load_graph(o.graph, o.lenient, seeded ? &index_ids : nullptr);
    if (seeded && !same_ids(index_ids, loaded.ids)) {
        std::cerr << "graph file contains ids the index has never seen\n";
        return kExitVerifyFailed;
    }
    BuildResult fresh = build_index(loaded.graph);
    if (!index_equal(stored, fresh.index)) {
        std::cerr << "index content does not match a fresh build (stored p=" << stored.p
                  << ", rebuilt p=" << fresh.index.p << ")\n";
        return kExitVerifyFailed;
    }
    std::cout << "index matches graph (p=" << stored.p << ")\n";
    return kExitOk;
}

struct GenOpts {
    std::string kind = "random", out;
    uint32_t u = 0, v = 0;
    uint64_t edges = 0;
    uint64_t seed = 1;
    double exponent = 2.0;
};

int cmd_gen(const GenOpts& o) {
    BipartiteGraph g;
    if (o.kind == "random")
        g = gen_random(o.u, o.v, o.edges, o.seed);
    else if (o.kind == "powerlaw")
        g = gen_powerlaw(o.u, o.v, o.edges, o.seed, o.exponent);
    else
        g = gen_complete(o.u, o.v);
    std::ofstream out(o.out, std::ios::trunc);
    if (!out) throw Error("cannot write " + o.out);
    out << "% kind=" << o.kind << " u=" << o.u << " v=" << o.v << " edges=" << g.edge_count()
        << " seed=" << o.seed << '\n';
    for (uint32_t u = 0; u < g.u_count(); ++u) {
        std::vector<uint32_t> nbs = g.neighbors(u_node(u));
        std::sort(nbs.begin(), nbs.end());
        for (uint32_t v : nbs) out << u + 1 << ' ' << v + 1 << '\n';
    }
    if (!out) throw Error("short write to " + o.out);
    std::cout << "wrote " << g.edge_count() << " edges to " << o.out << '\n';
    return kExitOk;
}

struct StatsOpts {
    std::string index, graph;
    bool lenient = false;
};

int cmd_stats(const StatsOpts& o) {
    IdMaps ids;
    const BDIndex idx = deserialize(read_binary(o.index), &ids);
    const IndexStats s = index_stats(idx);
    std::cout << "p=" << idx.p << '\n'
              << "u_entries=" << s.u_entries << " v_entries=" << s.v_entries << '\n'
              << "u_cursors=" << s.u_cursors << " v_cursors=" << s.v_cursors << '\n'
              << "model_bytes=" << s.model_bytes() << '\n';
    if (o.graph.empty()) return kExitOk;
    LoadResult loaded = load_graph(o.graph, o.lenient);
    const uint64_t m = loaded.graph.edge_count();
    std::cout << "edges=" << m << '\n';
    const bool entries_ok = idx.p < 0 || (s.u_entries >= m && s.u_entries <= 2 * m);
    const bool cursors_ok = s.u_cursors <= m || m == 0;
    std::cout << "u_entry_bounds=" << (entries_ok ? "ok" : "violated") << '\n'
              << "u_cursor_bound=" << (cursors_ok ? "ok" : "violated") << '\n';
    return entries_ok && cursors_ok ? kExitOk : kExitVerifyFailed;
}

} // namespace

std::string csv_header() { return "op,alpha,beta,result_size,elapsed_micros,entries_touched"; }

std::string csv_line(const CsvRow& row) {
    std::ostringstream out;
    out << row.op << ',' << row.alpha << ',' << row.beta << ',' << row.result_size << ','
        << row.elapsed_micros << ',' << row.entries_touched;
    return out.str();
}

std::vector<UpdateOp> parse_update_stream(std::istream& in) {
    std::vector<UpdateOp> ops;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string sign;
        if (!(ls >> sign) || sign[0] == '%' || sign[0] == '#') continue;
        if (sign != "+" && sign != "-")
            throw ParseError(lineno, "expected '+ u v' or '- u v'");
        int64_t u = 0, v = 0;
        if (!(ls >> u >> v)) throw ParseError(lineno, "expected two node ids");
        if (u <= 0 || v <= 0) throw ParseError(lineno, "node ids must be positive");
        std::string extra;
        if (ls >> extra) throw ParseError(lineno, "unexpected trailing field '" + extra + "'");
        ops.push_back({sign == "+", static_cast<uint64_t>(u), static_cast<uint64_t>(v)});
    }
    return ops;
}

std::string format_nodes(const std::vector<NodeRef>& nodes, const IdMaps* ids) {
    std::ostringstream out;
    bool first = true;
    for (NodeRef n : nodes) {
        if (!first) out << ' ';
        first = false;
        uint64_t label = n.index + 1;
        if (ids) {
            const auto& ext = n.side == Side::UpperU ? ids->u_external : ids->v_external;
            if (n.index < ext.size()) label = ext[n.index];
        }
        out << side_letter(n.side) << label;
    }
    return out.str();
}

int run_cli(std::vector<std::string> args) {
    CLI::App app{"bipartite dense-subgraph index"};
    app.require_subcommand(1);

    BuildOpts bo;
    auto* build = app.add_subcommand("build", "build an index file from an edge list");
    build->add_option("--graph", bo.graph, "edge list file")->required()->check(CLI::ExistingFile);
    build->add_option("--index", bo.index, "output index file")->required();
    build->add_option("--csv", bo.csv, "write one benchmark row per operation");
    build->add_flag("--lenient", bo.lenient, "collapse duplicate edges instead of failing");

    QueryOpts qo;
    auto* query = app.add_subcommand("query", "answer level queries");
    query->add_option("--index", qo.index, "index file")->check(CLI::ExistingFile);
    query->add_option("--alpha", qo.alpha, "U-side level");
    query->add_option("--beta", qo.beta, "V-side level");
    query->add_option("--queries", qo.queries, "file with one 'alpha beta' per line")
        ->check(CLI::ExistingFile);
    query->add_option("--csv", qo.csv, "write one benchmark row per query");
    query->add_flag("--online", qo.online, "compute from the graph instead of an index");
    query->add_option("--graph", qo.graph, "edge list file (with --online)")
        ->check(CLI::ExistingFile);
    query->add_flag("--lenient", qo.lenient, "collapse duplicate edges instead of failing");

    UpdateOpts uo;
    auto* update = app.add_subcommand("update", "apply an edge update stream to an index");
    update->add_option("--index", uo.index, "index file, rewritten in place")
        ->required()
        ->check(CLI::ExistingFile);
    update->add_option("--graph", uo.graph, "edge list the index was built from")
        ->required()
        ->check(CLI::ExistingFile);
    update->add_option("--stream", uo.stream, "update stream ('+ u v' / '- u v' lines)")
        ->required()
        ->check(CLI::ExistingFile);
    update->add_option("--mode", uo.mode, "maintenance strategy")
        ->check(CLI::IsMember({"space", "time"}));
    update->add_flag("--verify-each", uo.verify_each,
                     "rebuild from scratch after every update and compare");
    update->add_option("--csv", uo.csv, "write one benchmark row per update");
    update->add_option("--out-graph", uo.out_graph, "also write the updated edge list here");
    update->add_flag("--lenient", uo.lenient,
                     "skip duplicate inserts and missing deletes; collapse input duplicates");

    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "check an index file against its graph");
    verify->add_option("--index", vo.index, "index file")->required()->check(CLI::ExistingFile);
    verify->add_option("--graph", vo.graph, "edge list file")
        ->required()
        ->check(CLI::ExistingFile);
    verify->add_flag("--lenient", vo.lenient, "collapse duplicate edges instead of failing");

    GenOpts go;
    auto* gen = app.add_subcommand("gen", "generate a deterministic edge list");
    gen->add_option("--kind", go.kind, "random, powerlaw, or complete")
        ->check(CLI::IsMember({"random", "powerlaw", "complete"}));
    gen->add_option("--u", go.u, "U-side node count")->required();
    gen->add_option("--v", go.v, "V-side node count")->required();
    gen->add_option("--edges", go.edges, "edge count (ignored for complete)");
    gen->add_option("--seed", go.seed, "random seed");
    gen->add_option("--exponent", go.exponent, "powerlaw skew exponent");
    gen->add_option("--out", go.out, "output edge list")->required();

    StatsOpts so;
    auto* stats = app.add_subcommand("stats", "print index size statistics");
    stats->add_option("--index", so.index, "index file")->required()->check(CLI::ExistingFile);
    stats->add_option("--graph", so.graph, "edge list file for bound checks")
        ->check(CLI::ExistingFile);
    stats->add_flag("--lenient", so.lenient, "collapse duplicate edges instead of failing");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("bdi");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (build->parsed()) return cmd_build(bo);
        if (query->parsed()) return cmd_query(qo);
        if (update->parsed()) return cmd_update(uo);
        if (verify->parsed()) return cmd_verify(vo);
        if (gen->parsed()) return cmd_gen(go);
        if (stats->parsed()) return cmd_stats(so);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace bdi
