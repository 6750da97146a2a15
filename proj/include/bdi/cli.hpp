#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bdi/graph.hpp"

namespace bdi {

/// One benchmark record. Timing is wall clock; every other column is
/// deterministic for a given input and operation sequence.
struct CsvRow {
    std::string op;
    int32_t alpha = -1;
    int32_t beta = -1;
    uint64_t result_size = 0;
    int64_t elapsed_micros = 0;
    uint64_t entries_touched = 0;
};

std::string csv_header();
std::string csv_line(const CsvRow& row);

struct UpdateOp {
    bool insert = true;
    uint64_t u = 0, v = 0; // external ids
};

/// Update stream: one "+ u v" or "- u v" per line, '%'/'#' comments and blank
/// lines skipped. Throws ParseError with the offending line number.
std::vector<UpdateOp> parse_update_stream(std::istream& in);

/// Space-separated "u<id> v<id>" labels using external ids when available,
/// internal indices otherwise.
std::string format_nodes(const std::vector<NodeRef>& nodes, const IdMaps* ids);

/// Runs one CLI invocation (args without the program name). Returns the
/// process exit code: 0 success, 1 verification failure, 2 usage or input
/// errors.
int run_cli(std::vector<std::string> args);

} // namespace bdi
