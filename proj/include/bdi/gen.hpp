#pragma once

#include <cstdint>
#include <vector>

#include "bdi/graph.hpp"

namespace bdi {

/// Uniform random simple bipartite graph with exactly `edges` edges.
/// Deterministic for a fixed seed. Throws GenError when edges > u_count * v_count.
BipartiteGraph gen_random(uint32_t u_count, uint32_t v_count, uint64_t edges, uint64_t seed);

/// Random bipartite graph whose endpoint picks are skewed by node index:
/// node i is drawn with weight (i + 1)^-exponent on each side, duplicates
/// rejected. Deterministic for a fixed seed.
BipartiteGraph gen_powerlaw(uint32_t u_count, uint32_t v_count, uint64_t edges, uint64_t seed,
                            double exponent = 2.0);

BipartiteGraph gen_complete(uint32_t u_count, uint32_t v_count);

} // namespace bdi
