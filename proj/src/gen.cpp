#include "bdi/gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_set>

#include "bdi/errors.hpp"

namespace bdi {

namespace {

// Keep the raw engine output as the only source of randomness so results are
// identical across standard library implementations.
double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

uint64_t below(std::mt19937_64& rng, uint64_t bound) {
    return rng() % bound;
}

void check_capacity(uint32_t u_count, uint32_t v_count, uint64_t edges) {
    if (u_count == 0 || v_count == 0) {
        if (edges > 0) throw GenError("cannot place edges in an empty side");
        return;
    }
    const uint64_t cap = static_cast<uint64_t>(u_count) * v_count;
    if (edges > cap)
        throw GenError("requested " + std::to_string(edges) + " edges but only " +
                       std::to_string(cap) + " pairs exist");
}

} // namespace

BipartiteGraph gen_random(uint32_t u_count, uint32_t v_count, uint64_t edges, uint64_t seed) {
    check_capacity(u_count, v_count, edges);
    BipartiteGraph g(u_count, v_count);
    if (edges == 0) return g;
    std::mt19937_64 rng(seed);
    const uint64_t cap = static_cast<uint64_t>(u_count) * v_count;
    if (edges * 2 <= cap) {
        std::unordered_set<uint64_t> used;
        used.reserve(edges * 2);
        while (used.size() < edges) {
            const uint64_t pair = below(rng, cap);
            if (used.insert(pair).second)
                g.insert_edge(static_cast<uint32_t>(pair / v_count),
                              static_cast<uint32_t>(pair % v_count));
        }
        return g;
    }
    // Dense request: partial Fisher-Yates over the full pair space.
    std::vector<uint64_t> pairs(cap);
    for (uint64_t i = 0; i < cap; ++i) pairs[i] = i;
    for (uint64_t i = 0; i < edges; ++i) {
        const uint64_t j = i + below(rng, cap - i);
        std::swap(pairs[i], pairs[j]);
        g.insert_edge(static_cast<uint32_t>(pairs[i] / v_count),
                      static_cast<uint32_t>(pairs[i] % v_count));
    }
    return g;
}

BipartiteGraph gen_powerlaw(uint32_t u_count, uint32_t v_count, uint64_t edges, uint64_t seed,
                            double exponent) {
    check_capacity(u_count, v_count, edges);
    BipartiteGraph g(u_count, v_count);
    if (edges == 0) return g;
    std::mt19937_64 rng(seed);
    auto cdf = [&](uint32_t n) {
        std::vector<double> acc(n);
        double sum = 0.0;
        for (uint32_t i = 0; i < n; ++i) {
            sum += std::pow(static_cast<double>(i + 1), -exponent);
            acc[i] = sum;
        }
        for (double& x : acc) x /= sum;
        return acc;
    };
    const std::vector<double> cdf_u = cdf(u_count);
    const std::vector<double> cdf_v = cdf(v_count);
    auto draw = [&](const std::vector<double>& acc) {
        const double x = unit_real(rng);
        const auto it = std::upper_bound(acc.begin(), acc.end(), x);
        return static_cast<uint32_t>(std::min<std::ptrdiff_t>(it - acc.begin(),
                                                              static_cast<std::ptrdiff_t>(acc.size()) - 1));
    };
    uint64_t placed = 0;
    uint64_t attempts = 0;
    const uint64_t max_attempts = 200 * edges + 10000;
    while (placed < edges) {
        if (++attempts > max_attempts)
            throw GenError("skewed sampling stalled; lower the edge count or the exponent");
        const uint32_t u = draw(cdf_u);
        const uint32_t v = draw(cdf_v);
        if (g.has_edge(u, v)) continue;
        g.insert_edge(u, v);
        ++placed;
    }
    return g;
}

BipartiteGraph gen_complete(uint32_t u_count, uint32_t v_count) {
    BipartiteGraph g(u_count, v_count);
    for (uint32_t u = 0; u < u_count; ++u)
        for (uint32_t v = 0; v < v_count; ++v) g.insert_edge(u, v);
    return g;
}

} // namespace bdi
