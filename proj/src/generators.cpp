#include "orc/generators.hpp"

#include "orc/error.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace orc {

namespace {

// Portable draws on top of mt19937_64.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % bound;
}

[[noreturn]] void bad_param(const std::string& model, const std::string& what) {
    throw Error(ErrorCode::config, model + ": " + what);
}

}  // namespace

Graph gen_er(std::size_t n, double p, std::uint64_t seed) {
    if (n < 2) bad_param("er", "n must be at least 2");
    if (!(p >= 0.0 && p <= 1.0)) bad_param("er", "p must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (uniform01(rng) < p) edges.emplace_back(u, v);
        }
    }
    return build_graph(n, edges);
}

Graph gen_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n < 2) bad_param("ba", "n must be at least 2");
    if (m < 1 || m >= n) bad_param("ba", "m must satisfy 1 <= m < n");
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    // each endpoint appears once per incident edge
    std::vector<NodeId> endpoint_pool;
    for (NodeId leaf = 1; leaf <= m; ++leaf) {
        edges.emplace_back(0, leaf);
        endpoint_pool.push_back(0);
        endpoint_pool.push_back(leaf);
    }
    std::vector<NodeId> chosen;
    for (NodeId fresh = static_cast<NodeId>(m + 1); fresh < n; ++fresh) {
        chosen.clear();
        while (chosen.size() < m) {
            const NodeId pick = endpoint_pool[uniform_below(rng, endpoint_pool.size())];
            if (std::find(chosen.begin(), chosen.end(), pick) == chosen.end()) chosen.push_back(pick);
        }
        for (NodeId target : chosen) {
            edges.emplace_back(fresh, target);
            endpoint_pool.push_back(fresh);
            endpoint_pool.push_back(target);
        }
    }
    return build_graph(n, edges);
}

Graph gen_ws(std::size_t n, std::size_t ring_k, double beta, std::uint64_t seed) {
    if (n < 2) bad_param("ws", "n must be at least 2");
    if (ring_k % 2 != 0 || ring_k >= n) bad_param("ws", "ring_k must be even and smaller than n");
    if (!(beta >= 0.0 && beta <= 1.0)) bad_param("ws", "beta must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    std::vector<std::set<NodeId>> adj(n);
    auto link = [&](NodeId a, NodeId b) {
        adj[a].insert(b);
        adj[b].insert(a);
    };
    auto unlink = [&](NodeId a, NodeId b) {
        adj[a].erase(b);
        adj[b].erase(a);
    };
    const std::size_t half = ring_k / 2;
    for (NodeId u = 0; u < n; ++u) {
        for (std::size_t j = 1; j <= half; ++j) link(u, static_cast<NodeId>((u + j) % n));
    }
    for (std::size_t j = 1; j <= half; ++j) {
        for (NodeId u = 0; u < n; ++u) {
            const auto v = static_cast<NodeId>((u + j) % n);
            if (uniform01(rng) >= beta) continue;
            if (!adj[u].contains(v)) continue;   // already rewired away
            if (adj[u].size() >= n - 1) continue; // no admissible target
            NodeId w;
            do {
                w = static_cast<NodeId>(uniform_below(rng, n));
            } while (w == u || adj[u].contains(w));
            unlink(u, v);
            link(u, w);
        }
    }
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v : adj[u]) {
            if (u < v) edges.emplace_back(u, v);
        }
    }
    return build_graph(n, edges);
}

Graph gen_grid(std::size_t rows, std::size_t cols) {
    if (rows < 2 || cols < 2) bad_param("grid", "rows and cols must be at least 2");
    std::vector<Edge> edges;
    auto id = [cols](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * cols + c); };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
    }
    return build_graph(rows * cols, edges);
}

}  // namespace orc
