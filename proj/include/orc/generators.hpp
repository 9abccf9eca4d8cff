#pragma once

#include "orc/graph.hpp"

#include <cstdint>

namespace orc {

// Random graph models. Every generator draws from a 64-bit Mersenne Twister
// seeded with `seed`; the same (seed, params) always yields the same graph.

/// G(n, p): each of the n(n-1)/2 pairs is an edge independently with
/// probability p.
Graph gen_er(std::size_t n, double p, std::uint64_t seed);

/// Preferential attachment. Starts from a star on nodes 0..m (center 0); each
/// later node attaches to m distinct existing nodes drawn with probability
/// proportional to degree. Edge count is m * (n - m).
Graph gen_ba(std::size_t n, std::size_t m, std::uint64_t seed);

/// Small world: ring lattice where each node links to ring_k/2 successors,
/// then each clockwise edge (u, u+j) is rewired with probability beta to a
/// uniform target that is neither u nor an existing neighbor of u.
Graph gen_ws(std::size_t n, std::size_t ring_k, double beta, std::uint64_t seed);

/// rows x cols lattice; node id = r * cols + c.
Graph gen_grid(std::size_t rows, std::size_t cols);

}  // namespace orc
