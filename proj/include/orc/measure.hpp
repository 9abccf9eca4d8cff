#pragma once

#include "orc/graph.hpp"

#include <span>
#include <vector>

namespace orc {

struct WeightedNode {
    NodeId node;
    double mass;

    friend bool operator==(const WeightedNode&, const WeightedNode&) = default;
};

/// Sparse distribution on node ids, sorted by node, no duplicate nodes.
using SparseDistribution = std::vector<WeightedNode>;

inline constexpr double kDefaultAlpha = 0.4;
inline constexpr Hops kDefaultHops = 1;

/// Lazy k-hop random-walk measure
///   mass(y) = (1 - alpha) * P^k(center, y) + alpha * [y == center]
/// where P is the simple random walk P(u, v) = 1/deg(u) for u ~ v.
struct LocalMeasure {
    NodeId center = 0;
    Hops hop = 1;
    double alpha = kDefaultAlpha;
    SparseDistribution mass;

    double at(NodeId v) const noexcept;
    double total() const noexcept;
    std::vector<NodeId> support() const;
};

/// One step of the simple random walk: result(v) = sum_{u ~ v} dist(u)/deg(u).
/// Throws `Error(isolated_node)` if mass sits on a node of degree 0.
SparseDistribution transition_step(const Graph& g, std::span<const WeightedNode> dist);

/// Builds the measure by k sparse push steps from the Dirac mass at x. No
/// entries are pruned, however small.
LocalMeasure k_hop_measure(const Graph& g, NodeId x, Hops k = kDefaultHops, double alpha = kDefaultAlpha);

}  // namespace orc
