#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace orc {

using NodeId = std::uint32_t;
using Hops = std::int32_t;

inline constexpr Hops kUnbounded = std::numeric_limits<Hops>::max();
inline constexpr Hops kBeyondCap = -1;

using Edge = std::pair<NodeId, NodeId>;

// =============================================================================
// Graph
// =============================================================================

/// Immutable undirected, unweighted, simple graph stored as CSR adjacency.
/// Neighbor lists are sorted ascending; every edge appears in both endpoints'
/// lists.
class Graph {
public:
    Graph() = default;

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId v) const noexcept {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

    bool contains(NodeId v) const noexcept { return v < node_count(); }
    bool adjacent(NodeId u, NodeId v) const noexcept;

    /// Edges (u, v) with u < v, in ascending lexicographic order.
    std::vector<Edge> edges() const;

private:
    friend Graph build_graph(std::size_t n, std::span<const Edge> edges);

    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
};

/// Builds a graph from an unordered edge list. Duplicate edges collapse;
/// out-of-range ids and self-loops throw `Error(invalid_graph)`.
Graph build_graph(std::size_t n, std::span<const Edge> edges);

inline Graph build_graph(std::size_t n, const std::vector<Edge>& edges) {
    return build_graph(n, std::span<const Edge>(edges));
}

/// Returns an empty string when the symmetry and simplicity invariants hold,
/// otherwise a description of the first violation.
std::string validate_graph(const Graph& g);

// =============================================================================
// Edge-list text format: "n m" header, then m lines "u v".
// =============================================================================

Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

// =============================================================================
// Shortest paths
// =============================================================================

/// Hop distances from `source`, truncated at `depth_cap`. Nodes beyond the cap
/// or in another component are absent.
class DistanceMap {
public:
    DistanceMap(NodeId source, Hops depth_cap, std::vector<std::pair<NodeId, Hops>> order)
        : source_(source), depth_cap_(depth_cap), visited_(std::move(order)) {}

    NodeId source() const noexcept { return source_; }
    Hops depth_cap() const noexcept { return depth_cap_; }

    /// Visited nodes in BFS order (distances non-decreasing).
    std::span<const std::pair<NodeId, Hops>> visited() const noexcept { return visited_; }
    std::size_t size() const noexcept { return visited_.size(); }

    std::optional<Hops> at(NodeId v) const;

private:
    NodeId source_;
    Hops depth_cap_;
    std::vector<std::pair<NodeId, Hops>> visited_;
};

DistanceMap bfs_distances(const Graph& g, NodeId source, Hops depth_cap = kUnbounded);

/// Shortest-path hop count between two nodes, or nullopt when it exceeds
/// `cap` (or the nodes are disconnected).
std::optional<Hops> hop_distance(const Graph& g, NodeId u, NodeId v, Hops cap = kUnbounded);

/// Sorted node set {v' : d(v', v) <= k}.
std::vector<NodeId> k_hop_neighborhood(const Graph& g, NodeId v, Hops k);

/// Dense |src| x |dst| hop-distance matrix. Entries larger than the cap hold
/// `kBeyondCap`.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t rows, std::size_t cols, Hops fill = kBeyondCap)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Hops operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    Hops& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

    std::span<const Hops> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<Hops> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }

    /// Largest finite entry; 0 for an empty matrix.
    Hops max_entry() const noexcept;
    bool has_beyond_cap() const noexcept;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Hops> data_;
};

/// Truncated BFS from every node of `src`; each search stops once every node
/// of `dst` is labelled or the cap is reached.
DistanceMatrix pairwise_distances(const Graph& g, std::span<const NodeId> src,
                                  std::span<const NodeId> dst, Hops cap);

/// Reusable BFS scratch: epoch-stamped visit marks and a target-slot table
/// sized to the graph. One target set is active at a time.
class BfsWorkspace {
public:
    void reserve(std::size_t node_count);

    void set_targets(std::span<const NodeId> dst);

    /// Writes d(source, dst[i]) into out[i] (length |dst|), `kBeyondCap` where
    /// farther than `cap`. Stops early once every target is labelled.
    void distances_to_targets(const Graph& g, NodeId source, Hops cap, std::span<Hops> out);

    /// Plain truncated BFS; the callback receives (node, hops) in BFS order and
    /// may return false to stop the search.
    template <typename Visit>
    void bfs(const Graph& g, NodeId source, Hops cap, Visit&& visit);

private:
    std::uint32_t next_epoch();

    std::vector<std::uint32_t> visit_stamp_;
    std::vector<std::uint32_t> target_stamp_;
    std::vector<std::uint32_t> target_slot_;
    std::vector<std::pair<NodeId, Hops>> queue_;
    std::uint32_t epoch_ = 0;
    std::uint32_t target_epoch_ = 0;
    std::size_t target_count_ = 0;
};

/// Per-thread workspace, grown to fit `g`.
BfsWorkspace& thread_workspace(const Graph& g);

template <typename Visit>
void BfsWorkspace::bfs(const Graph& g, NodeId source, Hops cap, Visit&& visit) {
    const std::uint32_t epoch = next_epoch();
    queue_.clear();
    queue_.emplace_back(source, 0);
    visit_stamp_[source] = epoch;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
        const auto [u, du] = queue_[head];
        if (!visit(u, du)) return;
        if (du >= cap) continue;
        for (NodeId w : g.neighbors(u)) {
            if (visit_stamp_[w] == epoch) continue;
            visit_stamp_[w] = epoch;
            queue_.emplace_back(w, du + 1);
        }
    }
}

}  // namespace orc
