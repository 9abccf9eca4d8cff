#include "orc/graph.hpp"

#include "orc/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace orc {

bool Graph::adjacent(NodeId u, NodeId v) const noexcept {
    // search the shorter list
    if (degree(u) > degree(v)) std::swap(u, v);
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

Graph build_graph(std::size_t n, std::span<const Edge> edges) {
    if (n > std::numeric_limits<NodeId>::max()) {
        throw Error(ErrorCode::invalid_graph, "node count exceeds 32-bit id range");
    }
    std::vector<Edge> directed;
    directed.reserve(2 * edges.size());
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            std::ostringstream msg;
            msg << "edge (" << u << ", " << v << ") references a node outside [0, " << n << ")";
            throw Error(ErrorCode::invalid_graph, msg.str());
        }
        if (u == v) {
            std::ostringstream msg;
            msg << "self-loop at node " << u << " is not allowed in a simple graph";
            throw Error(ErrorCode::invalid_graph, msg.str());
        }
        directed.emplace_back(u, v);
        directed.emplace_back(v, u);
    }
    std::sort(directed.begin(), directed.end());
    directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

    Graph g;
    g.offsets_.assign(n + 1, 0);
    g.targets_.reserve(directed.size());
    for (const auto& [u, v] : directed) {
        ++g.offsets_[u + 1];
        g.targets_.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    return g;
}

std::string validate_graph(const Graph& g) {
    std::ostringstream msg;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto nb = g.neighbors(u);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            const NodeId v = nb[i];
            if (v >= g.node_count()) {
                msg << "node " << u << " lists out-of-range neighbor " << v;
                return msg.str();
            }
            if (v == u) {
                msg << "self-loop at node " << u;
                return msg.str();
            }
            if (i > 0 && nb[i - 1] >= v) {
                msg << "neighbors of " << u << " not strictly increasing at " << v;
                return msg.str();
            }
            const auto back = g.neighbors(v);
            if (!std::binary_search(back.begin(), back.end(), u)) {
                msg << "edge " << u << "->" << v << " has no reverse";
                return msg.str();
            }
        }
    }
    return {};
}

// =============================================================================
// Edge-list IO
// =============================================================================

Graph read_edge_list(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") != std::string::npos) return true;
        }
        return false;
    };

    if (!next_line()) throw Error(ErrorCode::invalid_graph, "edge list is empty (expected header \"n m\")");
    long long n = -1, m = -1;
    {
        std::istringstream header(line);
        if (!(header >> n >> m) || n < 0 || m < 0) {
            throw Error(ErrorCode::invalid_graph, "malformed edge-list header on line 1: \"" + line + "\"");
        }
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!next_line()) {
            std::ostringstream msg;
            msg << "edge list ended after " << i << " of " << m << " edges";
            throw Error(ErrorCode::invalid_graph, msg.str());
        }
        std::istringstream row(line);
        long long u = -1, v = -1;
        if (!(row >> u >> v) || u < 0 || v < 0) {
            std::ostringstream msg;
            msg << "malformed edge on line " << line_no << ": \"" << line << "\"";
            throw Error(ErrorCode::invalid_graph, msg.str());
        }
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
        if (u >= n || v >= n) {
            std::ostringstream msg;
            msg << "edge (" << u << ", " << v << ") on line " << line_no << " references a node outside [0, " << n
                << ")";
            throw Error(ErrorCode::invalid_graph, msg.str());
        }
    }
    return build_graph(static_cast<std::size_t>(n), edges);
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open edge list \"" + path + "\"");
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.node_count() << ' ' << g.edge_count() << '\n';
    for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

// =============================================================================
// BFS machinery
// =============================================================================

void BfsWorkspace::reserve(std::size_t node_count) {
    if (visit_stamp_.size() < node_count) {
        visit_stamp_.resize(node_count, 0);
        target_stamp_.resize(node_count, 0);
        target_slot_.resize(node_count, 0);
    }
}

std::uint32_t BfsWorkspace::next_epoch() {
    if (++epoch_ == 0) {
        std::fill(visit_stamp_.begin(), visit_stamp_.end(), 0);
        epoch_ = 1;
    }
    return epoch_;
}

void BfsWorkspace::set_targets(std::span<const NodeId> dst) {
    if (++target_epoch_ == 0) {
        std::fill(target_stamp_.begin(), target_stamp_.end(), 0);
        target_epoch_ = 1;
    }
    target_count_ = 0;
    for (std::size_t i = 0; i < dst.size(); ++i) {
        if (target_stamp_[dst[i]] != target_epoch_) ++target_count_;
        target_stamp_[dst[i]] = target_epoch_;
        target_slot_[dst[i]] = static_cast<std::uint32_t>(i);
    }
}

void BfsWorkspace::distances_to_targets(const Graph& g, NodeId source, Hops cap, std::span<Hops> out) {
    std::fill(out.begin(), out.end(), kBeyondCap);
    std::size_t remaining = target_count_;
    if (remaining == 0) return;
    bfs(g, source, cap, [&](NodeId v, Hops d) {
        if (target_stamp_[v] == target_epoch_) {
            out[target_slot_[v]] = d;
            if (--remaining == 0) return false;
        }
        return true;
    });
}

BfsWorkspace& thread_workspace(const Graph& g) {
    thread_local BfsWorkspace ws;
    ws.reserve(g.node_count());
    return ws;
}

std::optional<Hops> DistanceMap::at(NodeId v) const {
    for (const auto& [node, d] : visited_) {
        if (node == v) return d;
    }
    return std::nullopt;
}

DistanceMap bfs_distances(const Graph& g, NodeId source, Hops depth_cap) {
    if (!g.contains(source)) throw Error(ErrorCode::invalid_graph, "bfs source out of range");
    if (depth_cap < 0) throw Error(ErrorCode::config, "bfs depth cap must be nonnegative");
    std::vector<std::pair<NodeId, Hops>> order;
    thread_workspace(g).bfs(g, source, depth_cap, [&](NodeId v, Hops d) {
        order.emplace_back(v, d);
        return true;
    });
    return DistanceMap(source, depth_cap, std::move(order));
}

std::optional<Hops> hop_distance(const Graph& g, NodeId u, NodeId v, Hops cap) {
    if (!g.contains(u) || !g.contains(v)) throw Error(ErrorCode::invalid_graph, "hop_distance node out of range");
    if (u == v) return 0;
    if (cap >= 1 && g.adjacent(u, v)) return 1;
    std::optional<Hops> found;
    thread_workspace(g).bfs(g, u, cap, [&](NodeId w, Hops d) {
        if (w == v) {
            found = d;
            return false;
        }
        return true;
    });
    return found;
}

std::vector<NodeId> k_hop_neighborhood(const Graph& g, NodeId v, Hops k) {
    if (!g.contains(v)) throw Error(ErrorCode::invalid_graph, "neighborhood center out of range");
    if (k < 0) throw Error(ErrorCode::config, "neighborhood radius must be nonnegative");
    std::vector<NodeId> ball;
    thread_workspace(g).bfs(g, v, k, [&](NodeId w, Hops) {
        ball.push_back(w);
        return true;
    });
    std::sort(ball.begin(), ball.end());
    return ball;
}

Hops DistanceMatrix::max_entry() const noexcept {
    Hops best = 0;
    for (Hops d : data_) best = std::max(best, d);
    return best;
}

bool DistanceMatrix::has_beyond_cap() const noexcept {
    return std::find(data_.begin(), data_.end(), kBeyondCap) != data_.end();
}

DistanceMatrix pairwise_distances(const Graph& g, std::span<const NodeId> src, std::span<const NodeId> dst,
                                  Hops cap) {
    DistanceMatrix out(src.size(), dst.size());
    auto& ws = thread_workspace(g);
    ws.set_targets(dst);
    for (std::size_t i = 0; i < src.size(); ++i) ws.distances_to_targets(g, src[i], cap, out.row(i));
    return out;
}

}  // namespace orc
