#include "orc/measure.hpp"

#include "orc/error.hpp"

#include <algorithm>
#include <sstream>

namespace orc {

double LocalMeasure::at(NodeId v) const noexcept {
    const auto it = std::lower_bound(mass.begin(), mass.end(), v,
                                     [](const WeightedNode& w, NodeId id) { return w.node < id; });
    return (it != mass.end() && it->node == v) ? it->mass : 0.0;
}

double LocalMeasure::total() const noexcept {
    double sum = 0.0;
    for (const auto& w : mass) sum += w.mass;
    return sum;
}

std::vector<NodeId> LocalMeasure::support() const {
    std::vector<NodeId> nodes;
    nodes.reserve(mass.size());
    for (const auto& w : mass) nodes.push_back(w.node);
    return nodes;
}

namespace {

struct PushScratch {
    std::vector<double> acc;
    std::vector<char> touched;
    std::vector<NodeId> order;
};

PushScratch& push_scratch(std::size_t n) {
    thread_local PushScratch s;
    if (s.acc.size() < n) {
        s.acc.resize(n, 0.0);
        s.touched.resize(n, 0);
    }
    return s;
}

}  // namespace

SparseDistribution transition_step(const Graph& g, std::span<const WeightedNode> dist) {
    auto& s = push_scratch(g.node_count());
    s.order.clear();
    for (const auto& [u, p] : dist) {
        if (!g.contains(u)) throw Error(ErrorCode::invalid_graph, "distribution references a node outside the graph");
        const auto nb = g.neighbors(u);
        if (nb.empty()) {
            for (NodeId v : s.order) {
                s.acc[v] = 0.0;
                s.touched[v] = 0;
            }
            std::ostringstream msg;
            msg << "random walk undefined at isolated node " << u;
            throw Error(ErrorCode::isolated_node, msg.str());
        }
        const double share = p / static_cast<double>(nb.size());
        for (NodeId v : nb) {
            if (!s.touched[v]) {
                s.touched[v] = 1;
                s.order.push_back(v);
            }
            s.acc[v] += share;
        }
    }
    std::sort(s.order.begin(), s.order.end());
    SparseDistribution out;
    out.reserve(s.order.size());
    for (NodeId v : s.order) {
        out.push_back({v, s.acc[v]});
        s.acc[v] = 0.0;
        s.touched[v] = 0;
    }
    return out;
}

LocalMeasure k_hop_measure(const Graph& g, NodeId x, Hops k, double alpha) {
    if (!g.contains(x)) throw Error(ErrorCode::invalid_graph, "measure center out of range");
    if (k < 1) throw Error(ErrorCode::config, "hop count k must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::config, "laziness alpha must lie in (0, 1)");

    SparseDistribution walk{{x, 1.0}};
    for (Hops step = 0; step < k; ++step) walk = transition_step(g, walk);

    LocalMeasure mu{x, k, alpha, {}};
    mu.mass.reserve(walk.size() + 1);
    bool center_seen = false;
    for (const auto& [v, p] : walk) {
        if (!center_seen && v > x) {
            mu.mass.push_back({x, alpha});
            center_seen = true;
        }
        double m = (1.0 - alpha) * p;
        if (v == x) {
            m += alpha;
            center_seen = true;
        }
        mu.mass.push_back({v, m});
    }
    if (!center_seen) mu.mass.push_back({x, alpha});
    return mu;
}

}  // namespace orc
