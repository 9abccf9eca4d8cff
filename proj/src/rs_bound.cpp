#include "orc/rs_bound.hpp"

#include "orc/error.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <sstream>

namespace orc {

std::string_view strategy_name(ShellStrategy s) noexcept {
    switch (s) {
        case ShellStrategy::greedy: return "greedy";
        case ShellStrategy::maxflow: return "maxflow";
    }
    return "unknown";
}

std::optional<ShellStrategy> parse_strategy(std::string_view name) noexcept {
    if (name == "greedy") return ShellStrategy::greedy;
    if (name == "maxflow") return ShellStrategy::maxflow;
    return std::nullopt;
}

double RSBoundResult::transported() const noexcept {
    double total = 0.0;
    for (double m : shell_mass) total += m;
    return total;
}

ShellPartition build_shells(const DistanceMatrix& dist, Hops depth) {
    if (depth < 0) throw Error(ErrorCode::config, "shell depth l must be nonnegative");
    ShellPartition part;
    part.depth = depth;
    part.shells.resize(static_cast<std::size_t>(depth) + 1);
    for (std::uint32_t i = 0; i < dist.rows(); ++i) {
        for (std::uint32_t j = 0; j < dist.cols(); ++j) {
            const Hops d = dist(i, j);
            if (d != kBeyondCap && d <= depth) {
                part.shells[static_cast<std::size_t>(d)].push_back({i, j});
            } else {
                part.overflow.push_back({i, j});
            }
        }
    }
    part.distances = dist;
    return part;
}

namespace {

// Largest residual tolerated on one side when the other side is empty.
constexpr double kOneSidedResidueLimit = 1e-9;

std::vector<double> masses_of(const LocalMeasure& mu) {
    std::vector<double> out;
    out.reserve(mu.mass.size());
    for (const auto& w : mu.mass) out.push_back(w.mass);
    return out;
}

template <typename PairDistance>
void finalize(RSBoundResult& res, const std::vector<double>& a, const std::vector<double>& b,
              PairDistance&& pair_distance) {
    std::vector<std::uint32_t> live_rows, live_cols;
    double a_total = 0.0, b_total = 0.0;
    for (std::uint32_t i = 0; i < a.size(); ++i) {
        if (a[i] > 0.0) {
            live_rows.push_back(i);
            a_total += a[i];
            res.residual_source.push_back({res.rows[i], a[i]});
        }
    }
    for (std::uint32_t j = 0; j < b.size(); ++j) {
        if (b[j] > 0.0) {
            live_cols.push_back(j);
            b_total += b[j];
            res.residual_target.push_back({res.cols[j], b[j]});
        }
    }

    res.residual = 0.0;
    res.r_bar = 0;
    if (live_rows.empty() || live_cols.empty()) {
        if (a_total > kOneSidedResidueLimit || b_total > kOneSidedResidueLimit) {
            throw Error(ErrorCode::internal, "residual mass left on one side of the shell transport");
        }
        res.residual_source.clear();
        res.residual_target.clear();
    } else {
        res.residual = a_total;
        for (std::uint32_t i : live_rows) {
            for (std::uint32_t j : live_cols) {
                const Hops d = pair_distance(i, j);
                if (d == kBeyondCap) {
                    std::ostringstream msg;
                    msg << "residual pair (" << res.rows[i] << ", " << res.cols[j]
                        << ") has no known distance; the BFS cap is too small";
                    throw Error(ErrorCode::internal, msg.str());
                }
                res.r_bar = std::max(res.r_bar, d);
            }
        }
    }

    double cost = 0.0;
    for (std::size_t r = 0; r < res.shell_mass.size(); ++r) cost += static_cast<double>(r) * res.shell_mass[r];
    res.upper_bound = cost + static_cast<double>(res.r_bar) * res.residual;
    res.kappa_lb = 1.0 - res.upper_bound / static_cast<double>(res.d_xy);
}

// Dinic on a small explicit network with real capacities.
class MaxFlow {
public:
    explicit MaxFlow(std::size_t nodes) : head_(nodes, -1) {}

    std::size_t add_arc(std::size_t from, std::size_t to, double cap) {
        const std::size_t id = arcs_.size();
        arcs_.push_back({to, cap, head_[from]});
        head_[from] = static_cast<long>(id);
        arcs_.push_back({from, 0.0, head_[to]});
        head_[to] = static_cast<long>(id + 1);
        return id;
    }

    double residual(std::size_t arc) const { return arcs_[arc].cap; }
    double flow(std::size_t arc) const { return arcs_[arc ^ 1].cap; }

    double run(std::size_t s, std::size_t t, double eps) {
        double total = 0.0;
        while (levels(s, t, eps)) {
            cursor_ = head_;
            for (;;) {
                const double got = push(s, t, std::numeric_limits<double>::infinity(), eps);
                if (got <= eps) break;
                total += got;
            }
        }
        return total;
    }

private:
    struct Arc {
        std::size_t to;
        double cap;
        long next;
    };

    bool levels(std::size_t s, std::size_t t, double eps) {
        level_.assign(head_.size(), -1);
        std::vector<std::size_t> queue{s};
        level_[s] = 0;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const std::size_t u = queue[q];
            for (long e = head_[u]; e >= 0; e = arcs_[e].next) {
                const Arc& arc = arcs_[e];
                if (arc.cap > eps && level_[arc.to] < 0) {
                    level_[arc.to] = level_[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        return level_[t] >= 0;
    }

    double push(std::size_t u, std::size_t t, double limit, double eps) {
        if (u == t) return limit;
        for (long& e = cursor_[u]; e >= 0; e = arcs_[e].next) {
            Arc& arc = arcs_[e];
            if (arc.cap <= eps || level_[arc.to] != level_[u] + 1) continue;
            const double got = push(arc.to, t, std::min(limit, arc.cap), eps);
            if (got > 0.0) {
                arc.cap -= got;
                arcs_[e ^ 1].cap += got;
                return got;
            }
        }
        return 0.0;
    }

    std::vector<long> head_;
    std::vector<long> cursor_;
    std::vector<Arc> arcs_;
    std::vector<int> level_;
};

// Moves as much mass as possible across `pairs` against residuals a, b.
double max_flow_shell(std::span<const SupportPair> pairs, std::vector<double>& a, std::vector<double>& b,
                      std::vector<PlanEntry>& plan) {
    constexpr double kEps = 1e-16;
    const std::size_t n = a.size(), m = b.size();
    const std::size_t s = n + m, t = n + m + 1;
    MaxFlow net(n + m + 2);
    std::vector<long> source_arc(n, -1), sink_arc(m, -1);
    std::vector<std::size_t> pair_arc(pairs.size(), 0);
    std::vector<char> pair_live(pairs.size(), 0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        if (a[i] <= 0.0 || b[j] <= 0.0) continue;
        if (source_arc[i] < 0) source_arc[i] = static_cast<long>(net.add_arc(s, i, a[i]));
        if (sink_arc[j] < 0) sink_arc[j] = static_cast<long>(net.add_arc(n + j, t, b[j]));
        pair_arc[p] = net.add_arc(i, n + j, std::numeric_limits<double>::infinity());
        pair_live[p] = 1;
    }
    net.run(s, t, kEps);

    double moved = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (!pair_live[p]) continue;
        const double f = net.flow(pair_arc[p]);
        if (f > 0.0) {
            plan.push_back({pairs[p].row, pairs[p].col, f});
            moved += f;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (source_arc[i] >= 0) a[i] = std::max(0.0, net.residual(static_cast<std::size_t>(source_arc[i])));
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (sink_arc[j] >= 0) b[j] = std::max(0.0, net.residual(static_cast<std::size_t>(sink_arc[j])));
    }
    return moved;
}

RSBoundResult start_result(const LocalMeasure& mu_x, const LocalMeasure& mu_y, Hops depth, Hops d_xy) {
    if (depth < 0) throw Error(ErrorCode::config, "shell depth l must be nonnegative");
    if (d_xy <= 0) throw Error(ErrorCode::identical_nodes, "curvature undefined for identical nodes");
    RSBoundResult res;
    res.d_xy = d_xy;
    res.rows = mu_x.support();
    res.cols = mu_y.support();
    res.shell_mass.assign(static_cast<std::size_t>(depth) + 1, 0.0);
    return res;
}

}  // namespace

RSBoundResult greedy_shell_transport(const LocalMeasure& mu_x, const LocalMeasure& mu_y,
                                     const ShellPartition& shells, ShellStrategy strategy, Hops d_xy) {
    RSBoundResult res = start_result(mu_x, mu_y, shells.depth, d_xy);
    if (shells.distances.rows() != res.rows.size() || shells.distances.cols() != res.cols.size()) {
        throw Error(ErrorCode::config, "shell partition does not match the measure supports");
    }
    std::vector<double> a = masses_of(mu_x);
    std::vector<double> b = masses_of(mu_y);

    for (std::size_t r = 0; r < shells.shells.size(); ++r) {
        const auto& shell = shells.shells[r];
        if (strategy == ShellStrategy::maxflow) {
            res.shell_mass[r] = max_flow_shell(shell, a, b, res.partial_plan);
            continue;
        }
        double moved = 0.0;
        for (const auto [i, j] : shell) {
            const double delta = std::min(a[i], b[j]);
            if (delta <= 0.0) continue;
            a[i] -= delta;
            b[j] -= delta;
            moved += delta;
            res.partial_plan.push_back({i, j, delta});
        }
        res.shell_mass[r] = moved;
    }
    finalize(res, a, b, [&](std::uint32_t i, std::uint32_t j) { return shells.distances(i, j); });
    return res;
}

RSBoundResult rs_bound_materialized(const Graph& g, const LocalMeasure& mu_x, const LocalMeasure& mu_y, Hops d_xy,
                                    Hops depth, ShellStrategy strategy) {
    const Hops cap = d_xy + 2 * std::max(mu_x.hop, mu_y.hop);
    const auto src = mu_x.support();
    const auto dst = mu_y.support();
    const ShellPartition shells = build_shells(pairwise_distances(g, src, dst, cap), depth);
    return greedy_shell_transport(mu_x, mu_y, shells, strategy, d_xy);
}

RSBoundResult rs_bound(const Graph& g, const LocalMeasure& mu_x, const LocalMeasure& mu_y, Hops d_xy, Hops depth,
                       ShellStrategy strategy) {
    if (strategy == ShellStrategy::maxflow) return rs_bound_materialized(g, mu_x, mu_y, d_xy, depth, strategy);

    RSBoundResult res = start_result(mu_x, mu_y, depth, d_xy);
    const Hops cap = d_xy + 2 * std::max(mu_x.hop, mu_y.hop);
    const auto& rows = res.rows;
    const auto& cols = res.cols;
    const std::size_t ncols = cols.size();
    std::vector<double> a = masses_of(mu_x);
    std::vector<double> b = masses_of(mu_y);

    // Pair distances are resolved on demand. Values below zero: unknown, or
    // known to be at least 3.
    constexpr Hops kUnknown = -2, kAtLeast3 = -3;
    std::vector<Hops> pair_dist(rows.size() * ncols, kUnknown);
    std::vector<char> row_ready(rows.size(), 0);
    BfsWorkspace* ws = nullptr;
    std::vector<Hops> row_buf;
    auto fill_row = [&](std::size_t i) {
        if (!ws) {
            ws = &thread_workspace(g);
            ws->set_targets(cols);
            row_buf.resize(ncols);
        }
        ws->distances_to_targets(g, rows[i], cap, row_buf);
        std::copy(row_buf.begin(), row_buf.end(), pair_dist.begin() + static_cast<std::ptrdiff_t>(i * ncols));
        row_ready[i] = 1;
    };
    auto share_neighbor = [&](NodeId u, NodeId v) {
        if (g.degree(u) > g.degree(v)) std::swap(u, v);
        for (NodeId w : g.neighbors(u)) {
            if (g.adjacent(w, v)) return true;
        }
        return false;
    };
    // Exact distance if it is at most `need`, otherwise any value above `need`.
    auto resolve = [&](std::uint32_t i, std::uint32_t j, Hops need) -> Hops {
        Hops& d = pair_dist[i * ncols + j];
        if (d == kUnknown) {
            const NodeId u = rows[i], v = cols[j];
            if (u == v) {
                d = 0;
            } else if (g.adjacent(u, v)) {
                d = 1;
            } else if (share_neighbor(u, v)) {
                d = 2;
            } else {
                d = cap <= 3 ? 3 : kAtLeast3;
            }
        }
        if (d == kAtLeast3) {
            if (need < 3) return 3;
            fill_row(i);
        }
        return d;
    };

    for (Hops r = 0; r <= depth; ++r) {
        double moved = 0.0;
        for (std::uint32_t i = 0; i < rows.size(); ++i) {
            if (a[i] <= 0.0) continue;
            const Hops* known = row_ready[i] ? pair_dist.data() + i * ncols : nullptr;
            for (std::uint32_t j = 0; j < ncols; ++j) {
                if (b[j] <= 0.0) continue;
                bool in_shell;
                if (known) {
                    in_shell = known[j] == r;
                } else if (r == 0) {
                    in_shell = rows[i] == cols[j];
                } else if (r == 1) {
                    in_shell = g.adjacent(rows[i], cols[j]);
                } else {
                    in_shell = resolve(i, j, r) == r;
                }
                if (!in_shell) continue;
                const double delta = std::min(a[i], b[j]);
                a[i] -= delta;
                b[j] -= delta;
                moved += delta;
                res.partial_plan.push_back({i, j, delta});
                if (a[i] <= 0.0) break;
            }
        }
        res.shell_mass[static_cast<std::size_t>(r)] = moved;
    }
    finalize(res, a, b, [&](std::uint32_t i, std::uint32_t j) { return resolve(i, j, cap); });
    return res;
}

CurvatureResult rs_lower_bound(const Graph& g, NodeId x, NodeId y, Hops k, double alpha, Hops depth,
                               ShellStrategy strategy) {
    const auto start = std::chrono::steady_clock::now();
    CurvatureResult res;
    res.x = x;
    res.y = y;
    res.method = CurvatureMethod::rs_lb;
    res.d_xy = curvature_distance(g, x, y);
    const auto mu_x = k_hop_measure(g, x, k, alpha);
    const auto mu_y = k_hop_measure(g, y, k, alpha);
    const RSBoundResult bound = rs_bound(g, mu_x, mu_y, res.d_xy, depth, strategy);
    res.w1 = bound.upper_bound;
    res.kappa = bound.kappa_lb;
    res.elapsed = std::chrono::steady_clock::now() - start;
    return res;
}

TransportPlan complete_coupling(const RSBoundResult& res) {
    TransportPlan plan;
    plan.rows = res.rows;
    plan.cols = res.cols;
    plan.flows = res.partial_plan;

    auto index_of = [](const std::vector<NodeId>& nodes, NodeId v) {
        return static_cast<std::uint32_t>(std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
    };
    std::vector<double> a, b;
    for (const auto& w : res.residual_source) a.push_back(w.mass);
    for (const auto& w : res.residual_target) b.push_back(w.mass);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double delta = std::min(a[i], b[j]);
        if (delta > 0.0) {
            plan.flows.push_back({index_of(plan.rows, res.residual_source[i].node),
                                  index_of(plan.cols, res.residual_target[j].node), delta});
        }
        a[i] -= delta;
        b[j] -= delta;
        if (a[i] <= 0.0) {
            ++i;
        } else {
            ++j;
        }
    }
    return plan;
}

}  // namespace orc
