#include "orc/transport.hpp"

#include "orc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace orc {

std::vector<double> TransportPlan::row_sums() const {
    std::vector<double> sums(rows.size(), 0.0);
    for (const auto& e : flows) sums[e.row] += e.mass;
    return sums;
}

std::vector<double> TransportPlan::col_sums() const {
    std::vector<double> sums(cols.size(), 0.0);
    for (const auto& e : flows) sums[e.col] += e.mass;
    return sums;
}

double TransportPlan::total_cost() const {
    if (!cost) throw Error(ErrorCode::internal, "transport plan has no cost matrix attached");
    double total = 0.0;
    for (const auto& e : flows) total += static_cast<double>((*cost)(e.row, e.col)) * e.mass;
    return total;
}

// =============================================================================
// Primal-dual min-cost flow on the dense bipartite network
// =============================================================================

namespace {

constexpr double kRelativeEps = 1e-14;
constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

// Node layout: rows [0, n), cols [n, n + m), source n + m, sink n + m + 1.
class PrimalDual {
public:
    PrimalDual(std::vector<double> supply, std::vector<double> demand, std::vector<long long> cost,
               double eps)
        : n_(supply.size()),
          m_(demand.size()),
          excess_(std::move(supply)),
          deficit_(std::move(demand)),
          cost_(std::move(cost)),
          flow_(n_ * m_, 0.0),
          potential_(n_ + m_ + 2, 0),
          eps_(eps) {}

    void run() {
        const std::size_t guard = 64 * (n_ + m_ + 2) + 1024;
        for (std::size_t phase = 0; phase < guard; ++phase) {
            if (remaining_excess() <= eps_) return;
            if (!reprice()) return;  // sink unreachable: leftover is rounding noise
            if (max_flow() <= 0.0) return;
        }
        throw Error(ErrorCode::internal, "transport solver exceeded its phase budget");
    }

    double flow(std::size_t i, std::size_t j) const { return flow_[i * m_ + j]; }
    long long potential(std::size_t v) const { return potential_[v]; }
    std::size_t rows() const { return n_; }
    std::size_t cols() const { return m_; }

private:
    std::size_t source() const { return n_ + m_; }
    std::size_t sink() const { return n_ + m_ + 1; }
    long long c(std::size_t i, std::size_t j) const { return cost_[i * m_ + j]; }

    double remaining_excess() const {
        double total = 0.0;
        for (double e : excess_) total += e;
        return total;
    }

    // Dijkstra from the source on reduced costs; potentials shift by
    // min(dist, dist_sink) so every residual arc keeps a nonnegative reduced
    // cost and shortest-path arcs become tight.
    bool reprice() {
        const std::size_t V = n_ + m_ + 2;
        dist_.assign(V, kInf);
        done_.assign(V, 0);
        dist_[source()] = 0;
        auto& p = potential_;
        for (;;) {
            std::size_t u = V;
            long long best = kInf;
            for (std::size_t v = 0; v < V; ++v) {
                if (!done_[v] && dist_[v] < best) {
                    best = dist_[v];
                    u = v;
                }
            }
            if (u == V) break;
            done_[u] = 1;
            if (u == sink()) break;
            auto relax = [&](std::size_t v, long long reduced) {
                const long long cand = best + reduced;
                if (cand < dist_[v]) dist_[v] = cand;
            };
            if (u == source()) {
                for (std::size_t i = 0; i < n_; ++i) {
                    if (excess_[i] > eps_) relax(i, p[u] - p[i]);
                }
            } else if (u < n_) {
                for (std::size_t j = 0; j < m_; ++j) relax(n_ + j, c(u, j) + p[u] - p[n_ + j]);
            } else {
                const std::size_t j = u - n_;
                for (std::size_t i = 0; i < n_; ++i) {
                    if (flow_[i * m_ + j] > eps_) relax(i, -c(i, j) + p[u] - p[i]);
                }
                if (deficit_[j] > eps_) relax(sink(), p[u] - p[sink()]);
            }
        }
        const long long to_sink = dist_[sink()];
        if (to_sink >= kInf) return false;
        for (std::size_t v = 0; v < V; ++v) p[v] += std::min(dist_[v], to_sink);
        return true;
    }

    // Admissible arcs are residual arcs with zero reduced cost.
    bool tight_row_col(std::size_t i, std::size_t j) const {
        return c(i, j) + potential_[i] - potential_[n_ + j] == 0;
    }

    bool build_levels() {
        const std::size_t V = n_ + m_ + 2;
        level_.assign(V, -1);
        queue_.clear();
        level_[source()] = 0;
        queue_.push_back(source());
        const auto& p = potential_;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const std::size_t u = queue_[head];
            auto visit = [&](std::size_t v) {
                if (level_[v] < 0) {
                    level_[v] = level_[u] + 1;
                    queue_.push_back(v);
                }
            };
            if (u == source()) {
                for (std::size_t i = 0; i < n_; ++i) {
                    if (excess_[i] > eps_ && p[u] == p[i]) visit(i);
                }
            } else if (u < n_) {
                for (std::size_t j = 0; j < m_; ++j) {
                    if (tight_row_col(u, j)) visit(n_ + j);
                }
            } else if (u < n_ + m_) {
                const std::size_t j = u - n_;
                if (deficit_[j] > eps_ && p[u] == p[sink()]) visit(sink());
                for (std::size_t i = 0; i < n_; ++i) {
                    if (flow_[i * m_ + j] > eps_ && tight_row_col(i, j)) visit(i);
                }
            }
        }
        return level_[sink()] >= 0;
    }

    // Blocking-flow DFS with current-arc pointers. For a column node, arc 0 is
    // the sink and arcs 1..n are reverse arcs to rows.
    double push(std::size_t u, double limit) {
        if (u == sink()) return limit;
        const auto& p = potential_;
        double sent = 0.0;
        if (u == source()) {
            for (auto& i = cursor_[u]; i < n_ && sent < limit; ++i) {
                if (excess_[i] <= eps_ || p[u] != p[i] || level_[i] != level_[u] + 1) continue;
                const double got = push(i, std::min(limit - sent, excess_[i]));
                excess_[i] -= got;
                sent += got;
                if (sent >= limit) break;
            }
        } else if (u < n_) {
            for (auto& j = cursor_[u]; j < m_; ++j) {
                const std::size_t v = n_ + j;
                if (level_[v] != level_[u] + 1 || !tight_row_col(u, j)) continue;
                const double got = push(v, limit - sent);
                flow_[u * m_ + j] += got;
                sent += got;
                if (sent >= limit) break;
            }
        } else {
            const std::size_t j = u - n_;
            for (auto& a = cursor_[u]; a <= n_; ++a) {
                if (a == 0) {
                    if (deficit_[j] <= eps_ || p[u] != p[sink()] || level_[sink()] != level_[u] + 1) continue;
                    const double got = std::min(limit - sent, deficit_[j]);
                    deficit_[j] -= got;
                    sent += got;
                } else {
                    const std::size_t i = a - 1;
                    double& back = flow_[i * m_ + j];
                    if (back <= eps_ || level_[i] != level_[u] + 1 || !tight_row_col(i, j)) continue;
                    const double got = push(i, std::min(limit - sent, back));
                    back -= got;
                    sent += got;
                }
                if (sent >= limit) break;
            }
        }
        return sent;
    }

    double max_flow() {
        double total = 0.0;
        while (build_levels()) {
            cursor_.assign(n_ + m_ + 2, 0);
            const double got = push(source(), std::numeric_limits<double>::infinity());
            if (got <= eps_) break;
            total += got;
        }
        return total;
    }

    std::size_t n_, m_;
    std::vector<double> excess_, deficit_;
    std::vector<long long> cost_;
    std::vector<double> flow_;
    std::vector<long long> potential_;
    double eps_;

    std::vector<long long> dist_;
    std::vector<char> done_;
    std::vector<int> level_;
    std::vector<std::size_t> queue_;
    std::vector<std::size_t> cursor_;
};

}  // namespace

TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  const DistanceMatrix& cost) {
    if (cost.rows() != supply.size() || cost.cols() != demand.size()) {
        throw Error(ErrorCode::config, "cost matrix shape does not match supply/demand lengths");
    }
    double supply_total = 0.0, demand_total = 0.0;
    for (double s : supply) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw Error(ErrorCode::config, "supply masses must be finite and >= 0");
        supply_total += s;
    }
    for (double d : demand) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw Error(ErrorCode::config, "demand masses must be finite and >= 0");
        demand_total += d;
    }
    if (std::abs(supply_total - demand_total) > 1e-10) {
        std::ostringstream msg;
        msg << "unbalanced marginals: supply " << supply_total << " vs demand " << demand_total;
        throw Error(ErrorCode::unbalanced, msg.str());
    }

    // Zero-mass rows and columns cannot carry flow; drop them.
    std::vector<std::size_t> live_rows, live_cols;
    for (std::size_t i = 0; i < supply.size(); ++i) {
        if (supply[i] > 0.0) live_rows.push_back(i);
    }
    for (std::size_t j = 0; j < demand.size(); ++j) {
        if (demand[j] > 0.0) live_cols.push_back(j);
    }
    std::vector<long long> live_cost(live_rows.size() * live_cols.size());
    for (std::size_t a = 0; a < live_rows.size(); ++a) {
        for (std::size_t b = 0; b < live_cols.size(); ++b) {
            const Hops h = cost(live_rows[a], live_cols[b]);
            if (h == kBeyondCap) throw Error(ErrorCode::disconnected, "disconnected supports");
            if (h < 0) throw Error(ErrorCode::config, "transport costs must be nonnegative");
            live_cost[a * live_cols.size() + b] = h;
        }
    }
    std::vector<double> live_supply, live_demand;
    for (std::size_t i : live_rows) live_supply.push_back(supply[i]);
    for (std::size_t j : live_cols) live_demand.push_back(demand[j]);

    const double eps = kRelativeEps * std::max(1.0, supply_total);
    PrimalDual solver(std::move(live_supply), std::move(live_demand), std::move(live_cost), eps);
    solver.run();

    TransportSolution sol;
    auto& plan = sol.plan;
    plan.rows.resize(supply.size());
    plan.cols.resize(demand.size());
    std::iota(plan.rows.begin(), plan.rows.end(), NodeId{0});
    std::iota(plan.cols.begin(), plan.cols.end(), NodeId{0});
    plan.cost = std::make_shared<const DistanceMatrix>(cost);

    for (std::size_t a = 0; a < live_rows.size(); ++a) {
        for (std::size_t b = 0; b < live_cols.size(); ++b) {
            const double f = solver.flow(a, b);
            if (f > 0.0) {
                plan.flows.push_back({static_cast<std::uint32_t>(live_rows[a]),
                                      static_cast<std::uint32_t>(live_cols[b]), f});
                sol.cost += f * static_cast<double>(cost(live_rows[a], live_cols[b]));
            }
        }
    }

    // Duals: f_i = -p_i, g_j = p_j. Dropped rows/cols get the tightest
    // feasible value.
    constexpr double kUnset = std::numeric_limits<double>::infinity();
    sol.row_potential.assign(supply.size(), kUnset);
    sol.col_potential.assign(demand.size(), kUnset);
    for (std::size_t a = 0; a < live_rows.size(); ++a)
        sol.row_potential[live_rows[a]] = -static_cast<double>(solver.potential(a));
    for (std::size_t b = 0; b < live_cols.size(); ++b)
        sol.col_potential[live_cols[b]] = static_cast<double>(solver.potential(live_rows.size() + b));
    for (std::size_t i = 0; i < supply.size(); ++i) {
        if (sol.row_potential[i] != kUnset) continue;
        double best = kUnset;
        for (std::size_t j : live_cols) {
            if (cost(i, j) != kBeyondCap) best = std::min(best, cost(i, j) - sol.col_potential[j]);
        }
        sol.row_potential[i] = (best == kUnset) ? 0.0 : best;
    }
    for (std::size_t j = 0; j < demand.size(); ++j) {
        if (sol.col_potential[j] != kUnset) continue;
        double best = kUnset;
        for (std::size_t i = 0; i < supply.size(); ++i) {
            if (cost(i, j) != kBeyondCap) best = std::min(best, cost(i, j) - sol.row_potential[i]);
        }
        sol.col_potential[j] = (best == kUnset) ? 0.0 : best;
    }
    return sol;
}

CertificateReport check_certificate(const TransportSolution& sol, std::span<const double> supply,
                                    std::span<const double> demand, const DistanceMatrix& cost) {
    CertificateReport rep;
    const auto& f = sol.row_potential;
    const auto& g = sol.col_potential;
    for (std::size_t i = 0; i < supply.size(); ++i) {
        for (std::size_t j = 0; j < demand.size(); ++j) {
            if (cost(i, j) == kBeyondCap) continue;
            rep.dual_infeasibility = std::max(rep.dual_infeasibility, f[i] + g[j] - cost(i, j));
        }
    }
    double primal = 0.0;
    std::vector<double> rows(supply.size(), 0.0), cols(demand.size(), 0.0);
    for (const auto& e : sol.plan.flows) {
        const double c = cost(e.row, e.col);
        primal += c * e.mass;
        rows[e.row] += e.mass;
        cols[e.col] += e.mass;
        rep.slackness_violation = std::max(rep.slackness_violation, e.mass * std::abs(c - f[e.row] - g[e.col]));
        if (e.mass < 0.0) rep.marginal_error = std::max(rep.marginal_error, -e.mass);
    }
    double dual = 0.0;
    for (std::size_t i = 0; i < supply.size(); ++i) {
        if (supply[i] > 0.0) dual += f[i] * supply[i];
        rep.marginal_error = std::max(rep.marginal_error, std::abs(rows[i] - supply[i]));
    }
    for (std::size_t j = 0; j < demand.size(); ++j) {
        if (demand[j] > 0.0) dual += g[j] * demand[j];
        rep.marginal_error = std::max(rep.marginal_error, std::abs(cols[j] - demand[j]));
    }
    rep.duality_gap = std::max({std::abs(primal - dual), std::abs(primal - sol.cost)});
    return rep;
}

// =============================================================================
// Curvature
// =============================================================================

std::string_view method_name(CurvatureMethod m) noexcept {
    switch (m) {
        case CurvatureMethod::exact: return "exact";
        case CurvatureMethod::rs_lb: return "rs_lb";
    }
    return "unknown";
}

Hops curvature_distance(const Graph& g, NodeId x, NodeId y) {
    if (!g.contains(x) || !g.contains(y)) throw Error(ErrorCode::invalid_graph, "curvature endpoint out of range");
    if (x == y) throw Error(ErrorCode::identical_nodes, "curvature undefined for identical nodes");
    const auto d = hop_distance(g, x, y);
    if (!d) {
        std::ostringstream msg;
        msg << "nodes " << x << " and " << y << " are disconnected";
        throw Error(ErrorCode::disconnected, msg.str());
    }
    return *d;
}

namespace {

std::vector<double> masses_of(const LocalMeasure& mu) {
    std::vector<double> out;
    out.reserve(mu.mass.size());
    for (const auto& w : mu.mass) out.push_back(w.mass);
    return out;
}

}  // namespace

TransportSolution exact_transport(const Graph& g, const LocalMeasure& mu_x, const LocalMeasure& mu_y, Hops d_xy) {
    const auto src = mu_x.support();
    const auto dst = mu_y.support();
    const Hops cap = d_xy + 2 * std::max(mu_x.hop, mu_y.hop);
    const DistanceMatrix dist = pairwise_distances(g, src, dst, cap);
    if (dist.has_beyond_cap()) throw Error(ErrorCode::disconnected, "disconnected supports");
    const auto supply = masses_of(mu_x);
    const auto demand = masses_of(mu_y);
    TransportSolution sol = solve_transport(supply, demand, dist);
    sol.plan.rows = src;
    sol.plan.cols = dst;
    return sol;
}

double exact_w1(const Graph& g, const LocalMeasure& mu_x, const LocalMeasure& mu_y, Hops d_xy) {
    return exact_transport(g, mu_x, mu_y, d_xy).cost;
}

double exact_w1(const Graph& g, const LocalMeasure& mu_x, const LocalMeasure& mu_y) {
    Hops d = 0;
    if (mu_x.center != mu_y.center) {
        const auto found = hop_distance(g, mu_x.center, mu_y.center);
        if (!found) throw Error(ErrorCode::disconnected, "disconnected supports");
        d = *found;
    }
    return exact_w1(g, mu_x, mu_y, d);
}

CurvatureResult exact_orc(const Graph& g, NodeId x, NodeId y, Hops k, double alpha) {
    const auto start = std::chrono::steady_clock::now();
    CurvatureResult res;
    res.x = x;
    res.y = y;
    res.method = CurvatureMethod::exact;
    res.d_xy = curvature_distance(g, x, y);
    const auto mu_x = k_hop_measure(g, x, k, alpha);
    const auto mu_y = k_hop_measure(g, y, k, alpha);
    res.w1 = exact_w1(g, mu_x, mu_y, res.d_xy);
    res.kappa = 1.0 - res.w1 / static_cast<double>(res.d_xy);
    res.elapsed = std::chrono::steady_clock::now() - start;
    return res;
}

// =============================================================================
// Plan validation
// =============================================================================

PlanCheck verify_plan(const TransportPlan& plan, const LocalMeasure& mu_x, const LocalMeasure& mu_y, double tol) {
    PlanCheck check;
    auto fail = [&](const std::string& what) {
        check.ok = false;
        check.violations.push_back(what);
    };
    for (const auto& e : plan.flows) {
        if (e.row >= plan.rows.size() || e.col >= plan.cols.size()) {
            fail("plan entry references a row/col outside the plan");
            return check;
        }
        if (e.mass < -tol) {
            std::ostringstream msg;
            msg << "negative flow " << e.mass << " on (" << plan.rows[e.row] << ", " << plan.cols[e.col] << ")";
            fail(msg.str());
        }
    }
    auto compare = [&](const char* side, std::span<const NodeId> nodes, const std::vector<double>& sums,
                       const LocalMeasure& mu) {
        double covered = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double want = mu.at(nodes[i]);
            covered += want;
            if (std::abs(sums[i] - want) > tol) {
                std::ostringstream msg;
                msg.precision(17);
                msg << side << " sum at node " << nodes[i] << " is " << sums[i] << ", expected " << want;
                fail(msg.str());
            }
        }
        if (std::abs(covered - mu.total()) > tol) {
            std::ostringstream msg;
            msg << side << " measure has mass on nodes missing from the plan";
            fail(msg.str());
        }
    };
    compare("row", plan.rows, plan.row_sums(), mu_x);
    compare("column", plan.cols, plan.col_sums(), mu_y);
    return check;
}

}  // namespace orc
