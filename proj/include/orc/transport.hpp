#pragma once

#include "orc/graph.hpp"
#include "orc/measure.hpp"

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orc {

// =============================================================================
// Transport plans
// =============================================================================

struct PlanEntry {
    std::uint32_t row;
    std::uint32_t col;
    double mass;
};

/// Sparse coupling between a source support (`rows`) and a target support
/// (`cols`). `cost` is the ground-distance matrix the plan was priced with;
/// it may be null for plans assembled outside a solver.
struct TransportPlan {
    std::vector<NodeId> rows;
    std::vector<NodeId> cols;
    std::vector<PlanEntry> flows;
    std::shared_ptr<const DistanceMatrix> cost;

    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;

    /// Sum of cost * mass. Requires `cost`.
    double total_cost() const;
};

struct TransportSolution {
    TransportPlan plan;
    double cost = 0.0;
    // Dual potentials: row_potential[i] + col_potential[j] <= cost(i, j), with
    // equality wherever the plan carries mass.
    std::vector<double> row_potential;
    std::vector<double> col_potential;
};

/// Exact balanced transportation problem
///   min sum c_ij x_ij  s.t.  sum_j x_ij = supply_i, sum_i x_ij = demand_j, x >= 0
/// solved as a primal-dual min-cost flow: Dijkstra on reduced costs sets
/// integer potentials, then a max-flow saturates the zero-reduced-cost
/// subnetwork. Costs are hop counts; `kBeyondCap` entries are treated as
/// infinite and rejected. Rows and columns of the returned plan are indices.
TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  const DistanceMatrix& cost);

struct CertificateReport {
    double dual_infeasibility = 0.0;   // max(f_i + g_j - c_ij, 0)
    double slackness_violation = 0.0;  // max x_ij * |c_ij - f_i - g_j|
    double duality_gap = 0.0;          // |primal - dual|
    double marginal_error = 0.0;       // max |row/col sum - prescribed mass|

    bool ok(double tol) const {
        return dual_infeasibility <= tol && slackness_violation <= tol && duality_gap <= tol &&
               marginal_error <= tol;
    }
};

/// Re-derives every optimality condition of a solution from scratch.
CertificateReport check_certificate(const TransportSolution& sol, std::span<const double> supply,
                                    std::span<const double> demand, const DistanceMatrix& cost);

// =============================================================================
// Curvature
// =============================================================================

enum class CurvatureMethod { exact, rs_lb };

std::string_view method_name(CurvatureMethod m) noexcept;

struct CurvatureResult {
    NodeId x = 0;
    NodeId y = 0;
    Hops d_xy = 0;
    double w1 = 0.0;  // exact W1, or its upper bound for rs_lb
    double kappa = 0.0;
    CurvatureMethod method = CurvatureMethod::exact;
    std::chrono::nanoseconds elapsed{0};
};

/// d(x, y) for curvature purposes; throws on x == y or disconnection.
Hops curvature_distance(const Graph& g, NodeId x, NodeId y);

/// Optimal coupling of two local measures under the hop metric. Rows/cols of
/// the plan are the support node ids. Pairwise distances come from truncated
/// BFS with cap d(x, y) + 2k.
TransportSolution exact_transport(const Graph& g, const LocalMeasure& mu_x, const LocalMeasure& mu_y,
                                  Hops d_xy);

double exact_w1(const Graph& g, const LocalMeasure& mu_x, const LocalMeasure& mu_y, Hops d_xy);
double exact_w1(const Graph& g, const LocalMeasure& mu_x, const LocalMeasure& mu_y);

/// kappa = 1 - W1(mu_x, mu_y) / d(x, y).
CurvatureResult exact_orc(const Graph& g, NodeId x, NodeId y, Hops k = kDefaultHops,
                          double alpha = kDefaultAlpha);

// =============================================================================
// Plan validation
// =============================================================================

struct PlanCheck {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Checks that `plan` is a coupling of mu_x and mu_y: nonnegative entries,
/// row sums equal mu_x, column sums equal mu_y, all within `tol`. Measure
/// mass outside the plan's rows/cols counts as a violation.
PlanCheck verify_plan(const TransportPlan& plan, const LocalMeasure& mu_x, const LocalMeasure& mu_y,
                      double tol = 1e-10);

}  // namespace orc
