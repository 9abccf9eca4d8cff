#pragma once

#include "orc/graph.hpp"
#include "orc/measure.hpp"
#include "orc/transport.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace orc {

inline constexpr Hops kDefaultShellDepth = 3;

/// How mass is matched inside one shell.
///  - greedy: pairs in ascending (u, v) node-id order, f = min(a_u, b_v).
///  - maxflow: a bipartite max-flow over the shell's pairs against the current
///    residuals, so each shell moves as much mass as it can.
enum class ShellStrategy { greedy, maxflow };

std::string_view strategy_name(ShellStrategy s) noexcept;
std::optional<ShellStrategy> parse_strategy(std::string_view name) noexcept;

struct SupportPair {
    std::uint32_t row;
    std::uint32_t col;

    friend bool operator==(const SupportPair&, const SupportPair&) = default;
};

/// Support pairs grouped by exact distance. shells[r] holds the pairs at
/// distance r (r = 0..depth) in ascending (row, col) order; every other pair
/// is in `overflow`, with its distance available through `distances`.
struct ShellPartition {
    Hops depth = 0;
    std::vector<std::vector<SupportPair>> shells;
    std::vector<SupportPair> overflow;
    DistanceMatrix distances;
};

/// Result of the shell-wise partial transport and its residual bound
///   U_l = sum_r r * m_r + r_bar * R_l,   kappa_lb = 1 - U_l / d(x, y).
struct RSBoundResult {
    std::vector<double> shell_mass;  // m_0 .. m_l
    double residual = 0.0;           // R_l
    Hops r_bar = 0;                  // 0 when R_l == 0
    double upper_bound = 0.0;        // U_l >= W1
    double kappa_lb = 0.0;
    Hops d_xy = 0;

    std::vector<NodeId> rows;  // support of mu_x
    std::vector<NodeId> cols;  // support of mu_y
    /// Mass moved inside shells 0..l, by support index; one entry per
    /// positive allocation, in allocation order.
    std::vector<PlanEntry> partial_plan;
    /// Positive final residuals a^(l+1) and b^(l+1), keyed by node id.
    SparseDistribution residual_source;
    SparseDistribution residual_target;

    double transported() const noexcept;
};

/// Groups pairs of `dist` into shells 0..depth and overflow.
ShellPartition build_shells(const DistanceMatrix& dist, Hops depth);

/// Runs the shell-wise transport over a prebuilt partition. `shells` must be
/// built over the supports of mu_x (rows) and mu_y (cols). Throws
/// `Error(internal)` if a positive residual pair has no known distance.
RSBoundResult greedy_shell_transport(const LocalMeasure& mu_x, const LocalMeasure& mu_y,
                                     const ShellPartition& shells, ShellStrategy strategy, Hops d_xy);

/// Bound for a given pair of measures. The greedy strategy runs a lazy kernel
/// that resolves pair distances on demand: equality, adjacency, a common
/// neighbour, then a truncated BFS row (cap d_xy + 2k) from the source node.
/// The maxflow strategy uses the materialized route below.
RSBoundResult rs_bound(const Graph& g, const LocalMeasure& mu_x, const LocalMeasure& mu_y, Hops d_xy,
                       Hops depth = kDefaultShellDepth, ShellStrategy strategy = ShellStrategy::greedy);

/// pairwise_distances -> build_shells -> greedy_shell_transport.
RSBoundResult rs_bound_materialized(const Graph& g, const LocalMeasure& mu_x, const LocalMeasure& mu_y,
                                    Hops d_xy, Hops depth = kDefaultShellDepth,
                                    ShellStrategy strategy = ShellStrategy::greedy);

CurvatureResult rs_lower_bound(const Graph& g, NodeId x, NodeId y, Hops k = kDefaultHops,
                               double alpha = kDefaultAlpha, Hops depth = kDefaultShellDepth,
                               ShellStrategy strategy = ShellStrategy::greedy);

/// Completes the partial plan into a full coupling by filling the residuals
/// with a northwest-corner plan (any coupling of the residuals works). Rows
/// and cols are the supports; `cost` is left unset.
TransportPlan complete_coupling(const RSBoundResult& res);

}  // namespace orc
