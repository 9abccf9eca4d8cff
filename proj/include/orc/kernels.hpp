#pragma once

#include "orc/graph.hpp"
#include "orc/measure.hpp"
#include "orc/rs_bound.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace orc {

// Per-edge curvature kernels. `parallel` runs the edge loop under OpenMP,
// `serial` is the reference loop.

enum class Execution { serial, parallel };

/// Measures indexed by node id; only the requested nodes are populated.
class MeasureCache {
public:
    MeasureCache() = default;
    MeasureCache(const Graph& g, std::span<const NodeId> nodes, Hops k, double alpha, Execution exec);

    const LocalMeasure& at(NodeId v) const;
    bool has(NodeId v) const noexcept { return v < slots_.size() && slots_[v].has_value(); }

private:
    std::vector<std::optional<LocalMeasure>> slots_;
};

struct KernelOptions {
    bool exact = true;
    bool rs = true;
    Hops depth = kDefaultShellDepth;
    ShellStrategy strategy = ShellStrategy::greedy;
};

struct EdgeRecord {
    NodeId x = 0;
    NodeId y = 0;
    Hops d = 1;
    std::optional<double> kappa_exact;
    std::optional<double> kappa_rs;
    std::optional<double> kappa_external;
    std::optional<std::int64_t> t_exact_ns;
    std::optional<std::int64_t> t_rs_ns;
};

/// Computes the requested curvatures for every pair in `pairs` (each pair
/// must be connected and distinct). Timers wrap each per-pair solve, not
/// measure construction.
std::vector<EdgeRecord> evaluate_edges(const Graph& g, std::span<const Edge> pairs, const MeasureCache& cache,
                                       const KernelOptions& opts, Execution exec);

int max_threads() noexcept;

}  // namespace orc
