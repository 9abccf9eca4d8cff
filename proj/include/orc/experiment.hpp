#pragma once

#include "orc/graph.hpp"
#include "orc/kernels.hpp"
#include "orc/rs_bound.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace orc {

inline constexpr const char* kToolkitVersion = "0.3.0";
inline constexpr int kReportSchemaVersion = 1;

enum class GraphModel { er, ba, ws, grid, edge_list };

std::string_view model_name(GraphModel m) noexcept;
std::optional<GraphModel> parse_model(std::string_view name) noexcept;

/// Generator choice plus its parameters. Defaults are the repo's desk-scale
/// configs: ER n=300 p=0.03, BA n=300 m=3, WS n=300 ring_k=6 beta=0.1,
/// grid 20x20.
struct GraphSpec {
    GraphModel model = GraphModel::grid;
    std::size_t n = 300;
    double p = 0.03;
    std::size_t m = 3;
    std::size_t ring_k = 6;
    double beta = 0.1;
    std::size_t rows = 20;
    std::size_t cols = 20;
    std::uint64_t seed = 1;
    std::string path;  // edge_list only

    static GraphSpec defaults(GraphModel model);
};

Graph make_graph(const GraphSpec& spec);

struct ExperimentConfig {
    GraphSpec graph;
    Hops k = kDefaultHops;
    double alpha = kDefaultAlpha;
    Hops depth = kDefaultShellDepth;
    ShellStrategy strategy = ShellStrategy::greedy;
    bool run_exact = true;
    bool run_rs = true;
    std::optional<std::size_t> sample_edges;  // nullopt: every edge
    std::uint64_t sample_seed = 1;
    std::size_t bins = 30;
    double hist_lo = -1.5;
    double hist_hi = 1.0;
    bool serial = false;
    std::string external_bound_path;  // CSV "x,y,kappa"; empty when unused

    /// Throws `Error(config)` describing the first invalid field.
    void validate() const;
};

struct Aggregates {
    std::size_t edge_count = 0;
    std::optional<double> mean_abs_gap;
    std::optional<double> max_abs_gap;
    std::optional<double> mean_abs_gap_external;
    std::optional<double> mean_t_exact_ns;
    std::optional<double> mean_t_rs_ns;
    std::optional<double> speedup;  // mean exact time / mean rs time
};

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> edges;        // bins + 1 boundaries
    std::vector<std::size_t> counts;  // bins
};

struct ExperimentReport {
    ExperimentConfig config;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::vector<EdgeRecord> records;
    Aggregates aggregates;
    std::map<std::string, Histogram> histograms;  // keyed by method name
    std::string started_at;                       // UTC ISO-8601
    double wall_seconds = 0.0;
    int threads = 1;
};

/// Means over the records; the gap only over records carrying both values.
/// Throws `Error(config)` on an empty record list.
Aggregates compute_metrics(std::span<const EdgeRecord> records);

/// Uniform bins over [lo, hi), last bin closed; values outside are clamped
/// into the end bins.
Histogram export_histogram(std::span<const double> values, std::size_t bins, double lo, double hi);

/// Edges to evaluate: all edges, or a uniform sample (without replacement)
/// returned in ascending order.
std::vector<Edge> select_edges(const Graph& g, std::optional<std::size_t> sample, std::uint64_t seed);

/// Per-edge externally computed bounds keyed by (min, max) endpoint.
std::map<Edge, double> read_external_bounds(const std::string& path);

ExperimentReport run_experiment(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config, const Graph& g);

nlohmann::json config_to_json(const ExperimentConfig& config);
nlohmann::json report_to_json(const ExperimentReport& report);

/// Removes every timing-dependent field (per-record timings, timing means,
/// speedup, run metadata). Two runs with the same config agree byte-for-byte
/// after this.
nlohmann::json strip_timing(nlohmann::json report);

/// Columns: x,y,d,kappa_exact,kappa_rs,t_exact_ns,t_rs_ns (absent values
/// left empty).
void write_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace orc
