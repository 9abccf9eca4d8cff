#include "orc/experiment.hpp"

#include "orc/error.hpp"
#include "orc/generators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace orc {

std::string_view model_name(GraphModel m) noexcept {
    switch (m) {
        case GraphModel::er: return "er";
        case GraphModel::ba: return "ba";
        case GraphModel::ws: return "ws";
        case GraphModel::grid: return "grid";
        case GraphModel::edge_list: return "edge_list";
    }
    return "unknown";
}

std::optional<GraphModel> parse_model(std::string_view name) noexcept {
    for (auto m : {GraphModel::er, GraphModel::ba, GraphModel::ws, GraphModel::grid, GraphModel::edge_list}) {
        if (model_name(m) == name) return m;
    }
    return std::nullopt;
}

GraphSpec GraphSpec::defaults(GraphModel model) {
    GraphSpec spec;
    spec.model = model;
    return spec;
}

Graph make_graph(const GraphSpec& spec) {
    switch (spec.model) {
        case GraphModel::er: return gen_er(spec.n, spec.p, spec.seed);
        case GraphModel::ba: return gen_ba(spec.n, spec.m, spec.seed);
        case GraphModel::ws: return gen_ws(spec.n, spec.ring_k, spec.beta, spec.seed);
        case GraphModel::grid: return gen_grid(spec.rows, spec.cols);
        case GraphModel::edge_list:
            if (spec.path.empty()) throw Error(ErrorCode::config, "edge_list model requires a file path");
            return read_edge_list_file(spec.path);
    }
    throw Error(ErrorCode::config, "unknown graph model");
}

void ExperimentConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::config, "--alpha must lie in (0, 1)");
    if (k < 1) throw Error(ErrorCode::config, "--k must be at least 1");
    if (depth < 0) throw Error(ErrorCode::config, "--l must be nonnegative");
    if (!run_exact && !run_rs) throw Error(ErrorCode::config, "--methods selects nothing");
    if (bins < 1) throw Error(ErrorCode::config, "--bins must be at least 1");
    if (!(hist_lo < hist_hi)) throw Error(ErrorCode::config, "histogram range requires lo < hi");
    if (sample_edges && *sample_edges == 0) throw Error(ErrorCode::config, "--sample-edges must be positive");
    if (graph.model == GraphModel::edge_list && graph.path.empty()) {
        throw Error(ErrorCode::config, "--edge-list requires a path");
    }
}

// =============================================================================
// Metrics
// =============================================================================

Aggregates compute_metrics(std::span<const EdgeRecord> records) {
    if (records.empty()) throw Error(ErrorCode::config, "cannot aggregate an empty record list");
    Aggregates agg;
    agg.edge_count = records.size();

    double gap_sum = 0.0, gap_max = 0.0, ext_sum = 0.0;
    double t_exact = 0.0, t_rs = 0.0;
    std::size_t gap_n = 0, ext_n = 0, exact_n = 0, rs_n = 0;
    for (const auto& r : records) {
        if (r.kappa_exact && r.kappa_rs) {
            const double gap = std::abs(*r.kappa_exact - *r.kappa_rs);
            gap_sum += gap;
            gap_max = std::max(gap_max, gap);
            ++gap_n;
        }
        if (r.kappa_exact && r.kappa_external) {
            ext_sum += std::abs(*r.kappa_exact - *r.kappa_external);
            ++ext_n;
        }
        if (r.t_exact_ns) {
            t_exact += static_cast<double>(*r.t_exact_ns);
            ++exact_n;
        }
        if (r.t_rs_ns) {
            t_rs += static_cast<double>(*r.t_rs_ns);
            ++rs_n;
        }
    }
    if (gap_n > 0) {
        agg.mean_abs_gap = gap_sum / static_cast<double>(gap_n);
        agg.max_abs_gap = gap_max;
    }
    if (ext_n > 0) agg.mean_abs_gap_external = ext_sum / static_cast<double>(ext_n);
    if (exact_n > 0) agg.mean_t_exact_ns = t_exact / static_cast<double>(exact_n);
    if (rs_n > 0) agg.mean_t_rs_ns = t_rs / static_cast<double>(rs_n);
    if (agg.mean_t_exact_ns && agg.mean_t_rs_ns && *agg.mean_t_rs_ns > 0.0) {
        agg.speedup = *agg.mean_t_exact_ns / *agg.mean_t_rs_ns;
    }
    return agg;
}

Histogram export_histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
    if (bins < 1) throw Error(ErrorCode::config, "histogram needs at least one bin");
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorCode::config, "histogram range requires finite lo < hi");
    }
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(bins, 0);
    h.edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
    h.edges[bins] = hi;
    for (double v : values) {
        if (std::isnan(v)) throw Error(ErrorCode::config, "histogram input contains NaN");
        const double pos = std::floor((v - lo) / (hi - lo) * static_cast<double>(bins));
        std::size_t idx = 0;
        if (pos >= static_cast<double>(bins)) {
            idx = bins - 1;
        } else if (pos > 0.0) {
            idx = static_cast<std::size_t>(pos);
        }
        ++h.counts[idx];
    }
    return h;
}

// =============================================================================
// Runner
// =============================================================================

std::vector<Edge> select_edges(const Graph& g, std::optional<std::size_t> sample, std::uint64_t seed) {
    std::vector<Edge> edges = g.edges();
    if (!sample || *sample >= edges.size()) return edges;
    // Partial Fisher-Yates with portable index draws.
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < *sample; ++i) {
        const std::uint64_t span = edges.size() - i;
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t draw;
        do {
            draw = rng();
        } while (draw >= limit);
        std::swap(edges[i], edges[i + draw % span]);
    }
    edges.resize(*sample);
    std::sort(edges.begin(), edges.end());
    return edges;
}

std::map<Edge, double> read_external_bounds(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open external bound file \"" + path + "\"");
    std::map<Edge, double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        long long x = -1, y = -1;
        double kappa = 0.0;
        if (!(row >> x >> y >> kappa) || x < 0 || y < 0) {
            if (line_no == 1) continue;  // header
            std::ostringstream msg;
            msg << path << ":" << line_no << ": expected \"x,y,kappa\"";
            throw Error(ErrorCode::io, msg.str());
        }
        const auto a = static_cast<NodeId>(std::min(x, y));
        const auto b = static_cast<NodeId>(std::max(x, y));
        out[{a, b}] = kappa;
    }
    return out;
}

namespace {

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    return run_experiment(config, make_graph(config.graph));
}

ExperimentReport run_experiment(const ExperimentConfig& config, const Graph& g) {
    config.validate();
    const auto wall_start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.config = config;
    report.started_at = utc_now();
    report.node_count = g.node_count();
    report.edge_count = g.edge_count();
    report.threads = config.serial ? 1 : max_threads();

    const std::vector<Edge> edges = select_edges(g, config.sample_edges, config.sample_seed);
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * edges.size());
    for (const auto& [x, y] : edges) {
        endpoints.push_back(x);
        endpoints.push_back(y);
    }
    const Execution exec = config.serial ? Execution::serial : Execution::parallel;
    const MeasureCache cache(g, endpoints, config.k, config.alpha, exec);

    KernelOptions opts;
    opts.exact = config.run_exact;
    opts.rs = config.run_rs;
    opts.depth = config.depth;
    opts.strategy = config.strategy;
    report.records = evaluate_edges(g, edges, cache, opts, exec);

    if (!config.external_bound_path.empty()) {
        const auto external = read_external_bounds(config.external_bound_path);
        for (auto& rec : report.records) {
            const auto it = external.find({std::min(rec.x, rec.y), std::max(rec.x, rec.y)});
            if (it != external.end()) rec.kappa_external = it->second;
        }
    }

    if (!report.records.empty()) report.aggregates = compute_metrics(report.records);

    auto add_histogram = [&](const char* name, auto field) {
        std::vector<double> values;
        bool any = false;
        for (const auto& rec : report.records) {
            if (const auto& v = rec.*field) {
                values.push_back(*v);
                any = true;
            }
        }
        if (any || report.records.empty()) {
            report.histograms[name] = export_histogram(values, config.bins, config.hist_lo, config.hist_hi);
        }
    };
    if (config.run_exact) add_histogram("exact", &EdgeRecord::kappa_exact);
    if (config.run_rs) add_histogram("rs_lb", &EdgeRecord::kappa_rs);
    if (!config.external_bound_path.empty()) add_histogram("external", &EdgeRecord::kappa_external);

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return report;
}

// =============================================================================
// Serialization
// =============================================================================

nlohmann::json config_to_json(const ExperimentConfig& c) {
    using nlohmann::json;
    json graph = {{"model", model_name(c.graph.model)}};
    switch (c.graph.model) {
        case GraphModel::er:
            graph["n"] = c.graph.n;
            graph["p"] = c.graph.p;
            graph["seed"] = c.graph.seed;
            break;
        case GraphModel::ba:
            graph["n"] = c.graph.n;
            graph["m"] = c.graph.m;
            graph["seed"] = c.graph.seed;
            break;
        case GraphModel::ws:
            graph["n"] = c.graph.n;
            graph["ring_k"] = c.graph.ring_k;
            graph["beta"] = c.graph.beta;
            graph["seed"] = c.graph.seed;
            break;
        case GraphModel::grid:
            graph["rows"] = c.graph.rows;
            graph["cols"] = c.graph.cols;
            break;
        case GraphModel::edge_list:
            graph["path"] = c.graph.path;
            break;
    }
    json methods = json::array();
    if (c.run_exact) methods.push_back("exact");
    if (c.run_rs) methods.push_back("rs_lb");
    json out = {
        {"graph", graph},
        {"k", c.k},
        {"alpha", c.alpha},
        {"l", c.depth},
        {"strategy", strategy_name(c.strategy)},
        {"methods", methods},
        {"sample_edges", c.sample_edges ? json(*c.sample_edges) : json("all")},
        {"sample_seed", c.sample_seed},
        {"bins", c.bins},
        {"hist_range", {c.hist_lo, c.hist_hi}},
        {"serial", c.serial},
    };
    if (!c.external_bound_path.empty()) out["external_bound"] = c.external_bound_path;
    return out;
}

nlohmann::json report_to_json(const ExperimentReport& r) {
    using nlohmann::json;
    json records = json::array();
    for (const auto& rec : r.records) {
        json row = {{"x", rec.x}, {"y", rec.y}, {"d", rec.d}};
        if (rec.kappa_exact) row["kappa_exact"] = *rec.kappa_exact;
        if (rec.kappa_rs) row["kappa_rs"] = *rec.kappa_rs;
        if (rec.kappa_external) row["kappa_external"] = *rec.kappa_external;
        if (rec.t_exact_ns) row["t_exact_ns"] = *rec.t_exact_ns;
        if (rec.t_rs_ns) row["t_rs_ns"] = *rec.t_rs_ns;
        records.push_back(std::move(row));
    }
    const auto& a = r.aggregates;
    json agg = {{"edge_count", a.edge_count}};
    if (a.mean_abs_gap) agg["mean_abs_gap"] = *a.mean_abs_gap;
    if (a.max_abs_gap) agg["max_abs_gap"] = *a.max_abs_gap;
    if (a.mean_abs_gap_external) agg["mean_abs_gap_external"] = *a.mean_abs_gap_external;
    if (a.mean_t_exact_ns) agg["mean_t_exact_ns"] = *a.mean_t_exact_ns;
    if (a.mean_t_rs_ns) agg["mean_t_rs_ns"] = *a.mean_t_rs_ns;
    if (a.speedup) agg["speedup"] = *a.speedup;

    json hists = json::object();
    for (const auto& [name, h] : r.histograms) {
        hists[name] = {{"lo", h.lo}, {"hi", h.hi}, {"edges", h.edges}, {"counts", h.counts}};
    }
    return {
        {"schema_version", kReportSchemaVersion},
        {"toolkit_version", kToolkitVersion},
        {"config", config_to_json(r.config)},
        {"graph", {{"nodes", r.node_count}, {"edges", r.edge_count}}},
        {"records", records},
        {"aggregates", agg},
        {"histograms", hists},
        {"metadata", {{"started_at", r.started_at}, {"wall_seconds", r.wall_seconds}, {"threads", r.threads}}},
    };
}

nlohmann::json strip_timing(nlohmann::json report) {
    report.erase("metadata");
    if (auto it = report.find("records"); it != report.end()) {
        for (auto& rec : *it) {
            rec.erase("t_exact_ns");
            rec.erase("t_rs_ns");
        }
    }
    if (auto it = report.find("aggregates"); it != report.end()) {
        it->erase("mean_t_exact_ns");
        it->erase("mean_t_rs_ns");
        it->erase("speedup");
    }
    return report;
}

void write_csv(std::ostream& out, const ExperimentReport& report) {
    out << "x,y,d,kappa_exact,kappa_rs,t_exact_ns,t_rs_ns\n";
    const auto old_precision = out.precision(17);
    for (const auto& r : report.records) {
        out << r.x << ',' << r.y << ',' << r.d << ',';
        if (r.kappa_exact) out << *r.kappa_exact;
        out << ',';
        if (r.kappa_rs) out << *r.kappa_rs;
        out << ',';
        if (r.t_exact_ns) out << *r.t_exact_ns;
        out << ',';
        if (r.t_rs_ns) out << *r.t_rs_ns;
        out << '\n';
    }
    out.precision(old_precision);
}

}  // namespace orc
