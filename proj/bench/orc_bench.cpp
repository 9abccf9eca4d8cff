#include "orc/error.hpp"
#include "orc/experiment.hpp"
#include "orc/kernels.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>

using namespace orc;

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

template <class Fn>
std::vector<double> time_runs(int repeat, Fn&& fn) {
    std::vector<double> out;
    for (int i = 0; i < repeat; ++i) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        out.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs parallel kernels, exact vs rs_lb"};
    std::string model = "ba";
    GraphSpec spec;
    Hops k = kDefaultHops;
    double alpha = kDefaultAlpha;
    Hops depth = kDefaultShellDepth;
    int repeat = 3;
    std::string out_path;
    app.add_option("--model", model, "er, ba, ws or grid")->check(CLI::IsMember({"er", "ba", "ws", "grid"}));
    app.add_option("--n", spec.n, "Node count");
    app.add_option("--m", spec.m, "BA attachment count");
    app.add_option("--p", spec.p, "ER edge probability");
    app.add_option("--seed", spec.seed, "Graph seed");
    app.add_option("--k", k, "Walk length");
    app.add_option("--alpha", alpha, "Laziness");
    app.add_option("--l", depth, "Shell depth");
    app.add_option("--repeat", repeat, "Timed repetitions per case")->check(CLI::PositiveNumber);
    app.add_option("--out", out_path, "JSON output (stdout if omitted)");
    CLI11_PARSE(app, argc, argv);

    try {
        const GraphModel gm = *parse_model(model);
        GraphSpec full = GraphSpec::defaults(gm);
        full.n = spec.n;
        full.m = spec.m;
        full.p = spec.p;
        full.seed = spec.seed;
        const Graph g = make_graph(full);
        const auto edges = g.edges();
        std::vector<NodeId> nodes(g.node_count());
        std::iota(nodes.begin(), nodes.end(), NodeId{0});
        const MeasureCache cache(g, nodes, k, alpha, Execution::parallel);

        nlohmann::json cases = nlohmann::json::array();
        for (const auto& [name, exact, rs] : {std::tuple{"exact", true, false}, std::tuple{"rs_lb", false, true}}) {
            KernelOptions opts;
            opts.exact = exact;
            opts.rs = rs;
            opts.depth = depth;
            nlohmann::json row = {{"method", name}};
            for (Execution exec : {Execution::serial, Execution::parallel}) {
                const auto secs = time_runs(repeat, [&] { evaluate_edges(g, edges, cache, opts, exec); });
                const double med = median(secs);
                row[exec == Execution::serial ? "serial" : "parallel"] = {
                    {"seconds", secs}, {"median_seconds", med}, {"us_per_edge", 1e6 * med / edges.size()}};
            }
            row["parallel_speedup"] =
                row["serial"]["median_seconds"].get<double>() / row["parallel"]["median_seconds"].get<double>();
            cases.push_back(row);
        }
        const double exact_serial = cases[0]["serial"]["median_seconds"];
        const double rs_serial = cases[1]["serial"]["median_seconds"];
        nlohmann::json report = {
            {"graph", {{"model", model}, {"nodes", g.node_count()}, {"edges", g.edge_count()}}},
            {"k", k},
            {"alpha", alpha},
            {"l", depth},
            {"threads", max_threads()},
            {"repeat", repeat},
            {"cases", cases},
            {"rs_over_exact_serial", exact_serial / rs_serial},
        };
        if (out_path.empty()) {
            std::cout << report.dump(2) << "\n";
        } else {
            std::ofstream(out_path) << report.dump(2) << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
