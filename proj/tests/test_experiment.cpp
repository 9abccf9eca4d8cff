#include "doctest.h"

#include "orc/error.hpp"
#include "orc/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace orc;

namespace {

EdgeRecord record(double exact, double rs, std::int64_t te, std::int64_t tr) {
    EdgeRecord r;
    r.kappa_exact = exact;
    r.kappa_rs = rs;
    r.t_exact_ns = te;
    r.t_rs_ns = tr;
    return r;
}

ExperimentConfig grid2x2() {
    ExperimentConfig c;
    c.graph = GraphSpec::defaults(GraphModel::grid);
    c.graph.rows = 2;
    c.graph.cols = 2;
    return c;
}

std::string temp_path(const char* name) { return std::string(ORC_TEST_TMP) + "/" + name; }

}  // namespace

TEST_CASE("compute_metrics") {
    const std::vector<EdgeRecord> recs{record(0.5, 0.4, 10'000'000, 1'000'000),
                                       record(0.2, -0.1, 10'000'000, 1'000'000)};
    const auto a = compute_metrics(recs);
    CHECK(a.edge_count == 2);
    CHECK(*a.mean_abs_gap == doctest::Approx(0.2));
    CHECK(*a.max_abs_gap == doctest::Approx(0.3));
    CHECK(*a.speedup == doctest::Approx(10.0));
    CHECK(*a.mean_t_exact_ns == doctest::Approx(1e7));

    std::vector<EdgeRecord> rs_only(1);
    rs_only[0].kappa_rs = 0.3;
    rs_only[0].t_rs_ns = 5;
    const auto b = compute_metrics(rs_only);
    CHECK_FALSE(b.mean_abs_gap.has_value());
    CHECK_FALSE(b.speedup.has_value());
    CHECK_THROWS_AS(compute_metrics(std::vector<EdgeRecord>{}), Error);
}

TEST_CASE("export_histogram") {
    const std::vector<double> halves{0.5, 0.5};
    const auto h = export_histogram(halves, 2, 0.0, 1.0);
    CHECK(h.counts == std::vector<std::size_t>{0, 2});
    CHECK(h.edges == std::vector<double>{0.0, 0.5, 1.0});

    const auto empty = export_histogram(std::vector<double>{}, 3, 0.0, 1.0);
    CHECK(empty.counts == std::vector<std::size_t>{0, 0, 0});

    const std::vector<double> outside{-2.0, 2.0};
    CHECK(export_histogram(outside, 2, 0.0, 1.0).counts == std::vector<std::size_t>{1, 1});
    CHECK_THROWS_AS(export_histogram(halves, 2, 1.0, 1.0), Error);
    CHECK_THROWS_AS(export_histogram(halves, 0, 0.0, 1.0), Error);
}

TEST_CASE("run_experiment on the 2x2 grid") {
    const auto report = run_experiment(grid2x2());
    CHECK(report.node_count == 4);
    REQUIRE(report.records.size() == 4);
    for (const auto& r : report.records) {
        CHECK(std::abs(*r.kappa_exact - 0.6) < 1e-12);
        CHECK(std::abs(*r.kappa_rs - 0.6) < 1e-12);
    }
    CHECK(*report.aggregates.mean_abs_gap < 1e-12);
    CHECK(report.histograms.count("exact") == 1);
    CHECK(report.histograms.count("rs_lb") == 1);
}

TEST_CASE("run_experiment from an edge-list file with one method") {
    ExperimentConfig c;
    c.graph.model = GraphModel::edge_list;
    c.graph.path = ORC_TEST_DATA "/p2.txt";
    c.run_exact = false;
    const auto report = run_experiment(c);
    REQUIRE(report.records.size() == 1);
    CHECK(std::abs(*report.records[0].kappa_rs - 0.8) < 1e-12);
    CHECK_FALSE(report.records[0].kappa_exact.has_value());
    CHECK_FALSE(report.records[0].t_exact_ns.has_value());
    CHECK_FALSE(report.aggregates.mean_abs_gap.has_value());
    CHECK(report.histograms.count("exact") == 0);

    c.graph.path = "/nonexistent/graph.txt";
    CHECK_THROWS_AS(run_experiment(c), Error);
}

TEST_CASE("stripped reports are deterministic and gaps recompute from records") {
    ExperimentConfig c;
    c.graph = GraphSpec::defaults(GraphModel::ba);
    c.graph.n = 60;
    c.k = 2;
    const auto first = run_experiment(c);
    const auto second = run_experiment(c);
    CHECK(strip_timing(report_to_json(first)).dump() == strip_timing(report_to_json(second)).dump());

    const auto j = strip_timing(report_to_json(first));
    CHECK_FALSE(j.contains("metadata"));
    CHECK_FALSE(j["aggregates"].contains("speedup"));
    CHECK_FALSE(j["records"][0].contains("t_exact_ns"));
    CHECK(report_to_json(first)["records"][0].contains("t_rs_ns"));

    double sum = 0.0, worst = 0.0;
    for (const auto& r : j["records"]) {
        const double gap = std::abs(r["kappa_exact"].get<double>() - r["kappa_rs"].get<double>());
        sum += gap;
        worst = std::max(worst, gap);
    }
    CHECK(j["aggregates"]["mean_abs_gap"].get<double>() == doctest::Approx(sum / j["records"].size()));
    CHECK(j["aggregates"]["max_abs_gap"].get<double>() == worst);

    c.sample_edges = 10;
    const auto sampled = run_experiment(c);
    CHECK(sampled.records.size() == 10);
    CHECK(sampled.edge_count == first.edge_count);
}

TEST_CASE("serial and parallel experiments agree") {
    ExperimentConfig c;
    c.graph = GraphSpec::defaults(GraphModel::ws);
    c.graph.n = 50;
    c.graph.ring_k = 4;
    auto par = report_to_json(run_experiment(c));
    c.serial = true;
    auto ser = report_to_json(run_experiment(c));
    par = strip_timing(par);
    ser = strip_timing(ser);
    par["config"].erase("serial");
    ser["config"].erase("serial");
    CHECK(par == ser);
}

TEST_CASE("external bounds are attached and scored") {
    const auto path = temp_path("external.csv");
    {
        std::ofstream out(path);
        out << "x,y,kappa\n0,1,0.5\n3,2,0.1\n";
    }
    const auto bounds = read_external_bounds(path);
    CHECK(bounds.size() == 2);
    CHECK(bounds.at(Edge{2, 3}) == 0.1);

    auto c = grid2x2();
    c.external_bound_path = path;
    const auto report = run_experiment(c);
    int attached = 0;
    for (const auto& r : report.records) attached += r.kappa_external.has_value();
    CHECK(attached == 2);
    CHECK(*report.aggregates.mean_abs_gap_external == doctest::Approx(0.3));
    CHECK(report.histograms.count("external") == 1);
    std::remove(path.c_str());

    CHECK_THROWS_AS(read_external_bounds("/nonexistent/bounds.csv"), Error);
}

TEST_CASE("config validation") {
    auto bad = [](auto mutate) {
        auto c = grid2x2();
        mutate(c);
        try {
            c.validate();
        } catch (const Error& e) {
            return e.code() == ErrorCode::config;
        }
        return false;
    };
    CHECK(bad([](ExperimentConfig& c) { c.k = 0; }));
    CHECK(bad([](ExperimentConfig& c) { c.alpha = 1.0; }));
    CHECK(bad([](ExperimentConfig& c) { c.depth = -1; }));
    CHECK(bad([](ExperimentConfig& c) { c.run_exact = c.run_rs = false; }));
    CHECK(bad([](ExperimentConfig& c) { c.bins = 0; }));
    CHECK(bad([](ExperimentConfig& c) { c.hist_lo = 2.0; }));
    CHECK(bad([](ExperimentConfig& c) { c.sample_edges = 0; }));
    CHECK_NOTHROW(grid2x2().validate());
}

TEST_CASE("csv output") {
    const auto report = run_experiment(grid2x2());
    std::ostringstream out;
    write_csv(out, report);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,d,kappa_exact,kappa_rs,t_exact_ns,t_rs_ns");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("parse_model") {
    CHECK(parse_model("ba") == GraphModel::ba);
    CHECK_FALSE(parse_model("tree").has_value());
    CHECK(model_name(GraphModel::ws) == "ws");
}
