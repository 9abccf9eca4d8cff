#include "doctest.h"

#include "oracle/lp_oracle.hpp"
#include "orc/error.hpp"
#include "orc/generators.hpp"
#include "orc/measure.hpp"

#include <cmath>
#include <random>

using namespace orc;

namespace {

std::vector<std::vector<int>> to_dense(const Graph& g) {
    std::vector<std::vector<int>> adj(g.node_count(), std::vector<int>(g.node_count(), 0));
    for (const auto& [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
    return adj;
}

double mass_sum(const SparseDistribution& d) {
    double s = 0.0;
    for (const auto& w : d) s += w.mass;
    return s;
}

}  // namespace

TEST_CASE("transition_step") {
    const Graph p2 = build_graph(2, {{0, 1}});
    const SparseDistribution at0{{0, 1.0}};
    CHECK(transition_step(p2, at0) == SparseDistribution{{1, 1.0}});

    const Graph c4 = build_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    const auto one = transition_step(c4, at0);
    CHECK(one == SparseDistribution{{1, 0.5}, {3, 0.5}});
    CHECK(transition_step(c4, one) == SparseDistribution{{0, 0.5}, {2, 0.5}});
}

TEST_CASE("transition_step rejects mass on an isolated node") {
    const Graph g = build_graph(3, {{0, 1}});
    const SparseDistribution at2{{2, 1.0}};
    try {
        transition_step(g, at2);
        FAIL("expected isolated-node error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::isolated_node);
        CHECK(std::string(e.what()).find("random walk undefined at isolated node") != std::string::npos);
    }
    CHECK_THROWS_AS(k_hop_measure(g, 2, 1, 0.4), Error);
    // scratch must be clean after the throw
    const SparseDistribution at0{{0, 1.0}};
    CHECK(transition_step(g, at0) == SparseDistribution{{1, 1.0}});
}

TEST_CASE("k_hop_measure hand cases") {
    const Graph p2 = build_graph(2, {{0, 1}});
    const auto mu = k_hop_measure(p2, 0, 1, 0.4);
    REQUIRE(mu.mass.size() == 2);
    CHECK(mu.at(0) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(mu.at(1) == doctest::Approx(0.6).epsilon(1e-15));

    const Graph k3 = build_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    const auto muk3 = k_hop_measure(k3, 0, 1, 0.4);
    CHECK(std::abs(muk3.at(0) - 0.4) < 1e-15);
    CHECK(std::abs(muk3.at(1) - 0.3) < 1e-15);
    CHECK(std::abs(muk3.at(2) - 0.3) < 1e-15);

    const auto back = k_hop_measure(p2, 0, 2, 0.4);
    REQUIRE(back.mass.size() == 1);
    CHECK(std::abs(back.at(0) - 1.0) < 1e-15);
}

TEST_CASE("k_hop_measure argument checks") {
    const Graph p2 = build_graph(2, {{0, 1}});
    CHECK_THROWS_AS(k_hop_measure(p2, 0, 1, 0.0), Error);
    CHECK_THROWS_AS(k_hop_measure(p2, 0, 1, 1.0), Error);
    CHECK_THROWS_AS(k_hop_measure(p2, 0, 0, 0.5), Error);
    CHECK_THROWS_AS(k_hop_measure(p2, 5, 1, 0.5), Error);
}

TEST_CASE("measure invariants and the dense matrix-power oracle") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + rng() % 9;  // n <= 12
        const Graph g = gen_er(n, 0.35, rng());
        const auto adj = to_dense(g);
        for (NodeId x = 0; x < n; ++x) {
            if (g.degree(x) == 0) continue;
            for (Hops k = 1; k <= 4; ++k) {
                for (double alpha : {0.2, 0.4, 0.8}) {
                    const auto mu = k_hop_measure(g, x, k, alpha);
                    CHECK(std::abs(mu.total() - 1.0) < 1e-12);
                    CHECK(mu.at(x) >= alpha);
                    const auto ball = k_hop_neighborhood(g, x, k);
                    for (const auto& w : mu.mass) {
                        CHECK(std::binary_search(ball.begin(), ball.end(), w.node));
                        CHECK(w.mass >= 0.0);
                    }
                    const auto walk = orc_test::dense_walk(adj, x, k);
                    for (NodeId y = 0; y < n; ++y) {
                        const double expected = (1.0 - alpha) * walk[y] + (y == x ? alpha : 0.0);
                        CHECK(std::abs(mu.at(y) - expected) < 1e-12);
                    }
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("the walk component is shared across laziness values") {
    const Graph g = gen_ba(60, 2, 8);
    for (NodeId x = 0; x < 60; x += 7) {
        for (Hops k = 1; k <= 3; ++k) {
            const double a1 = 0.2, a2 = 0.8;
            const auto m1 = k_hop_measure(g, x, k, a1);
            const auto m2 = k_hop_measure(g, x, k, a2);
            REQUIRE(m1.mass.size() == m2.mass.size());
            for (std::size_t i = 0; i < m1.mass.size(); ++i) {
                const NodeId v = m1.mass[i].node;
                const double dirac = v == x ? 1.0 : 0.0;
                const double w1 = (m1.mass[i].mass - a1 * dirac) / (1.0 - a1);
                const double w2 = (m2.mass[i].mass - a2 * dirac) / (1.0 - a2);
                CHECK(std::abs(w1 - w2) < 1e-10);
            }
        }
    }
}

TEST_CASE("push steps preserve mass") {
    const Graph g = gen_ws(40, 4, 0.3, 4);
    SparseDistribution d{{0, 1.0}};
    for (int step = 0; step < 8; ++step) {
        d = transition_step(g, d);
        CHECK(std::abs(mass_sum(d) - 1.0) < 1e-12);
        CHECK(std::is_sorted(d.begin(), d.end(), [](auto& a, auto& b) { return a.node < b.node; }));
    }
}
