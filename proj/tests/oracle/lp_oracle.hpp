#pragma once

// Test-only oracles kept independent of the library's solvers.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace orc_test {

/// min c^T x  s.t.  A x = b, x >= 0, with b >= 0. Dense two-phase tableau
/// simplex with Bland's rule. Throws if infeasible or unbounded.
inline double lp_minimize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                          const std::vector<double>& c) {
    constexpr double eps = 1e-12;
    const std::size_t M = A.size();
    const std::size_t N = c.size();
    const std::size_t W = N + M + 1;  // x, artificials, rhs
    std::vector<std::vector<double>> T(M, std::vector<double>(W, 0.0));
    std::vector<std::size_t> basis(M);
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < N; ++j) T[i][j] = A[i][j];
        T[i][N + i] = 1.0;
        T[i][W - 1] = b[i];
        basis[i] = N + i;
    }

    auto pivot = [&](std::size_t r, std::size_t col) {
        const double p = T[r][col];
        for (double& v : T[r]) v /= p;
        for (std::size_t i = 0; i < M; ++i) {
            if (i == r) continue;
            const double f = T[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < W; ++j) T[i][j] -= f * T[r][j];
        }
        basis[r] = col;
    };

    auto optimize = [&](const std::vector<double>& cost, std::size_t allowed_cols) {
        for (int guard = 0; guard < 100000; ++guard) {
            std::size_t enter = W;
            for (std::size_t j = 0; j < allowed_cols; ++j) {
                double reduced = cost[j];
                for (std::size_t i = 0; i < M; ++i) reduced -= cost[basis[i]] * T[i][j];
                if (reduced < -1e-11) {
                    enter = j;
                    break;
                }
            }
            if (enter == W) return;
            std::size_t leave = M;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < M; ++i) {
                if (T[i][enter] > eps) {
                    const double ratio = T[i][W - 1] / T[i][enter];
                    if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == M) throw std::runtime_error("lp oracle: unbounded");
            pivot(leave, enter);
        }
        throw std::runtime_error("lp oracle: iteration limit");
    };

    std::vector<double> phase1(N + M, 0.0);
    for (std::size_t i = 0; i < M; ++i) phase1[N + i] = 1.0;
    optimize(phase1, N + M);
    double infeas = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        if (basis[i] >= N) infeas += T[i][W - 1];
    }
    if (infeas > 1e-9) throw std::runtime_error("lp oracle: infeasible");
    for (std::size_t i = 0; i < M; ++i) {
        if (basis[i] < N) continue;
        for (std::size_t j = 0; j < N; ++j) {
            if (std::abs(T[i][j]) > 1e-9) {
                pivot(i, j);
                break;
            }
        }
    }
    std::vector<double> phase2(N + M, 0.0);
    for (std::size_t j = 0; j < N; ++j) phase2[j] = c[j];
    optimize(phase2, N);
    double value = 0.0;
    for (std::size_t i = 0; i < M; ++i) value += phase2[basis[i]] * T[i][W - 1];
    return value;
}

/// Balanced transportation optimum via the LP above.
inline double transport_oracle(const std::vector<double>& supply, const std::vector<double>& demand,
                               const std::vector<std::vector<double>>& cost) {
    const std::size_t n = supply.size(), m = demand.size();
    std::vector<std::vector<double>> A(n + m, std::vector<double>(n * m, 0.0));
    std::vector<double> b(n + m), c(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            A[i][i * m + j] = 1.0;
            A[n + j][i * m + j] = 1.0;
            c[i * m + j] = cost[i][j];
        }
        b[i] = supply[i];
    }
    for (std::size_t j = 0; j < m; ++j) b[n + j] = demand[j];
    return lp_minimize(A, b, c);
}

/// Dense walk: delta_x P^k by explicit matrix-vector products over an
/// adjacency matrix.
inline std::vector<double> dense_walk(const std::vector<std::vector<int>>& adj, std::size_t x, int k) {
    const std::size_t n = adj.size();
    std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
    for (std::size_t u = 0; u < n; ++u) {
        int deg = 0;
        for (int a : adj[u]) deg += a;
        for (std::size_t v = 0; v < n; ++v) {
            if (adj[u][v]) P[u][v] = 1.0 / deg;
        }
    }
    std::vector<double> row(n, 0.0);
    row[x] = 1.0;
    for (int s = 0; s < k; ++s) {
        std::vector<double> next(n, 0.0);
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = 0; v < n; ++v) next[v] += row[u] * P[u][v];
        }
        row = next;
    }
    return row;
}

/// All-pairs hop distances by Floyd-Warshall; -1 for unreachable.
inline std::vector<std::vector<int>> floyd_warshall(const std::vector<std::vector<int>>& adj) {
    const std::size_t n = adj.size();
    constexpr int inf = 1 << 28;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (std::size_t u = 0; u < n; ++u) {
        d[u][u] = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (adj[u][v]) d[u][v] = 1;
        }
    }
    for (std::size_t w = 0; w < n; ++w)
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v)
                if (d[u][w] + d[w][v] < d[u][v]) d[u][v] = d[u][w] + d[w][v];
    for (auto& row : d)
        for (int& v : row)
            if (v >= inf) v = -1;
    return d;
}

}  // namespace orc_test
