#include "orc/kernels.hpp"

#include "orc/error.hpp"
#include "orc/transport.hpp"

#include <chrono>
#include <exception>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace orc {

int max_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

// Keeps the first exception thrown inside a parallel loop.
class FirstError {
public:
    template <typename Fn>
    void run(Fn&& fn) noexcept {
        try {
            fn();
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(orc_first_error)
#endif
            if (!error_) error_ = std::current_exception();
        }
    }

    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::exception_ptr error_;
};

std::int64_t since_ns(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
}

EdgeRecord evaluate_one(const Graph& g, const Edge& pair, const MeasureCache& cache, const KernelOptions& opts) {
    EdgeRecord rec;
    rec.x = pair.first;
    rec.y = pair.second;
    const LocalMeasure& mu_x = cache.at(rec.x);
    const LocalMeasure& mu_y = cache.at(rec.y);
    if (opts.exact) {
        const auto start = std::chrono::steady_clock::now();
        const Hops d = curvature_distance(g, rec.x, rec.y);
        const double w1 = exact_w1(g, mu_x, mu_y, d);
        rec.t_exact_ns = since_ns(start);
        rec.d = d;
        rec.kappa_exact = 1.0 - w1 / static_cast<double>(d);
    }
    if (opts.rs) {
        const auto start = std::chrono::steady_clock::now();
        const Hops d = curvature_distance(g, rec.x, rec.y);
        const RSBoundResult bound = rs_bound(g, mu_x, mu_y, d, opts.depth, opts.strategy);
        rec.t_rs_ns = since_ns(start);
        rec.d = d;
        rec.kappa_rs = bound.kappa_lb;
    }
    if (!opts.exact && !opts.rs) rec.d = curvature_distance(g, rec.x, rec.y);
    return rec;
}

}  // namespace

MeasureCache::MeasureCache(const Graph& g, std::span<const NodeId> nodes, Hops k, double alpha, Execution exec)
    : slots_(g.node_count()) {
    std::vector<NodeId> wanted;
    std::vector<char> seen(g.node_count(), 0);
    for (NodeId v : nodes) {
        if (!g.contains(v)) throw Error(ErrorCode::invalid_graph, "measure cache node out of range");
        if (!seen[v]) {
            seen[v] = 1;
            wanted.push_back(v);
        }
    }
    const auto count = static_cast<std::ptrdiff_t>(wanted.size());
    if (exec == Execution::serial) {
        for (std::ptrdiff_t i = 0; i < count; ++i) slots_[wanted[i]] = k_hop_measure(g, wanted[i], k, alpha);
        return;
    }
    FirstError err;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        err.run([&] { slots_[wanted[i]] = k_hop_measure(g, wanted[i], k, alpha); });
    }
    err.rethrow();
}

const LocalMeasure& MeasureCache::at(NodeId v) const {
    if (!has(v)) {
        std::ostringstream msg;
        msg << "no cached measure for node " << v;
        throw Error(ErrorCode::internal, msg.str());
    }
    return *slots_[v];
}

std::vector<EdgeRecord> evaluate_edges(const Graph& g, std::span<const Edge> pairs, const MeasureCache& cache,
                                       const KernelOptions& opts, Execution exec) {
    std::vector<EdgeRecord> out(pairs.size());
    const auto count = static_cast<std::ptrdiff_t>(pairs.size());
    if (exec == Execution::serial) {
        for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = evaluate_one(g, pairs[i], cache, opts);
        return out;
    }
    FirstError err;
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        err.run([&] { out[i] = evaluate_one(g, pairs[i], cache, opts); });
    }
    err.rethrow();
    return out;
}

}  // namespace orc
