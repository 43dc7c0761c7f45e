#pragma once

// Data-parallel inner loops. Every kernel has a serial reference twin that
// the tests compare against and the benchmark target times.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "kgrip/common.hpp"

namespace kgrip::kernels {

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();
/// Sets the thread count for subsequent parallel regions; n <= 0 keeps the default.
void set_threads(int n);

// y = (D - A) x for a CSR adjacency.
void laplacian_apply_serial(std::span<const int> row_ptr, std::span<const Vertex> cols,
                            std::span<const double> degree, std::span<const double> x,
                            std::span<double> y);
void laplacian_apply_parallel(std::span<const int> row_ptr, std::span<const Vertex> cols,
                              std::span<const double> degree, std::span<const double> x,
                              std::span<double> y);

/// Gains n*||c_a - c_b||^2 / (1 + R(a,b)) for pseudoinverse columns stored
/// in `columns`. `slot[v]` is the column holding vertex v; an empty span
/// means column v holds vertex v (dense pseudoinverse).
void pair_gains_serial(const Eigen::MatrixXd& columns, std::span<const int> slot,
                       std::span<const Edge> pairs, double n, std::span<double> out);
void pair_gains_parallel(const Eigen::MatrixXd& columns, std::span<const int> slot,
                         std::span<const Edge> pairs, double n, std::span<double> out);

/// In-place rank-one downdate of a dense pseudoinverse after inserting {a,b}.
void sherman_morrison_serial(Eigen::MatrixXd& lpinv, Vertex a, Vertex b);
void sherman_morrison_parallel(Eigen::MatrixXd& lpinv, Vertex a, Vertex b);

/// out[i] = f(pairs[i]). f must be safe to call concurrently.
template <class F>
void map_pairs_serial(std::span<const Edge> pairs, F&& f, std::span<double> out) {
    for (std::size_t i = 0; i < pairs.size(); ++i)
        out[i] = f(pairs[i]);
}

template <class F>
void map_pairs_parallel(std::span<const Edge> pairs, F&& f, std::span<double> out) {
    const long long count = static_cast<long long>(pairs.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i)
        out[i] = f(pairs[i]);
}

/// Runs job(i, acc) for i in [0, count) and sums the per-job accumulators
/// into a vector of length width. Jobs add integer-valued contributions, so
/// the reduction is exact and independent of scheduling.
template <class Job>
std::vector<double> accumulate_jobs_serial(int count, int width, Job&& job) {
    std::vector<double> acc(width, 0.0);
    for (int i = 0; i < count; ++i)
        job(i, std::span<double>(acc));
    return acc;
}

template <class Job>
std::vector<double> accumulate_jobs_parallel(int count, int width, Job&& job) {
    std::vector<double> total(width, 0.0);
#pragma omp parallel
    {
        std::vector<double> local(width, 0.0);
#pragma omp for schedule(dynamic, 4)
        for (int i = 0; i < count; ++i)
            job(i, std::span<double>(local));
#pragma omp critical(kgrip_accumulate)
        for (int v = 0; v < width; ++v)
            total[v] += local[v];
    }
    return total;
}

} // namespace kgrip::kernels
