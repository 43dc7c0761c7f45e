#include "kgrip/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kgrip::kernels {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0)
        omp_set_num_threads(n);
#else
    (void)n;
#endif
}

void laplacian_apply_serial(std::span<const int> row_ptr, std::span<const Vertex> cols,
                            std::span<const double> degree, std::span<const double> x,
                            std::span<double> y) {
    const int n = static_cast<int>(degree.size());
    for (int u = 0; u < n; ++u) {
        double s = degree[u] * x[u];
        for (int k = row_ptr[u]; k < row_ptr[u + 1]; ++k)
            s -= x[cols[k]];
        y[u] = s;
    }
}

void laplacian_apply_parallel(std::span<const int> row_ptr, std::span<const Vertex> cols,
                              std::span<const double> degree, std::span<const double> x,
                              std::span<double> y) {
    const int n = static_cast<int>(degree.size());
#pragma omp parallel for schedule(static) if (n > 2048)
    for (int u = 0; u < n; ++u) {
        double s = degree[u] * x[u];
        for (int k = row_ptr[u]; k < row_ptr[u + 1]; ++k)
            s -= x[cols[k]];
        y[u] = s;
    }
}

namespace {

inline double pair_gain(const Eigen::MatrixXd& columns, std::span<const int> slot, const Edge& e,
                        double n) {
    const int ia = slot.empty() ? e.a : slot[e.a];
    const int ib = slot.empty() ? e.b : slot[e.b];
    const auto ca = columns.col(ia);
    const auto cb = columns.col(ib);
    const Eigen::Index rows = columns.rows();
    double bih = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double d = ca[i] - cb[i];
        bih += d * d;
    }
    const double resistance = (ca[e.a] - cb[e.a]) - (ca[e.b] - cb[e.b]);
    return n * bih / (1.0 + resistance);
}

} // namespace

void pair_gains_serial(const Eigen::MatrixXd& columns, std::span<const int> slot,
                       std::span<const Edge> pairs, double n, std::span<double> out) {
    for (std::size_t i = 0; i < pairs.size(); ++i)
        out[i] = pair_gain(columns, slot, pairs[i], n);
}

void pair_gains_parallel(const Eigen::MatrixXd& columns, std::span<const int> slot,
                         std::span<const Edge> pairs, double n, std::span<double> out) {
    const long long count = static_cast<long long>(pairs.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i)
        out[i] = pair_gain(columns, slot, pairs[i], n);
}

void sherman_morrison_serial(Eigen::MatrixXd& lpinv, Vertex a, Vertex b) {
    const Eigen::VectorXd d = lpinv.col(a) - lpinv.col(b);
    const double scale = 1.0 / (1.0 + d[a] - d[b]);
    const Eigen::Index n = lpinv.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double f = scale * d[j];
        for (Eigen::Index i = 0; i < n; ++i)
            lpinv(i, j) -= f * d[i];
    }
}

void sherman_morrison_parallel(Eigen::MatrixXd& lpinv, Vertex a, Vertex b) {
    const Eigen::VectorXd d = lpinv.col(a) - lpinv.col(b);
    const double scale = 1.0 / (1.0 + d[a] - d[b]);
    const Eigen::Index n = lpinv.rows();
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < n; ++j) {
        const double f = scale * d[j];
        for (Eigen::Index i = 0; i < n; ++i)
            lpinv(i, j) -= f * d[i];
    }
}

} // namespace kgrip::kernels
