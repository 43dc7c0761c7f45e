#include "kgrip/laplacian.hpp"

#include <cmath>
#include <sstream>

#include "kgrip/kernels.hpp"

namespace kgrip {

LaplacianOperator::LaplacianOperator(const Graph& g)
    : n_(g.num_nodes()), row_ptr_(g.num_nodes() + 1, 0), degree_(g.num_nodes()) {
    cols_.reserve(static_cast<std::size_t>(2 * g.num_edges()));
    for (Vertex u = 0; u < n_; ++u) {
        auto nb = g.neighbors(u);
        cols_.insert(cols_.end(), nb.begin(), nb.end());
        row_ptr_[u + 1] = static_cast<int>(cols_.size());
        degree_[u] = static_cast<double>(nb.size());
    }
}

void LaplacianOperator::apply(std::span<const double> x, std::span<double> y) const {
    kernels::laplacian_apply_parallel(row_ptr_, cols_, degree_, x, y);
}

Eigen::MatrixXd LaplacianOperator::dense() const {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n_, n_);
    for (int u = 0; u < n_; ++u) {
        L(u, u) = degree_[u];
        for (int k = row_ptr_[u]; k < row_ptr_[u + 1]; ++k)
            L(u, cols_[k]) = -1.0;
    }
    return L;
}

void center_columns(Eigen::MatrixXd& m) {
    if (m.rows() == 0)
        return;
    m.rowwise() -= m.colwise().mean();
}

Eigen::VectorXd solve_laplacian(const LaplacianOperator& op, const Eigen::VectorXd& rhs,
                                const SolverConfig& cfg, SolveStats* stats) {
    const int n = op.size();
    Eigen::VectorXd b = rhs.array() - rhs.mean();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        if (stats)
            *stats = {0, 0.0};
        return x;
    }

    auto apply = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
        op.apply(std::span<const double>(in.data(), n), std::span<double>(out.data(), n));
    };
    Eigen::VectorXd inv_diag(n);
    for (int i = 0; i < n; ++i)
        inv_diag[i] = op.degree()[i] > 0 ? 1.0 / op.degree()[i] : 1.0;

    Eigen::VectorXd r = b;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    Eigen::VectorXd Ap(n);
    double rz = r.dot(z);
    const int cap = cfg.iteration_cap(n);
    const double target = cfg.residual_tol * bnorm;

    int it = 0;
    double rnorm = r.norm();
    while (rnorm > target && it < cap) {
        apply(p, Ap);
        const double pAp = p.dot(Ap);
        if (!(pAp > 0.0))
            break;
        const double alpha = rz / pAp;
        x.noalias() += alpha * p;
        r.noalias() -= alpha * Ap;
        ++it;
        // Refresh the recursive residual periodically against drift.
        if (it % 50 == 0) {
            apply(x, Ap);
            r = b - Ap;
        }
        rnorm = r.norm();
        z = inv_diag.cwiseProduct(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }

    x.array() -= x.mean();
    Eigen::VectorXd check(n);
    apply(x, check);
    const double achieved = (check - b).norm() / bnorm;
    if (stats)
        *stats = {it, achieved};
    // A small slack over the target absorbs the re-centering and rounding.
    if (!(achieved <= 2.0 * cfg.residual_tol) && !(achieved <= 1e-13)) {
        std::ostringstream msg;
        msg << "conjugate gradients did not converge after " << it
            << " iterations (relative residual " << achieved << ", target " << cfg.residual_tol << ")";
        throw SolverError(msg.str(), achieved);
    }
    return x;
}

Eigen::MatrixXd solve_laplacian_many(const LaplacianOperator& op, const Eigen::MatrixXd& rhs,
                                     const SolverConfig& cfg) {
    Eigen::MatrixXd out(rhs.rows(), rhs.cols());
    const Eigen::Index cols = rhs.cols();
    std::vector<std::string> failures(cols);
    std::vector<double> achieved(cols, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
    for (Eigen::Index j = 0; j < cols; ++j) {
        try {
            out.col(j) = solve_laplacian(op, rhs.col(j), cfg);
        } catch (const SolverError& e) {
            failures[j] = e.what();
            achieved[j] = e.achieved();
        }
    }
    for (Eigen::Index j = 0; j < cols; ++j)
        if (!failures[j].empty())
            throw SolverError(failures[j], achieved[j]);
    return out;
}

Eigen::VectorXd solve_lpinv_column(const LaplacianOperator& op, Vertex a, const SolverConfig& cfg) {
    const int n = op.size();
    Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, -1.0 / n);
    rhs[a] += 1.0;
    return solve_laplacian(op, rhs, cfg);
}

Eigen::VectorXd solve_lpinv_column(const Graph& g, Vertex a, const SolverConfig& cfg) {
    return solve_lpinv_column(LaplacianOperator(g), a, cfg);
}

} // namespace kgrip
