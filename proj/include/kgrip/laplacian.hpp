#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "kgrip/graph.hpp"

namespace kgrip {

/// Relative-residual stopping rule for the iterative Laplacian solver.
struct SolverConfig {
    double residual_tol = 1e-6;
    /// 0 selects the default cap of 10*n iterations.
    int max_iters = 0;

    int iteration_cap(int n) const { return max_iters > 0 ? max_iters : 10 * std::max(n, 1); }
};

/// Graph Laplacian L = D - A in CSR form (adjacency part only; the diagonal
/// is the degree vector).
class LaplacianOperator {
public:
    explicit LaplacianOperator(const Graph& g);

    int size() const { return n_; }
    std::span<const int> row_ptr() const { return row_ptr_; }
    std::span<const Vertex> cols() const { return cols_; }
    std::span<const double> degree() const { return degree_; }

    /// y = L x, parallel over rows.
    void apply(std::span<const double> x, std::span<double> y) const;

    Eigen::MatrixXd dense() const;

private:
    int n_ = 0;
    std::vector<int> row_ptr_;
    std::vector<Vertex> cols_;
    std::vector<double> degree_;
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Solves L x = b for b with zero sum, returning the solution orthogonal to
/// the all-ones vector. Jacobi-preconditioned conjugate gradients.
/// Throws SolverError carrying the achieved residual on non-convergence.
Eigen::VectorXd solve_laplacian(const LaplacianOperator& op, const Eigen::VectorXd& rhs,
                                const SolverConfig& cfg, SolveStats* stats = nullptr);

/// Column-wise solve of L X = B; columns are independent and run in parallel.
Eigen::MatrixXd solve_laplacian_many(const LaplacianOperator& op, const Eigen::MatrixXd& rhs,
                                     const SolverConfig& cfg);

/// Column a of the pseudoinverse: solves L x = e_a - 1/n.
Eigen::VectorXd solve_lpinv_column(const Graph& g, Vertex a, const SolverConfig& cfg);
Eigen::VectorXd solve_lpinv_column(const LaplacianOperator& op, Vertex a, const SolverConfig& cfg);

/// Centers each column (removes its mean).
void center_columns(Eigen::MatrixXd& m);

} // namespace kgrip
