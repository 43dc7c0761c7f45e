#include "kgrip/pseudoinverse.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Cholesky>

#include "kgrip/kernels.hpp"

namespace kgrip {

Eigen::MatrixXd pseudoinverse_dense(const Graph& g, int cap) {
    const int n = g.num_nodes();
    if (n > cap)
        throw ConfigError("dense pseudoinverse of n=" + std::to_string(n) + " exceeds the cap of " +
                          std::to_string(cap) + "; use column-cache mode");
    if (n == 0)
        return {};
    Eigen::MatrixXd M = LaplacianOperator(g).dense();
    M.array() += 1.0 / n;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw SolverError("Cholesky factorization of L + J/n failed (graph disconnected?)", 0.0);
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    inv.array() -= 1.0 / n;
    // symmetrize away rounding asymmetry
    return 0.5 * (inv + inv.transpose());
}

double effective_resistance(ColumnRef col_a, ColumnRef col_b, Vertex a, Vertex b) {
    if (a == b)
        throw InvariantError("effective resistance needs two distinct vertices");
    return col_a[a] + col_b[b] - col_a[b] - col_b[a];
}

double biharmonic_sq(ColumnRef col_a, ColumnRef col_b) {
    return (col_a - col_b).squaredNorm();
}

double gain_from_columns(ColumnRef col_a, ColumnRef col_b, Vertex a, Vertex b, int n) {
    return n * biharmonic_sq(col_a, col_b) / (1.0 + effective_resistance(col_a, col_b, a, b));
}

double total_resistance(const Eigen::MatrixXd& lpinv) {
    return static_cast<double>(lpinv.rows()) * lpinv.trace();
}

double total_resistance(const Graph& g, const SolverConfig& cfg) {
    const int n = g.num_nodes();
    if (n <= 1)
        return 0.0;
    if (n <= 4000)
        return total_resistance(pseudoinverse_dense(g));
    LaplacianOperator op(g);
    double trace = 0.0;
#pragma omp parallel for reduction(+ : trace) schedule(dynamic, 8)
    for (Vertex v = 0; v < n; ++v)
        trace += solve_lpinv_column(op, v, cfg)[v];
    return n * trace;
}

double gain_exact(const Graph& g, const Eigen::MatrixXd& lpinv, Vertex a, Vertex b) {
    if (a == b)
        throw InvariantError("gain of a self-pair is undefined");
    if (g.has_edge(a, b))
        throw InvariantError("gain requested for existing edge {" + std::to_string(a) + "," +
                             std::to_string(b) + "}");
    return gain_from_columns(lpinv.col(a), lpinv.col(b), a, b, g.num_nodes());
}

void sherman_morrison_update(Eigen::MatrixXd& lpinv, Vertex a, Vertex b) {
    kernels::sherman_morrison_parallel(lpinv, a, b);
}

RoundUpdate solve_round_update(const LaplacianOperator& op, Edge e, const SolverConfig& cfg) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(op.size());
    rhs[e.a] = 1.0;
    rhs[e.b] = -1.0;
    RoundUpdate u;
    u.edge = e;
    u.diff = solve_laplacian(op, rhs, cfg);
    u.resistance = u.diff[e.a] - u.diff[e.b];
    return u;
}

Eigen::VectorXd refresh_column(Eigen::VectorXd column, int stale_round,
                               int current_round,
                               std::span<const std::optional<RoundUpdate>> history) {
    for (int r = stale_round; r < current_round; ++r) {
        if (r < 0 || r >= static_cast<int>(history.size()) || !history[r])
            throw InvariantError("no update record for round " + std::to_string(r) +
                                 "; re-solve the column from scratch");
        const RoundUpdate& u = *history[r];
        const double coupling = column[u.edge.a] - column[u.edge.b];
        column -= (coupling / (1.0 + u.resistance)) * u.diff;
    }
    return column;
}

ColumnCache::ColumnCache(const Graph& g, SolverConfig cfg)
    : n_(g.num_nodes()), round_(g.round()), cfg_(cfg), history_(g.round()) {}

bool ColumnCache::contains(Vertex v) const {
    auto it = columns_.find(v);
    return it != columns_.end() && it->second.round == round_;
}

const Eigen::VectorXd& ColumnCache::column(Vertex v) const {
    auto it = columns_.find(v);
    if (it == columns_.end() || it->second.round != round_)
        throw InvariantError("column " + std::to_string(v) + " is not current");
    return it->second.column;
}

int ColumnCache::ensure(const Graph& g, std::span<const Vertex> vertices) {
    if (g.round() != round_)
        throw InvariantError("column cache is at round " + std::to_string(round_) +
                             " but the graph is at round " + std::to_string(g.round()));
    std::vector<Vertex> missing;
    for (Vertex v : vertices) {
        auto it = columns_.find(v);
        if (it == columns_.end()) {
            missing.push_back(v);
        } else if (it->second.round != round_) {
            it->second.column =
                refresh_column(std::move(it->second.column), it->second.round, round_, history_);
            it->second.round = round_;
        }
    }
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    if (missing.empty())
        return 0;

    LaplacianOperator op(g);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Constant(n_, static_cast<Eigen::Index>(missing.size()), -1.0 / n_);
    for (std::size_t j = 0; j < missing.size(); ++j)
        rhs(missing[j], static_cast<Eigen::Index>(j)) += 1.0;
    Eigen::MatrixXd solved = solve_laplacian_many(op, rhs, cfg_);
    for (std::size_t j = 0; j < missing.size(); ++j)
        columns_[missing[j]] = Entry{solved.col(static_cast<Eigen::Index>(j)), round_};
    solves_ += missing.size();
    return static_cast<int>(missing.size());
}

Eigen::MatrixXd ColumnCache::gather(std::span<const Vertex> vertices, std::vector<int>& slot) const {
    slot.assign(n_, -1);
    Eigen::MatrixXd out(n_, static_cast<Eigen::Index>(vertices.size()));
    for (std::size_t j = 0; j < vertices.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) = column(vertices[j]);
        slot[vertices[j]] = static_cast<int>(j);
    }
    return out;
}

void ColumnCache::advance(const Graph& g_after, RoundUpdate update) {
    if (g_after.round() != round_ + 1)
        throw InvariantError("column cache must advance exactly one round at a time");
    if (history_.size() < static_cast<std::size_t>(round_ + 1))
        history_.resize(round_ + 1);
    history_[round_] = std::move(update);
    ++round_;
}

} // namespace kgrip
