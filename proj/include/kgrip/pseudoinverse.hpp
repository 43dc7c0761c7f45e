#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "kgrip/graph.hpp"
#include "kgrip/laplacian.hpp"

namespace kgrip {

inline constexpr int kDefaultDenseCap = 20000;

/// L^+ = (L + J/n)^{-1} - J/n. Throws ConfigError when n exceeds `cap`
/// (use the column cache instead) and SolverError if factorization fails.
Eigen::MatrixXd pseudoinverse_dense(const Graph& g, int cap = kDefaultDenseCap);

using ColumnRef = Eigen::Ref<const Eigen::VectorXd>;

/// R(a,b) from columns a and b of the same pseudoinverse.
double effective_resistance(ColumnRef col_a, ColumnRef col_b, Vertex a, Vertex b);

/// Squared biharmonic distance ||col_a - col_b||^2.
double biharmonic_sq(ColumnRef col_a, ColumnRef col_b);

/// n * biharmonic^2 / (1 + R): the drop in total resistance from inserting {a,b}.
double gain_from_columns(ColumnRef col_a, ColumnRef col_b, Vertex a, Vertex b, int n);

/// R(G) = n * trace(L^+).
double total_resistance(const Eigen::MatrixXd& lpinv);
/// Dense pseudoinverse when n fits the cap, otherwise n column solves.
double total_resistance(const Graph& g, const SolverConfig& cfg = {1e-10, 0});

/// Exact gain of a non-edge from a dense pseudoinverse of g.
double gain_exact(const Graph& g, const Eigen::MatrixXd& lpinv, Vertex a, Vertex b);

/// Updates lpinv in place for the insertion of {a,b}.
void sherman_morrison_update(Eigen::MatrixXd& lpinv, Vertex a, Vertex b);

/// What inserting one edge does to the pseudoinverse: d = L^+ (e_a - e_b)
/// of the graph *before* insertion and R(a,b) = d[a] - d[b]. Enough to
/// replay the rank-one update on any stale column.
struct RoundUpdate {
    Edge edge;
    Eigen::VectorXd diff;
    double resistance = 0.0;

    double biharmonic_sq() const { return diff.squaredNorm(); }
    double gain() const {
        return static_cast<double>(diff.size()) * biharmonic_sq() / (1.0 + resistance);
    }
};

/// One Laplacian solve L d = e_a - e_b on g (before inserting {a,b}).
RoundUpdate solve_round_update(const LaplacianOperator& op, Edge e, const SolverConfig& cfg);

/// Brings a column computed at `stale_round` forward to `current_round` by
/// replaying the rank-one update of every in-between insertion.
/// history[r] describes the insertion that moved the graph from round r to
/// r+1; entries [stale_round, current_round) must be present.
Eigen::VectorXd refresh_column(Eigen::VectorXd column, int stale_round,
                               int current_round, std::span<const std::optional<RoundUpdate>> history);

/// On-demand cache of pseudoinverse columns for the current round, kept
/// fresh by replaying recorded rank-one updates.
class ColumnCache {
public:
    ColumnCache() = default;
    ColumnCache(const Graph& g, SolverConfig cfg);

    int round() const { return round_; }
    int num_nodes() const { return n_; }
    const SolverConfig& config() const { return cfg_; }

    /// Makes the columns of `vertices` current: refreshes stale ones and
    /// solves missing ones (in parallel). Returns the number of new solves.
    int ensure(const Graph& g, std::span<const Vertex> vertices);

    bool contains(Vertex v) const;
    /// Column for v; must be current (call ensure first).
    const Eigen::VectorXd& column(Vertex v) const;

    /// Stacks current columns of `vertices` into a matrix; slot[v] gives the
    /// matrix column for each listed vertex, -1 elsewhere.
    Eigen::MatrixXd gather(std::span<const Vertex> vertices, std::vector<int>& slot) const;

    /// Records the insertion that advances the cache by one round.
    void advance(const Graph& g_after, RoundUpdate update);

    std::size_t solved_columns() const { return solves_; }

private:
    struct Entry {
        Eigen::VectorXd column;
        int round = 0;
    };

    int n_ = 0;
    int round_ = 0;
    SolverConfig cfg_;
    std::unordered_map<Vertex, Entry> columns_;
    std::vector<std::optional<RoundUpdate>> history_;
    std::size_t solves_ = 0;
};

} // namespace kgrip
