#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "kgrip/graph.hpp"
#include "kgrip/laplacian.hpp"
#include "kgrip/rng.hpp"

namespace kgrip {

/// Spanning tree as parent pointers; parent[root] == -1.
struct SpanningTree {
    std::vector<Vertex> parent;
    Vertex root = 0;

    std::vector<Edge> edges() const;
};

/// Uniform spanning tree via Wilson's loop-erased random walks.
SpanningTree sample_ust(const Graph& g, Vertex root, Rng& rng);

/// Uniform spanning tree among those containing the existing edge {a,b}:
/// Wilson's algorithm started from the two-component forest {a}, {b}.
/// The result is rooted at a with parent[b] == a.
SpanningTree sample_ust_with_edge(const Graph& g, Vertex a, Vertex b, Rng& rng);

/// n-1 edges of g, acyclic, spanning.
bool is_spanning_tree(const Graph& g, const SpanningTree& t);

/// Adds to acc[v], for every v, the signed number of edges of the BFS path
/// pivot -> v that the tree path pivot -> v also traverses (+1 same
/// direction, -1 opposite). Averaged over uniform trees this is R(pivot, v).
void aggregate_tree(const SpanningTree& t, std::span<const Vertex> bfs_parent, Vertex pivot,
                    std::span<double> acc);

struct UstConfig {
    /// Target absolute accuracy of the diagonal estimate.
    double epsilon = 0.1;
    /// Sample count constant: tau = ceil(c_ust * ln(n) / epsilon^2).
    double c_ust = 1.0;
    /// Oldest rounds are merged pairwise beyond this many.
    int max_rounds = 64;
};

int ust_sample_count(int n, const UstConfig& cfg);

struct DiagEstimate {
    Eigen::VectorXd values;
    double epsilon = 0.0;
};

/// Trees sampled so far, grouped by the round whose graph they belong to,
/// with the mixing weights that make them a uniform sample of the current graph.
struct UstRepository {
    Vertex pivot = 0;
    std::vector<Vertex> bfs_parent;
    int total = 0;
    std::vector<std::vector<SpanningTree>> rounds;
    std::vector<double> weights;
    /// resistance[v] estimates R(pivot, v) on the current graph.
    Eigen::VectorXd resistance;
    Eigen::VectorXd pivot_column;
    /// Graph round the repository matches.
    int graph_round = 0;
    std::uint64_t seed = 0;
    UstConfig config;

    std::size_t stored_trees() const;
};

/// Highest-degree vertex, smallest id on ties.
Vertex choose_pivot(const Graph& g);

struct DiagResult {
    DiagEstimate diag;
    UstRepository repository;
};

/// Approximates diag(L^+) from tau uniform spanning trees plus one solved
/// pseudoinverse column at the pivot.
DiagResult approx_diag_lpinv(const Graph& g, const UstConfig& cfg, std::uint64_t seed,
                             const SolverConfig& solver);

struct DiagUpdateReport {
    /// R_{G'}(a,b) = R_G(a,b) / (1 + R_G(a,b)), the weight of the new round.
    double omega = 0.0;
    int sampled = 0;
};

/// Updates repository and estimate after exactly one insertion: old rounds
/// are down-weighted by (1 - omega), ceil(omega * t) trees containing the new
/// edge are sampled, and R is mixed as omega * R_new + (1 - omega) * R.
DiagUpdateReport approx_update_diag(const Graph& g_new, UstRepository& repo, DiagEstimate& diag,
                                    const SolverConfig& solver);

} // namespace kgrip
