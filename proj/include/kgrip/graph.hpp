#pragma once

#include <span>
#include <vector>

#include "kgrip/common.hpp"

namespace kgrip {

/// Undirected simple unweighted graph supporting edge insertion.
///
/// Edges present at construction form the base graph; every later
/// insert_edge() is appended to the insertion log, whose length is the
/// current greedy round.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);

    /// Builds a base graph from an edge list. Self-loops and duplicates are
    /// rejected with InvariantError; use load_edge_list() for lenient input.
    static Graph from_edges(int n, std::span<const Edge> edges);

    int num_nodes() const { return static_cast<int>(adj_.size()); }
    long long num_edges() const { return m_; }
    int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }
    std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
    bool has_edge(Vertex u, Vertex v) const;

    /// Number of edges inserted since construction.
    int round() const { return static_cast<int>(log_.size()); }
    std::span<const Edge> insertion_log() const { return log_; }

    void insert_edge(Vertex u, Vertex v);

    /// All edges, canonical and sorted.
    std::vector<Edge> edges() const;

    /// Number of vertex pairs that are not edges, n(n-1)/2 - m.
    long long num_non_edges() const;

    /// Full scan of symmetry, sortedness and simplicity.
    bool check_invariants() const;

private:
    void add_unchecked(Vertex u, Vertex v);

    std::vector<std::vector<Vertex>> adj_;
    long long m_ = 0;
    std::vector<Edge> log_;
};

/// Throws InvariantError naming two vertices in different components.
void assert_connected(const Graph& g);

bool is_connected(const Graph& g);

/// Component label per vertex, labels 0..c-1 in order of first vertex.
std::vector<int> connected_components(const Graph& g);

/// Induced subgraph on the largest connected component (ties: lowest label),
/// vertices renumbered in increasing original order.
Graph largest_component(const Graph& g);

/// BFS parent pointers from root; parent[root] == -1.
std::vector<Vertex> bfs_tree(const Graph& g, Vertex root);

} // namespace kgrip
