#pragma once

#include <span>
#include <vector>

#include "kgrip/common.hpp"
#include "kgrip/graph.hpp"
#include "kgrip/rng.hpp"

namespace kgrip {

enum class SampleMode {
    /// Vertex pairs over all non-edges: (n(n-1)/2 - m)/k * ln(1/delta).
    GripPairs,
    /// Vertex sample for column-based evaluation: n * sqrt(ln(1/delta)/k).
    GripColumns,
    /// Non-neighbors of a focus node: (n-1-deg)/k * ln(1/delta).
    Lrip,
};

/// Sample size, rounded up and clamped to [1, universe]. For GripPairs
/// m_or_deg is the edge count, for Lrip the focus degree, unused otherwise.
/// Throws ConfigError for delta outside (0,1), k < 1 or an empty universe.
long long candidate_size(SampleMode mode, int n, long long m_or_deg, int k, double delta);

/// Every non-edge, sorted.
std::vector<Edge> all_non_edges(const Graph& g);

/// s distinct non-edges, uniform without replacement, sorted. Returns every
/// non-edge when s covers the universe.
std::vector<Edge> sample_pairs_uniform(const Graph& g, long long s, Rng& rng);

/// s distinct non-neighbors of focus (excluding focus), uniform, sorted.
std::vector<Vertex> sample_non_neighbors(const Graph& g, Vertex focus, long long s, Rng& rng);

/// s distinct vertices from pool (all vertices when empty) drawn without
/// replacement with probability proportional to max(weight, 0), sorted.
/// Zero-weight vertices only fill up the sample once positive ones run out,
/// in uniform order; all-zero weights give a uniform sample.
std::vector<Vertex> sample_weighted_vertices(std::span<const double> weights, std::span<const Vertex> pool,
                                             long long s, Rng& rng);

/// Non-edge pairs inside S x S, sorted.
std::vector<Edge> pairs_within(const Graph& g, std::span<const Vertex> vertices);

} // namespace kgrip
