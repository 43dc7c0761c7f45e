#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "kgrip/graph.hpp"
#include "kgrip/laplacian.hpp"

namespace kgrip {

/// Random projections of L^+ and B L^+ (B the edge-vertex incidence matrix).
/// Column v of each sketch is the projected image of vertex v, so pairwise
/// column distances approximate squared biharmonic distance and effective
/// resistance respectively.
struct JltSketch {
    int q = 0;
    /// q x n, P L^+.
    Eigen::MatrixXd biharm;
    /// q x n, Q B L^+.
    Eigen::MatrixXd resist;
    int round = 0;
    int n = 0;

    double biharmonic_sq(Vertex a, Vertex b) const;
    double resistance(Vertex a, Vertex b) const;
};

/// max(4, ceil(c * ln s)).
int jlt_dimension(long long universe, double c = 4.0);
/// ceil(24 ln(n) / eta^2), the distortion-guarantee dimension.
int jlt_lemma_dimension(int n, double eta);

/// Gaussian projections with N(0, 1/q) entries, seeded.
JltSketch build_sketch(const Graph& g, int q, std::uint64_t seed, const SolverConfig& cfg);

/// Sketch with caller-provided projections: P is q x n, Q is q' x m where
/// Q's columns follow the order of g.edges(). Identity projections give
/// exact distances.
JltSketch build_sketch_with(const Graph& g, const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                            const SolverConfig& cfg);

/// New independent projections for the current graph.
JltSketch refresh_sketch(const Graph& g, int q, std::uint64_t seed, const SolverConfig& cfg);

/// n * ||P L^+ (e_a - e_b)||^2 / (1 + ||Q B L^+ (e_a - e_b)||^2).
/// Throws InvariantError when the sketch is older than the graph.
double gain_jlt(const JltSketch& sketch, const Graph& g, Vertex a, Vertex b);

/// Same formula without the staleness check (hot loop).
double gain_jlt_unchecked(const JltSketch& sketch, Vertex a, Vertex b);

} // namespace kgrip
