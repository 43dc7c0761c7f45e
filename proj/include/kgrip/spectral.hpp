#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Core>

#include "kgrip/graph.hpp"
#include "kgrip/laplacian.hpp"

namespace kgrip {

/// The c-1 smallest nonzero Laplacian eigenpairs (lambda_2..lambda_c) and
/// the largest eigenvalue lambda_n.
struct SpectralState {
    int cutoff = 0;
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors; // n x (cutoff-1), unit columns orthogonal to 1
    Eigen::VectorXd residuals;    // ||L u_i - lambda_i u_i||
    double lambda_max = 0.0;
    int round = 0;
    int iterations = 0;
};

struct SpectralConfig {
    double eig_tol = 1e-7;
    /// Vectors added per expansion step when no warm start is given.
    int block = 8;
    /// Safety cap on expansion steps.
    int max_steps = 20000;
};

/// Block Krylov (Lanczos-type, fully reorthogonalized) Rayleigh-Ritz on the
/// complement of the constant vector. A warm start seeds the first block
/// with previous Ritz vectors. Requires a connected graph and 2 <= c <= n.
SpectralState compute_low_spectrum(const Graph& g, int cutoff, const SpectralConfig& cfg,
                                   const SpectralState* warm_start = nullptr, std::uint64_t seed = 0);

/// Largest Laplacian eigenvalue from a separate single-vector Lanczos run.
double largest_eigenvalue(const LaplacianOperator& op, double tol, std::uint64_t seed = 0);

struct GainBracket {
    double lower = 0.0;
    double upper = 0.0;
};

/// Bracket on n * B^2 / (1 + R) from the truncated spectrum: the tail
/// eigenvalues lie in [lambda_c, lambda_n] and the squared differences of
/// all nonconstant eigenvector entries sum to 2.
GainBracket gain_bounds(const SpectralState& s, Vertex a, Vertex b);

/// Midpoint of gain_bounds.
double gain_spectral(const SpectralState& s, Vertex a, Vertex b);

} // namespace kgrip
