#include "kgrip/jlt.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "kgrip/rng.hpp"

namespace kgrip {

double JltSketch::biharmonic_sq(Vertex a, Vertex b) const {
    return (biharm.col(a) - biharm.col(b)).squaredNorm();
}

double JltSketch::resistance(Vertex a, Vertex b) const {
    return (resist.col(a) - resist.col(b)).squaredNorm();
}

int jlt_dimension(long long universe, double c) {
    const double s = static_cast<double>(std::max(universe, 2LL));
    return std::max(4, static_cast<int>(std::ceil(c * std::log(s))));
}

int jlt_lemma_dimension(int n, double eta) {
    if (!(eta > 0.0))
        throw ConfigError("eta must be positive");
    return static_cast<int>(std::ceil(24.0 * std::log(std::max(n, 2)) / (eta * eta)));
}

JltSketch build_sketch_with(const Graph& g, const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                            const SolverConfig& cfg) {
    const int n = g.num_nodes();
    if (P.rows() < 1 || Q.rows() < 1)
        throw ConfigError("sketch dimension must be >= 1");
    if (P.cols() != n || Q.cols() != g.num_edges())
        throw ConfigError("projection shapes do not match the graph");

    const LaplacianOperator op(g);

    // L Y = P^T - (1/n) 1 1^T P^T  =>  Y = L^+ P^T
    Eigen::MatrixXd rhs = P.transpose();
    center_columns(rhs);
    Eigen::MatrixXd Y = solve_laplacian_many(op, rhs, cfg);

    // B^T Q^T streamed over edges; each column already sums to zero.
    Eigen::MatrixXd rhs_edges = Eigen::MatrixXd::Zero(n, Q.rows());
    Eigen::Index k = 0;
    for (const Edge& e : g.edges()) {
        rhs_edges.row(e.a) += Q.col(k).transpose();
        rhs_edges.row(e.b) -= Q.col(k).transpose();
        ++k;
    }
    Eigen::MatrixXd Z = solve_laplacian_many(op, rhs_edges, cfg);

    JltSketch s;
    s.q = static_cast<int>(P.rows());
    s.n = n;
    s.round = g.round();
    s.biharm = Y.transpose();
    s.resist = Z.transpose();
    return s;
}

JltSketch build_sketch(const Graph& g, int q, std::uint64_t seed, const SolverConfig& cfg) {
    if (q < 1)
        throw ConfigError("sketch dimension q must be >= 1, got " + std::to_string(q));
    Rng rng = make_stream(seed, stream::kSketch, static_cast<std::uint64_t>(g.round()));
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(q)));
    auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXd M(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                M(i, j) = normal(rng);
        return M;
    };
    const Eigen::MatrixXd P = gaussian(q, g.num_nodes());
    const Eigen::MatrixXd Q = gaussian(q, g.num_edges());
    return build_sketch_with(g, P, Q, cfg);
}

JltSketch refresh_sketch(const Graph& g, int q, std::uint64_t seed, const SolverConfig& cfg) {
    return build_sketch(g, q, seed, cfg);
}

double gain_jlt_unchecked(const JltSketch& sketch, Vertex a, Vertex b) {
    const auto ba = sketch.biharm.col(a);
    const auto bb = sketch.biharm.col(b);
    const auto ra = sketch.resist.col(a);
    const auto rb = sketch.resist.col(b);
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < sketch.q; ++i) {
        const double d1 = ba[i] - bb[i];
        num += d1 * d1;
    }
    for (Eigen::Index i = 0; i < ra.size(); ++i) {
        const double d2 = ra[i] - rb[i];
        den += d2 * d2;
    }
    return sketch.n * num / (1.0 + den);
}

double gain_jlt(const JltSketch& sketch, const Graph& g, Vertex a, Vertex b) {
    if (sketch.round != g.round() || sketch.n != g.num_nodes())
        throw InvariantError("JLT sketch is from round " + std::to_string(sketch.round) +
                             " but the graph is at round " + std::to_string(g.round()) +
                             "; refresh the sketch");
    return gain_jlt_unchecked(sketch, a, b);
}

} // namespace kgrip
