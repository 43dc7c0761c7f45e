#include "kgrip/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "kgrip/rng.hpp"

namespace kgrip {
namespace {

struct RitzPairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    Eigen::VectorXd residuals;
    int steps = 0;
};

// Expanding-subspace Rayleigh-Ritz restricted to the complement of the
// constant vector. Each step appends the residuals of the first unconverged
// wanted Ritz pairs, which keeps the basis inside the block Krylov space;
// a thick restart keeps the wanted Ritz vectors when the basis hits its cap.
class ExtremeEigensolver {
public:
    ExtremeEigensolver(const LaplacianOperator& op, int want, bool largest, double tol, int block,
                       int max_steps, Rng& rng)
        : op_(op), n_(op.size()), dim_(op.size() - 1), want_(want), largest_(largest), tol_(tol),
          block_(std::max(1, block)), max_steps_(max_steps), rng_(rng) {
        cap_ = std::min(dim_, std::max(2 * want_ + 2 * block_, want_ + 100));
        V_.resize(n_, 0);
        W_.resize(n_, 0);
    }

    RitzPairs run(const Eigen::MatrixXd* warm) {
        if (warm && warm->rows() == n_ && warm->cols() > 0)
            append(*warm);
        while (V_.cols() < std::min(want_, dim_) || V_.cols() == 0)
            append(random_block(std::max(block_, want_ - static_cast<int>(V_.cols()))));

        RitzPairs out;
        for (int step = 0;; ++step) {
            const int k = static_cast<int>(V_.cols());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (T_ + T_.transpose()));
            if (eig.info() != Eigen::Success)
                throw SolverError("Rayleigh-Ritz eigensolve failed", 0.0);
            const int take = std::min(want_, k);
            Eigen::MatrixXd S(k, take);
            Eigen::VectorXd theta(take);
            for (int i = 0; i < take; ++i) {
                const int idx = largest_ ? k - 1 - i : i;
                S.col(i) = eig.eigenvectors().col(idx);
                theta[i] = eig.eigenvalues()[idx];
            }
            Eigen::MatrixXd X = V_ * S;
            Eigen::MatrixXd R = W_ * S - X * theta.asDiagonal();
            Eigen::VectorXd norms = R.colwise().norm();

            const bool exhausted = k >= dim_;
            const bool converged = take == want_ && (norms.array() <= tol_).all();
            if (converged || exhausted || step >= max_steps_) {
                if (!converged && !exhausted) {
                    std::ostringstream msg;
                    msg << "eigensolver did not converge in " << step << " steps (max residual "
                        << norms.maxCoeff() << ", target " << tol_ << ")";
                    throw SolverError(msg.str(), norms.maxCoeff());
                }
                out.values = theta;
                out.vectors = X;
                out.residuals = norms;
                out.steps = step;
                return out;
            }

            // Residuals of the first unconverged pairs drive the expansion.
            Eigen::MatrixXd grow(n_, block_);
            int g = 0;
            for (int i = 0; i < take && g < block_; ++i)
                if (norms[i] > tol_)
                    grow.col(g++) = R.col(i) / norms[i];
            grow.conservativeResize(n_, g);

            if (k + g > cap_)
                restart(eig, take);
            const int before = static_cast<int>(V_.cols());
            append(grow);
            if (V_.cols() == before)
                append(random_block(block_));
        }
    }

private:
    Eigen::MatrixXd random_block(int cols) {
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd M(n_, cols);
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            for (Eigen::Index i = 0; i < M.rows(); ++i)
                M(i, j) = normal(rng_);
        return M;
    }

    // Orthonormalizes candidates against 1 and the basis (two passes of
    // classical Gram-Schmidt) and appends the survivors.
    void append(const Eigen::MatrixXd& cand) {
        const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n_));
        std::vector<Eigen::VectorXd> accepted;
        for (Eigen::Index j = 0; j < cand.cols() && V_.cols() + static_cast<Eigen::Index>(accepted.size()) < dim_; ++j) {
            Eigen::VectorXd x = cand.col(j);
            const double start = x.norm();
            if (!(start > 0.0))
                continue;
            for (int pass = 0; pass < 2; ++pass) {
                x.array() -= x.sum() * inv_sqrt_n * inv_sqrt_n;
                if (V_.cols() > 0)
                    x -= V_ * (V_.transpose() * x);
                for (const auto& y : accepted)
                    x -= y * y.dot(x);
            }
            const double norm = x.norm();
            if (norm <= 1e-10 * start)
                continue;
            accepted.push_back(x / norm);
        }
        if (accepted.empty())
            return;
        const Eigen::Index k = V_.cols();
        const Eigen::Index add = static_cast<Eigen::Index>(accepted.size());
        V_.conservativeResize(n_, k + add);
        W_.conservativeResize(n_, k + add);
        for (Eigen::Index j = 0; j < add; ++j) {
            V_.col(k + j) = accepted[j];
            op_.apply(std::span<const double>(V_.col(k + j).data(), n_),
                      std::span<double>(W_.col(k + j).data(), n_));
        }
        // Grow the projected matrix by the new rows and columns.
        Eigen::MatrixXd T(k + add, k + add);
        if (k > 0)
            T.topLeftCorner(k, k) = T_;
        const Eigen::MatrixXd cross = V_.transpose() * W_.rightCols(add);
        T.rightCols(add) = cross;
        T.bottomLeftCorner(add, k + add) = cross.transpose();
        T_ = std::move(T);
    }

    void restart(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& eig, int take) {
        const int k = static_cast<int>(V_.cols());
        const int keep = std::min(k, take + block_);
        Eigen::MatrixXd S(k, keep);
        Eigen::VectorXd theta(keep);
        for (int i = 0; i < keep; ++i) {
            const int idx = largest_ ? k - 1 - i : i;
            S.col(i) = eig.eigenvectors().col(idx);
            theta[i] = eig.eigenvalues()[idx];
        }
        V_ = V_ * S;
        W_ = W_ * S;
        T_ = V_.transpose() * W_;
    }

    const LaplacianOperator& op_;
    int n_;
    int dim_;
    int want_;
    bool largest_;
    double tol_;
    int block_;
    int max_steps_;
    int cap_ = 0;
    Rng& rng_;
    Eigen::MatrixXd V_;
    Eigen::MatrixXd W_;
    Eigen::MatrixXd T_;
};

} // namespace

double largest_eigenvalue(const LaplacianOperator& op, double tol, std::uint64_t seed) {
    if (op.size() < 2)
        return 0.0;
    Rng rng = make_stream(seed, stream::kSpectral, 1);
    ExtremeEigensolver solver(op, 1, true, tol, 2, 100000, rng);
    return solver.run(nullptr).values[0];
}

SpectralState compute_low_spectrum(const Graph& g, int cutoff, const SpectralConfig& cfg,
                                   const SpectralState* warm_start, std::uint64_t seed) {
    const int n = g.num_nodes();
    if (cutoff < 2 || cutoff > n)
        throw ConfigError("spectral cutoff must satisfy 2 <= c <= n (c=" + std::to_string(cutoff) +
                          ", n=" + std::to_string(n) + ")");
    assert_connected(g);
    const LaplacianOperator op(g);
    Rng rng = make_stream(seed, stream::kSpectral, static_cast<std::uint64_t>(g.round()) << 1);

    const int want = cutoff - 1;
    const int block = warm_start ? std::max(cfg.block, 1) : std::min(std::max(cfg.block, 4), want + 3);
    ExtremeEigensolver solver(op, want, false, cfg.eig_tol, block, cfg.max_steps, rng);
    const Eigen::MatrixXd* warm =
        warm_start && warm_start->eigenvectors.rows() == n ? &warm_start->eigenvectors : nullptr;
    RitzPairs low = solver.run(warm);

    SpectralState s;
    s.cutoff = cutoff;
    s.eigenvalues = low.values;
    s.eigenvectors = low.vectors;
    s.residuals = low.residuals;
    s.iterations = low.steps;
    s.round = g.round();
    s.lambda_max = std::max(largest_eigenvalue(op, cfg.eig_tol, seed ^ static_cast<std::uint64_t>(g.round())),
                            s.eigenvalues[want - 1]);
    return s;
}

GainBracket gain_bounds(const SpectralState& s, Vertex a, Vertex b) {
    const Eigen::Index c = s.eigenvalues.size();
    const double n = static_cast<double>(s.eigenvectors.rows());
    double sum_d = 0.0;
    double sum_r = 0.0;
    double sum_b = 0.0;
    for (Eigen::Index i = 0; i < c; ++i) {
        const double diff = s.eigenvectors(a, i) - s.eigenvectors(b, i);
        const double d = diff * diff;
        const double inv = 1.0 / s.eigenvalues[i];
        sum_d += d;
        sum_r += d * inv;
        sum_b += d * inv * inv;
    }
    // Remaining mass of the squared differences over the unseen eigenvectors.
    const double tail = 2.0 - sum_d;
    const double lc = s.eigenvalues[c - 1];
    const double ln = s.lambda_max;
    const double bih_hi = sum_b + tail / (lc * lc);
    const double bih_lo = sum_b + tail / (ln * ln);
    const double res_hi = sum_r + tail / lc;
    const double res_lo = sum_r + tail / ln;
    return {n * bih_lo / (1.0 + res_hi), n * bih_hi / (1.0 + res_lo)};
}

double gain_spectral(const SpectralState& s, Vertex a, Vertex b) {
    const GainBracket br = gain_bounds(s, a, b);
    return 0.5 * (br.lower + br.upper);
}

} // namespace kgrip
