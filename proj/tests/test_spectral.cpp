#include <gtest/gtest.h>

#include "kgrip/generators.hpp"
#include "kgrip/spectral.hpp"
#include "support/oracles.hpp"

using namespace kgrip;

namespace {

const SpectralConfig kCfg{};

double exact_gain(const Eigen::MatrixXd& P, int n, Vertex a, Vertex b) {
    return n * oracle::biharmonic_sq(P, a, b) / (1 + oracle::resistance(P, a, b));
}

} // namespace

TEST(Spectrum, PathOfThree) {
    const SpectralState s = compute_low_spectrum(oracle::path(3), 3, kCfg);
    ASSERT_EQ(s.eigenvalues.size(), 2);
    EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-8);
    EXPECT_NEAR(s.eigenvalues[1], 3.0, 1e-8);
    EXPECT_NEAR(s.lambda_max, 3.0, 1e-8);
}

TEST(Spectrum, CompleteFour) {
    const SpectralState s = compute_low_spectrum(oracle::complete(4), 4, kCfg);
    for (int i = 0; i < 3; ++i)
        EXPECT_NEAR(s.eigenvalues[i], 4.0, 1e-8);
    EXPECT_NEAR(s.lambda_max, 4.0, 1e-8);
}

TEST(Spectrum, CycleOfFour) {
    const SpectralState s = compute_low_spectrum(oracle::cycle(4), 4, kCfg);
    EXPECT_NEAR(s.eigenvalues[0], 2.0, 1e-8);
    EXPECT_NEAR(s.eigenvalues[1], 2.0, 1e-8);
    EXPECT_NEAR(s.eigenvalues[2], 4.0, 1e-8);
}

TEST(Spectrum, MatchesDenseEigenvalues) {
    const Graph g = oracle::random_connected(60, 0.08, 21);
    const SpectralState s = compute_low_spectrum(g, 12, kCfg);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::laplacian(g));
    for (int i = 0; i < 11; ++i)
        EXPECT_NEAR(s.eigenvalues[i], es.eigenvalues()[i + 1], 1e-6);
    EXPECT_NEAR(s.lambda_max, es.eigenvalues()[59], 1e-6);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(60);
    for (int i = 0; i < 11; ++i) {
        EXPECT_NEAR(s.eigenvectors.col(i).norm(), 1.0, 1e-10);
        EXPECT_NEAR(s.eigenvectors.col(i).dot(ones), 0.0, 1e-10);
    }
}

TEST(Spectrum, CutoffValidated) {
    EXPECT_THROW(compute_low_spectrum(oracle::path(5), 1, kCfg), ConfigError);
    EXPECT_THROW(compute_low_spectrum(oracle::path(5), 6, kCfg), ConfigError);
}

TEST(Spectrum, FullSpectrumEntriesSumToTwo) {
    const Graph g = oracle::random_connected(20, 0.2, 22);
    const SpectralState s = compute_low_spectrum(g, 20, kCfg);
    for (Vertex a = 0; a < 20; a += 3)
        for (Vertex b = a + 1; b < 20; b += 4)
            EXPECT_NEAR((s.eigenvectors.row(a) - s.eigenvectors.row(b)).squaredNorm(), 2.0, 1e-9);
}

TEST(Spectrum, WarmStartReachesSameValues) {
    Graph g = oracle::random_connected(80, 0.06, 23);
    const SpectralState cold = compute_low_spectrum(g, 10, kCfg);
    const Edge e = oracle::non_edges(g)[7];
    g.insert_edge(e.a, e.b);
    const SpectralState warm = compute_low_spectrum(g, 10, kCfg, &cold, 1);
    const SpectralState fresh = compute_low_spectrum(g, 10, kCfg, nullptr, 2);
    EXPECT_EQ(warm.round, 1);
    EXPECT_LT((warm.eigenvalues - fresh.eigenvalues).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(GainBounds, CollapseAtFullCutoff) {
    for (const Graph& g : {oracle::path(3), oracle::cycle(4), oracle::random_connected(15, 0.2, 24)}) {
        const int n = g.num_nodes();
        const SpectralState s = compute_low_spectrum(g, n, kCfg);
        const Eigen::MatrixXd P = oracle::pinv(g);
        for (const Edge& e : oracle::non_edges(g)) {
            const GainBracket br = gain_bounds(s, e.a, e.b);
            const double want = exact_gain(P, n, e.a, e.b);
            EXPECT_NEAR(br.lower, want, 1e-8 * want);
            EXPECT_NEAR(br.upper, want, 1e-8 * want);
        }
    }
    EXPECT_NEAR(gain_spectral(compute_low_spectrum(oracle::path(3), 3, kCfg), 0, 2), 2.0, 1e-8);
}

TEST(GainBounds, TruncatedBracketContainsExact) {
    const Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}});
    const SpectralState s = compute_low_spectrum(g, 2, kCfg);
    const GainBracket br = gain_bounds(s, 2, 3);
    const double want = exact_gain(oracle::pinv(g), 4, 2, 3);
    EXPECT_LE(br.lower, want + 1e-9);
    EXPECT_GE(br.upper, want - 1e-9);
    const double mid = gain_spectral(s, 2, 3);
    EXPECT_GE(mid, br.lower);
    EXPECT_LE(mid, br.upper);
}

TEST(GainBounds, RefineWithCutoff) {
    const Graph g = oracle::random_connected(40, 0.1, 25);
    const Eigen::MatrixXd P = oracle::pinv(g);
    const auto pairs = oracle::non_edges(g);
    double prev_width = std::numeric_limits<double>::infinity();
    for (int c : {4, 12, 25, 40}) {
        const SpectralState s = compute_low_spectrum(g, c, kCfg);
        double width = 0.0;
        for (const Edge& e : pairs) {
            const GainBracket br = gain_bounds(s, e.a, e.b);
            const double want = exact_gain(P, 40, e.a, e.b);
            EXPECT_LE(br.lower, want * (1 + 1e-7));
            EXPECT_GE(br.upper, want * (1 - 1e-7));
            width += br.upper - br.lower;
        }
        EXPECT_LE(width, prev_width * (1 + 1e-9));
        prev_width = width;
    }
    EXPECT_LT(prev_width, 1e-6);
}

TEST(GainBounds, RankingOnScaleFreeGraph) {
    const Graph g = generate(BarabasiAlbertParams{300, 4, 4}, 26).graph;
    const SpectralState s = compute_low_spectrum(g, 50, kCfg);
    const Eigen::MatrixXd P = oracle::pinv(g);
    std::vector<double> approx, exact;
    for (const Edge& e : oracle::non_edges(g)) {
        if ((e.a * 17 + e.b) % 13 != 0)
            continue;
        approx.push_back(gain_spectral(s, e.a, e.b));
        exact.push_back(exact_gain(P, 300, e.a, e.b));
    }
    EXPECT_GE(oracle::spearman(approx, exact), 0.7);
}
