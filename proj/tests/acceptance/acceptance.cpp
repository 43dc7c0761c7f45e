// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Optional arguments select criteria by
// number, e.g. `kgrip_acceptance 3 6`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "kgrip/generators.hpp"
#include "kgrip/greedy.hpp"
#include "kgrip/jlt.hpp"
#include "kgrip/pseudoinverse.hpp"
#include "kgrip/rng.hpp"
#include "kgrip/spectral.hpp"
#include "kgrip/ust.hpp"

using namespace kgrip;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
    return generate(ErdosRenyiParams{n, p}, seed).graph;
}

double geomean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs)
        s += std::log(x);
    return std::exp(s / static_cast<double>(xs.size()));
}

std::string fixed(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

Outcome exactness() {
    double worst = 0.0;
    long long pairs = 0;
    for (int i = 0; i < 30; ++i) {
        const int n = 5 + (i * 53) % 56;
        const double p = 0.05 + 0.3 * ((i * 7) % 10) / 10.0;
        const Graph g = oracle::random_connected(n, p, 1000 + i);
        const Eigen::MatrixXd lp = pseudoinverse_dense(g);
        const double base = oracle::total_resistance(g);
        for (const Edge& e : oracle::non_edges(g)) {
            const double want = base - oracle::total_resistance(oracle::with_edge(g, e.a, e.b));
            const double got = gain_exact(g, lp, e.a, e.b);
            worst = std::max(worst, std::abs(got - want) / std::abs(want));
            ++pairs;
        }
    }
    return {worst <= 1e-6, std::to_string(pairs) + " pairs on 30 graphs, max rel err " + sci(worst)};
}

Outcome sherman_morrison_chain() {
    Graph g = erdos_renyi(50, 0.2, 7);
    Eigen::MatrixXd lp = pseudoinverse_dense(g);
    Rng rng = make_stream(7, 99, 0);
    double worst = 0.0;
    for (int step = 0; step < 100; ++step) {
        const std::vector<Edge> free = oracle::non_edges(g);
        std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
        const Edge e = free[pick(rng)];
        sherman_morrison_update(lp, e.a, e.b);
        g.insert_edge(e.a, e.b);
        worst = std::max(worst, (lp - oracle::pinv(g)).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-6, "n=" + std::to_string(g.num_nodes()) + ", 100 updates, max abs err " + sci(worst)};
}

Outcome greedy_correctness() {
    int matched = 0;
    std::string first_mismatch;
    for (int i = 0; i < 20; ++i) {
        const int n = 12 + (i * 7) % 29;
        const double p = 0.08 + 0.04 * (i % 5);
        const int k = 1 + i % 5;
        const Graph g = oracle::random_connected(n, p, 2000 + i);
        const Solution s = run_kgrip(g, k, HeuristicKind::StGreedy, {}, 1);
        const std::vector<Edge> want = oracle::naive_greedy(g, k);
        if (s.inserted_edges == want)
            ++matched;
        else if (first_mismatch.empty())
            first_mismatch = ", first mismatch on instance " + std::to_string(i);
    }
    return {matched == 20, std::to_string(matched) + "/20 instances identical" + first_mismatch};
}

// Max deviation of empirical tree frequencies from uniform over `trees`.
double tree_uniformity(const std::vector<std::vector<Edge>>& trees, const std::function<SpanningTree(Rng&)>& draw,
                       int samples, std::uint64_t seed, bool& foreign) {
    std::map<std::vector<Edge>, int> counts;
    for (const auto& t : trees)
        counts[t] = 0;
    Rng rng(seed);
    foreign = false;
    for (int i = 0; i < samples; ++i) {
        auto it = counts.find(draw(rng).edges());
        if (it == counts.end())
            foreign = true;
        else
            ++it->second;
    }
    double worst = 0.0;
    for (const auto& [tree, c] : counts)
        worst = std::max(worst, std::abs(static_cast<double>(c) / samples - 1.0 / trees.size()));
    return worst;
}

Outcome ust_distribution() {
    constexpr int kSamples = 40000;
    std::ostringstream detail;
    bool ok = true;

    // Uniformity over all spanning trees.
    const Graph diamond = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}});
    const Graph k4 = oracle::complete(4);
    for (const Graph* g : {&diamond, &k4}) {
        const auto trees = oracle::spanning_trees(*g);
        bool foreign = false;
        const double dev = tree_uniformity(
            trees, [&](Rng& r) { return sample_ust(*g, 1, r); }, kSamples, 11, foreign);
        ok = ok && !foreign && dev <= 0.02 && trees.size() <= 16;
        detail << trees.size() << " trees dev " << fixed(dev) << "; ";
    }

    // Uniformity over trees containing a fixed edge.
    {
        std::vector<std::vector<Edge>> with;
        for (const auto& t : oracle::spanning_trees(k4))
            if (std::find(t.begin(), t.end(), Edge{0, 1}) != t.end())
                with.push_back(t);
        bool foreign = false;
        const double dev = tree_uniformity(
            with, [&](Rng& r) { return sample_ust_with_edge(k4, 0, 1, r); }, kSamples, 12, foreign);
        ok = ok && !foreign && dev <= 0.02;
        detail << "fixed edge " << with.size() << " trees dev " << fixed(dev) << "; ";
    }

    // Edge inclusion probability equals effective resistance.
    {
        const Graph g = oracle::random_connected(12, 0.3, 13);
        const Eigen::MatrixXd P = oracle::pinv(g);
        std::map<Edge, int> hits;
        Rng rng(14);
        for (int i = 0; i < kSamples; ++i)
            for (const Edge& e : sample_ust(g, 0, rng).edges())
                ++hits[e];
        double dev = 0.0;
        for (const Edge& e : g.edges())
            dev = std::max(dev, std::abs(static_cast<double>(hits[e]) / kSamples - oracle::resistance(P, e.a, e.b)));
        ok = ok && dev <= 0.02;
        detail << "P[e in T] vs R(e) dev " << fixed(dev);
    }
    return {ok, detail.str()};
}

Outcome dynamic_diag() {
    Graph g = erdos_renyi(200, 0.05, 21);
    const SolverConfig solver{1e-8, 0};
    DiagResult r = approx_diag_lpinv(g, {0.1, 1.0, 64}, 21, solver);
    Rng rng = make_stream(21, 98, 0);
    double worst = 0.0;
    std::ostringstream per;
    for (int step = 0; step < 5; ++step) {
        const std::vector<Edge> free = oracle::non_edges(g);
        std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
        const Edge e = free[pick(rng)];
        g.insert_edge(e.a, e.b);
        approx_update_diag(g, r.repository, r.diag, solver);
        const double err = (r.diag.values - oracle::pinv(g).diagonal()).cwiseAbs().maxCoeff();
        worst = std::max(worst, err);
        per << (step ? " " : "") << fixed(err);
    }
    return {worst <= 0.3, "n=" + std::to_string(g.num_nodes()) + ", max abs err per insertion [" + per.str() +
                              "] vs bound 0.3"};
}

Outcome spectral_bracket() {
    double collapse = 0.0;
    for (int i = 0; i < 8; ++i) {
        const int n = 6 + 6 * i;
        const Graph g = oracle::random_connected(n, 0.2, 3000 + i);
        const SpectralState s = compute_low_spectrum(g, n, {}, nullptr, 5);
        const Eigen::MatrixXd P = oracle::pinv(g);
        for (const Edge& e : oracle::non_edges(g)) {
            const double exact = n * oracle::biharmonic_sq(P, e.a, e.b) / (1.0 + oracle::resistance(P, e.a, e.b));
            const GainBracket br = gain_bounds(s, e.a, e.b);
            collapse = std::max({collapse, std::abs(br.lower - exact) / exact, std::abs(br.upper - exact) / exact});
        }
    }
    long long checked = 0, violated = 0;
    int graphs = 0;
    for (int i = 0; i < 20 && graphs < 8; ++i) {
        const int n = 30 + 5 * (i % 5);
        const Graph g = oracle::random_connected(n, 0.35, 4000 + i);
        const int c = n / 3;
        const SpectralState s = compute_low_spectrum(g, c, {}, nullptr, 6);
        if (s.eigenvalues[c - 2] < 1.0)
            continue;
        ++graphs;
        const Eigen::MatrixXd P = oracle::pinv(g);
        for (const Edge& e : oracle::non_edges(g)) {
            const double exact = n * oracle::biharmonic_sq(P, e.a, e.b) / (1.0 + oracle::resistance(P, e.a, e.b));
            const GainBracket br = gain_bounds(s, e.a, e.b);
            const double slack = 1e-9 * exact;
            ++checked;
            if (br.lower > exact + slack || exact > br.upper + slack)
                ++violated;
        }
    }
    const bool ok = collapse <= 1e-8 && graphs > 0 && violated == 0;
    return {ok, "c=n max rel dev " + sci(collapse) + "; c<n: " + std::to_string(violated) + "/" +
                    std::to_string(checked) + " pairs outside bracket on " + std::to_string(graphs) + " graphs"};
}

Outcome jlt_fidelity() {
    constexpr double kEta = 0.55;
    const SolverConfig cfg{1e-10, 0};
    bool ok = true;
    std::ostringstream detail;
    for (int i = 0; i < 4; ++i) {
        const int n = 40 + 20 * i;
        const Graph g = oracle::random_connected(n, 0.1, 5000 + i);
        const int q = jlt_lemma_dimension(n, kEta);
        const JltSketch sk = build_sketch(g, q, 77 + i, cfg);
        const Eigen::MatrixXd P = oracle::pinv(g);
        long long total = 0, inside_b = 0, inside_r = 0;
        for (Vertex a = 0; a < n; ++a)
            for (Vertex b = a + 1; b < n; ++b) {
                ++total;
                const double eb = oracle::biharmonic_sq(P, a, b), er = oracle::resistance(P, a, b);
                const double sb = sk.biharmonic_sq(a, b), sr = sk.resistance(a, b);
                inside_b += (sb >= (1 - kEta) * eb && sb <= (1 + kEta) * eb);
                inside_r += (sr >= (1 - kEta) * er && sr <= (1 + kEta) * er);
            }
        const double need = (1.0 - 1.0 / n) * total;
        ok = ok && inside_b >= need && inside_r >= need;
        detail << "n=" << n << " q=" << q << " " << fixed(100.0 * inside_b / total, 2) << "%/"
               << fixed(100.0 * inside_r / total, 2) << "%; ";
    }
    // Identity projections reproduce exact distances.
    const Graph g = oracle::random_connected(30, 0.15, 5100);
    const Eigen::MatrixXd P = oracle::pinv(g);
    const JltSketch id = build_sketch_with(g, Eigen::MatrixXd::Identity(g.num_nodes(), g.num_nodes()),
                                           Eigen::MatrixXd::Identity(g.num_edges(), g.num_edges()), cfg);
    double worst = 0.0;
    for (Vertex a = 0; a < g.num_nodes(); ++a)
        for (Vertex b = a + 1; b < g.num_nodes(); ++b) {
            worst = std::max(worst, std::abs(id.resistance(a, b) - oracle::resistance(P, a, b)));
            worst = std::max(worst, std::abs(id.biharmonic_sq(a, b) - oracle::biharmonic_sq(P, a, b)));
        }
    ok = ok && worst <= 1e-6;
    detail << "identity hook max err " << sci(worst);
    return {ok, detail.str()};
}

Outcome quality_trend() {
    std::map<int, double> ratio;
    std::ostringstream detail;
    for (int k : {2, 5, 20}) {
        std::vector<double> r;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const Graph g = erdos_renyi(300, 0.05, seed);
            const double ref = run_kgrip(g, k, HeuristicKind::StGreedy, {}, seed).total_gain();
            const double got = run_kgrip(g, k, HeuristicKind::SimplStoch, {}, seed).total_gain();
            r.push_back(got / ref);
        }
        ratio[k] = geomean(r);
        detail << "k=" << k << " " << fixed(ratio[k]) << "; ";
    }
    const bool each = ratio[2] >= 0.90 && ratio[5] >= 0.90 && ratio[20] >= 0.90;
    const bool trend = ratio[20] >= ratio[2] - 0.03;
    detail << "threshold 0.90 " << (each ? "met" : "not met") << ", trend " << (trend ? "holds" : "fails");
    return {each && trend, detail.str()};
}

Outcome lrip_consistency() {
    bool identical = true;
    const Graph g = erdos_renyi(100, 0.08, 31);
    const std::vector<Vertex> focus{3, 17, 42, 58, 91};
    for (HeuristicKind kind : all_heuristics()) {
        const auto batch = run_klrip(g, focus, 3, kind, {}, 31);
        for (std::size_t i = 0; i < focus.size(); ++i) {
            const auto single = run_klrip(g, std::span<const Vertex>(&focus[i], 1), 3, kind, {}, 31);
            identical = identical && batch[i].inserted_edges == single[0].inserted_edges &&
                        batch[i].per_edge_true_gain == single[0].per_edge_true_gain;
        }
    }
    std::ostringstream detail;
    detail << "batch vs single runs " << (identical ? "identical" : "differ") << " for all heuristics; ColStoch/StGreedy";
    bool quality = true;
    for (int k : {2, 5}) {
        std::vector<double> r;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const Graph h = erdos_renyi(300, 0.05, seed);
            Rng rng = make_stream(seed, stream::kFocus, 0);
            std::uniform_int_distribution<Vertex> pick(0, h.num_nodes() - 1);
            std::vector<Vertex> f;
            while (f.size() < 5) {
                const Vertex v = pick(rng);
                if (std::find(f.begin(), f.end(), v) == f.end())
                    f.push_back(v);
            }
            const auto ref = run_klrip(h, f, k, HeuristicKind::StGreedy, {}, seed);
            const auto got = run_klrip(h, f, k, HeuristicKind::ColStoch, {}, seed);
            for (std::size_t i = 0; i < f.size(); ++i)
                r.push_back(got[i].total_gain() / ref[i].total_gain());
        }
        const double gm = geomean(r);
        quality = quality && gm >= 0.80;
        detail << " k=" << k << " " << fixed(gm);
    }
    return {identical && quality, detail.str()};
}

} // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        Outcome (*run)();
    };
    const std::vector<Criterion> criteria = {
        {1, "exactness suite", 60, exactness},
        {2, "Sherman-Morrison chain", 60, sherman_morrison_chain},
        {3, "lazy greedy equals naive greedy", 120, greedy_correctness},
        {4, "UST distribution", 180, ust_distribution},
        {5, "dynamic diag update", 180, dynamic_diag},
        {6, "spectral bracket", 120, spectral_bracket},
        {7, "JLT fidelity", 120, jlt_fidelity},
        {8, "SimplStoch quality trend", 600, quality_trend},
        {9, "k-LRIP consistency and quality", 600, lrip_consistency},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));
    auto wanted = [&](int id) { return selected.empty() || selected.count(id) > 0; };

    reset_monotonicity_counters();
    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!wanted(c.id))
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && secs < c.budget_seconds;
        failures += !pass;
        std::printf("%s %d %s: %s [%.1f s of %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                    c.budget_seconds);
        std::fflush(stdout);
    }
    if (wanted(10)) {
        const MonotonicityCounters m = monotonicity_counters();
        const bool pass = m.checked > 0 && m.violations == 0;
        failures += !pass;
        std::printf("%s 10 monotonicity: %lld insertions checked, %lld violations\n", pass ? "PASS" : "FAIL",
                    m.checked, m.violations);
    }
    return failures == 0 ? 0 : 1;
}
