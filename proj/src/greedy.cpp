#include "kgrip/greedy.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <memory>
#include <string>

#include "kgrip/candidates.hpp"
#include "kgrip/jlt.hpp"
#include "kgrip/kernels.hpp"
#include "kgrip/laplacian.hpp"
#include "kgrip/lazy_queue.hpp"
#include "kgrip/rng.hpp"
#include "kgrip/spectral.hpp"
#include "kgrip/ust.hpp"

namespace kgrip {
namespace {

constexpr std::array<HeuristicKind, 6> kAllKinds = {
    HeuristicKind::StGreedy,      HeuristicKind::SimplStoch,  HeuristicKind::ColStoch,
    HeuristicKind::SimplStochJLT, HeuristicKind::ColStochJLT, HeuristicKind::SpecStoch,
};

constexpr double kTrueGainTol = 1e-10;

std::atomic<long long> g_checked{0};
std::atomic<long long> g_violations{0};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Deadline {
public:
    explicit Deadline(double limit) : limit_(limit), start_(Clock::now()) {}
    void check(const char* where) const {
        if (limit_ > 0.0 && seconds_since(start_) > limit_)
            throw TimeoutError(std::string("time limit of ") + std::to_string(limit_) + " s exceeded during " +
                               where);
    }

private:
    double limit_;
    Clock::time_point start_;
};

// Argmax with the canonical tie rule.
std::size_t best_index(std::span<const Edge> pairs, std::span<const double> gains) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pairs.size(); ++i)
        if (ranks_before(gains[i], pairs[i], gains[best], pairs[best]))
            best = i;
    return best;
}

std::vector<Edge> focus_pairs(Vertex focus, std::span<const Vertex> others) {
    std::vector<Edge> out;
    out.reserve(others.size());
    for (Vertex b : others)
        out.push_back(make_edge(focus, b));
    std::sort(out.begin(), out.end());
    return out;
}

struct Context {
    GreedyParams params;
    std::uint64_t seed = 0;
    int k = 0;
    bool local = false;

    SolverConfig solver() const { return {params.solver_eps, 0}; }
};

// Compute / Candidates+Eval / Update bundle of one heuristic.
class Strategy {
public:
    explicit Strategy(const Context& ctx) : ctx_(ctx) {}
    virtual ~Strategy() = default;
    virtual std::unique_ptr<Strategy> clone() const = 0;
    virtual void compute(const Graph& g) = 0;
    virtual Edge select(const Graph& g, int step, std::optional<Vertex> focus) = 0;
    virtual void update(const Graph& g_after, const RoundUpdate& ru) = 0;
    long long evaluations() const { return evaluations_; }

protected:
    Rng candidate_stream(int step) const {
        return make_stream(ctx_.seed, stream::kCandidates, static_cast<std::uint64_t>(step));
    }

    std::vector<Edge> uniform_candidates(const Graph& g, std::optional<Vertex> focus, Rng& rng) const {
        const int n = g.num_nodes();
        if (focus) {
            const long long s = candidate_size(SampleMode::Lrip, n, g.degree(*focus), ctx_.k, ctx_.params.delta);
            return focus_pairs(*focus, sample_non_neighbors(g, *focus, s, rng));
        }
        const long long s = candidate_size(SampleMode::GripPairs, n, g.num_edges(), ctx_.k, ctx_.params.delta);
        return sample_pairs_uniform(g, s, rng);
    }

    // Diagonal-weighted vertex sample; returns the pairs and the vertices
    // whose columns they touch.
    std::vector<Edge> weighted_candidates(const Graph& g, std::optional<Vertex> focus, const DiagEstimate& diag,
                                          Rng& rng, std::vector<Vertex>& touched) const {
        const int n = g.num_nodes();
        const std::span<const double> w(diag.values.data(), static_cast<std::size_t>(n));
        if (focus) {
            std::vector<Vertex> pool;
            for (Vertex b = 0; b < n; ++b)
                if (b != *focus && !g.has_edge(*focus, b))
                    pool.push_back(b);
            const long long s = candidate_size(SampleMode::Lrip, n, g.degree(*focus), ctx_.k, ctx_.params.delta);
            std::vector<Vertex> picked = sample_weighted_vertices(w, pool, s, rng);
            touched = picked;
            touched.push_back(*focus);
            std::sort(touched.begin(), touched.end());
            return focus_pairs(*focus, picked);
        }
        const long long s = candidate_size(SampleMode::GripColumns, n, 0, ctx_.k, ctx_.params.delta);
        touched = sample_weighted_vertices(w, {}, s, rng);
        std::vector<Edge> pairs = pairs_within(g, touched);
        if (pairs.empty()) {
            // The sample is a clique; fall back to uniform non-edges.
            pairs = sample_pairs_uniform(g, s, rng);
            touched.clear();
            for (const Edge& e : pairs) {
                touched.push_back(e.a);
                touched.push_back(e.b);
            }
            std::sort(touched.begin(), touched.end());
            touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        }
        return pairs;
    }

    int sketch_rows(const Graph& g) const {
        if (ctx_.params.jlt_dim > 0)
            return ctx_.params.jlt_dim;
        const long long universe = ctx_.local ? g.num_nodes() - 1 : g.num_non_edges();
        return jlt_dimension(universe, ctx_.params.c_jlt);
    }

    Context ctx_;
    long long evaluations_ = 0;
};

class DenseStrategy : public Strategy {
public:
    using Strategy::Strategy;
    void compute(const Graph& g) override { lpinv_ = pseudoinverse_dense(g, ctx_.params.dense_cap); }
    void update(const Graph&, const RoundUpdate& ru) override {
        sherman_morrison_update(lpinv_, ru.edge.a, ru.edge.b);
    }

protected:
    std::vector<double> evaluate(std::span<const Edge> pairs) {
        std::vector<double> gains(pairs.size());
        kernels::pair_gains_parallel(lpinv_, {}, pairs, static_cast<double>(lpinv_.rows()), gains);
        evaluations_ += static_cast<long long>(pairs.size());
        return gains;
    }

    Eigen::MatrixXd lpinv_;
};

class StGreedy final : public DenseStrategy {
public:
    using DenseStrategy::DenseStrategy;
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<StGreedy>(*this); }

    Edge select(const Graph& g, int, std::optional<Vertex> focus) override {
        if (!primed_) {
            std::vector<Edge> pairs;
            if (focus) {
                std::vector<Vertex> others;
                for (Vertex b = 0; b < g.num_nodes(); ++b)
                    if (b != *focus && !g.has_edge(*focus, b))
                        others.push_back(b);
                pairs = focus_pairs(*focus, others);
            } else {
                pairs = all_non_edges(g);
            }
            const std::vector<double> gains = evaluate(pairs);
            for (std::size_t i = 0; i < pairs.size(); ++i)
                queue_.push({pairs[i], gains[i], g.round()});
            primed_ = true;
        }
        const int n = g.num_nodes();
        const LazyQueueEntry top = queue_.next(
            [&](Edge e) {
                ++evaluations_;
                return gain_from_columns(lpinv_.col(e.a), lpinv_.col(e.b), e.a, e.b, n);
            },
            g.round());
        return top.edge;
    }

private:
    LazyQueue queue_;
    bool primed_ = false;
};

class SimplStoch final : public DenseStrategy {
public:
    using DenseStrategy::DenseStrategy;
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<SimplStoch>(*this); }

    Edge select(const Graph& g, int step, std::optional<Vertex> focus) override {
        Rng rng = candidate_stream(step);
        const std::vector<Edge> pairs = uniform_candidates(g, focus, rng);
        const std::vector<double> gains = evaluate(pairs);
        return pairs[best_index(pairs, gains)];
    }
};

class ColStoch final : public Strategy {
public:
    using Strategy::Strategy;
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<ColStoch>(*this); }

    void compute(const Graph& g) override {
        DiagResult r = approx_diag_lpinv(g, {ctx_.params.diag_eps, ctx_.params.c_ust, 64}, ctx_.seed, ctx_.solver());
        diag_ = std::move(r.diag);
        repo_ = std::move(r.repository);
        cache_ = ColumnCache(g, ctx_.solver());
    }

    Edge select(const Graph& g, int step, std::optional<Vertex> focus) override {
        Rng rng = candidate_stream(step);
        std::vector<Vertex> touched;
        const std::vector<Edge> pairs = weighted_candidates(g, focus, diag_, rng, touched);
        cache_.ensure(g, touched);
        std::vector<int> slot;
        const Eigen::MatrixXd cols = cache_.gather(touched, slot);
        std::vector<double> gains(pairs.size());
        kernels::pair_gains_parallel(cols, slot, pairs, g.num_nodes(), gains);
        evaluations_ += static_cast<long long>(pairs.size());
        return pairs[best_index(pairs, gains)];
    }

    void update(const Graph& g_after, const RoundUpdate& ru) override {
        cache_.advance(g_after, ru);
        approx_update_diag(g_after, repo_, diag_, ctx_.solver());
    }

private:
    DiagEstimate diag_;
    UstRepository repo_;
    ColumnCache cache_;
};

class JltStrategy : public Strategy {
public:
    JltStrategy(const Context& ctx, bool weighted) : Strategy(ctx), weighted_(weighted) {}

    void compute(const Graph& g) override {
        rows_ = sketch_rows(g);
        sketch_ = build_sketch(g, rows_, ctx_.seed, ctx_.solver());
        if (weighted_) {
            DiagResult r =
                approx_diag_lpinv(g, {ctx_.params.diag_eps, ctx_.params.c_ust, 64}, ctx_.seed, ctx_.solver());
            diag_ = std::move(r.diag);
            repo_ = std::move(r.repository);
        }
    }

    Edge select(const Graph& g, int step, std::optional<Vertex> focus) override {
        Rng rng = candidate_stream(step);
        std::vector<Vertex> touched;
        const std::vector<Edge> pairs =
            weighted_ ? weighted_candidates(g, focus, diag_, rng, touched) : uniform_candidates(g, focus, rng);
        std::vector<double> gains(pairs.size());
        const JltSketch& sk = sketch_;
        if (sk.round != g.round())
            throw InvariantError("sketch is stale; refresh the sketch before evaluating");
        kernels::map_pairs_parallel(
            std::span<const Edge>(pairs), [&sk](Edge e) { return gain_jlt_unchecked(sk, e.a, e.b); }, gains);
        evaluations_ += static_cast<long long>(pairs.size());
        return pairs[best_index(pairs, gains)];
    }

    void update(const Graph& g_after, const RoundUpdate&) override {
        sketch_ = refresh_sketch(g_after, rows_, ctx_.seed, ctx_.solver());
        if (weighted_)
            approx_update_diag(g_after, repo_, diag_, ctx_.solver());
    }

private:
    bool weighted_;
    int rows_ = 0;
    JltSketch sketch_;
    DiagEstimate diag_;
    UstRepository repo_;
};

class SimplStochJlt final : public JltStrategy {
public:
    explicit SimplStochJlt(const Context& ctx) : JltStrategy(ctx, false) {}
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<SimplStochJlt>(*this); }
};

class ColStochJlt final : public JltStrategy {
public:
    explicit ColStochJlt(const Context& ctx) : JltStrategy(ctx, true) {}
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<ColStochJlt>(*this); }
};

class SpecStoch final : public Strategy {
public:
    using Strategy::Strategy;
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<SpecStoch>(*this); }

    void compute(const Graph& g) override {
        cutoff_ = std::max(2, std::min(ctx_.params.cutoff, g.num_nodes() - 1));
        state_ = compute_low_spectrum(g, cutoff_, {}, nullptr, ctx_.seed);
    }

    Edge select(const Graph& g, int step, std::optional<Vertex> focus) override {
        Rng rng = candidate_stream(step);
        const std::vector<Edge> pairs = uniform_candidates(g, focus, rng);
        std::vector<double> gains(pairs.size());
        const SpectralState& st = state_;
        kernels::map_pairs_parallel(
            std::span<const Edge>(pairs), [&st](Edge e) { return gain_spectral(st, e.a, e.b); }, gains);
        evaluations_ += static_cast<long long>(pairs.size());
        return pairs[best_index(pairs, gains)];
    }

    void update(const Graph& g_after, const RoundUpdate&) override {
        state_ = compute_low_spectrum(g_after, cutoff_, {}, &state_, ctx_.seed);
    }

private:
    int cutoff_ = 0;
    SpectralState state_;
};

std::unique_ptr<Strategy> make_strategy(HeuristicKind kind, const Context& ctx) {
    switch (kind) {
    case HeuristicKind::StGreedy:
        return std::make_unique<StGreedy>(ctx);
    case HeuristicKind::SimplStoch:
        return std::make_unique<SimplStoch>(ctx);
    case HeuristicKind::ColStoch:
        return std::make_unique<ColStoch>(ctx);
    case HeuristicKind::SimplStochJLT:
        return std::make_unique<SimplStochJlt>(ctx);
    case HeuristicKind::ColStochJLT:
        return std::make_unique<ColStochJlt>(ctx);
    case HeuristicKind::SpecStoch:
        return std::make_unique<SpecStoch>(ctx);
    }
    throw ConfigError("unknown heuristic");
}

void validate_params(const GreedyParams& p, int k) {
    if (k < 1)
        throw ConfigError("k must be >= 1, got " + std::to_string(k));
    if (!(p.delta > 0.0 && p.delta < 1.0))
        throw ConfigError("delta must lie in (0,1), got " + std::to_string(p.delta));
    if (!(p.eta > 0.0 && p.eta < 1.0))
        throw ConfigError("eta must lie in (0,1), got " + std::to_string(p.eta));
    if (p.cutoff < 2)
        throw ConfigError("cutoff must be >= 2, got " + std::to_string(p.cutoff));
    if (!(p.solver_eps > 0.0 && p.solver_eps < 1.0))
        throw ConfigError("solver epsilon must lie in (0,1)");
    if (!(p.diag_eps > 0.0 && p.diag_eps < 1.0))
        throw ConfigError("diag epsilon must lie in (0,1)");
    if (!(p.c_ust > 0.0) || !(p.c_jlt > 0.0))
        throw ConfigError("sampling constants must be positive");
    if (p.jlt_dim < 0)
        throw ConfigError("jlt dimension must be >= 0");
    if (p.time_limit < 0.0)
        throw ConfigError("time limit must be >= 0");
}

// Greedy loop from a strategy that has already run its Compute step.
void run_rounds(Graph g, Strategy& st, int k, std::optional<Vertex> focus, const Deadline& deadline,
                Solution& sol) {
    for (int step = 0; step < k; ++step) {
        deadline.check("candidate evaluation");
        auto t0 = Clock::now();
        const Edge e = st.select(g, step, focus);
        sol.timings.eval += seconds_since(t0);

        if (g.has_edge(e.a, e.b) || e.a == e.b)
            throw InvariantError("heuristic selected an existing edge {" + std::to_string(e.a) + "," +
                                 std::to_string(e.b) + "}");
        if (focus && e.a != *focus && e.b != *focus)
            throw InvariantError("selected edge is not incident to the focus node");

        const LaplacianOperator op(g);
        RoundUpdate ru = solve_round_update(op, e, {kTrueGainTol, 0});
        const double gain = ru.gain();
        ++g_checked;
        if (!(gain > 0.0)) {
            ++g_violations;
            throw InvariantError("insertion of {" + std::to_string(e.a) + "," + std::to_string(e.b) +
                                 "} did not decrease total resistance (gain " + std::to_string(gain) + ")");
        }
        g.insert_edge(e.a, e.b);
        sol.inserted_edges.push_back(e);
        sol.per_edge_true_gain.push_back(gain);

        if (step + 1 < k) {
            deadline.check("update");
            t0 = Clock::now();
            st.update(g, ru);
            sol.timings.update += seconds_since(t0);
        }
    }
    sol.evaluations = st.evaluations();
    sol.r_final = total_resistance(g);
    const double expected = sol.r_initial - sol.total_gain();
    if (std::abs(sol.r_final - expected) > 1e-5 * std::abs(sol.r_initial))
        throw InvariantError("final total resistance " + std::to_string(sol.r_final) +
                             " disagrees with the summed gains (" + std::to_string(expected) + ")");
}

} // namespace

double Solution::total_gain() const {
    double sum = 0.0;
    for (double x : per_edge_true_gain)
        sum += x;
    return sum;
}

std::string_view heuristic_name(HeuristicKind kind) {
    switch (kind) {
    case HeuristicKind::StGreedy:
        return "stgreedy";
    case HeuristicKind::SimplStoch:
        return "simplstoch";
    case HeuristicKind::ColStoch:
        return "colstoch";
    case HeuristicKind::SimplStochJLT:
        return "simplstoch-jlt";
    case HeuristicKind::ColStochJLT:
        return "colstoch-jlt";
    case HeuristicKind::SpecStoch:
        return "specstoch";
    }
    return "unknown";
}

HeuristicKind parse_heuristic(std::string_view name) {
    std::string lower;
    for (char c : name)
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (HeuristicKind kind : kAllKinds)
        if (heuristic_name(kind) == lower)
            return kind;
    throw ConfigError("unknown heuristic '" + std::string(name) +
                      "' (expected stgreedy, simplstoch, colstoch, simplstoch-jlt, colstoch-jlt or specstoch)");
}

std::span<const HeuristicKind> all_heuristics() { return kAllKinds; }

Solution run_kgrip(const Graph& g, int k, HeuristicKind kind, const GreedyParams& params, std::uint64_t seed) {
    validate_params(params, k);
    assert_connected(g);
    if (k > g.num_non_edges())
        throw ConfigError("k=" + std::to_string(k) + " exceeds the " + std::to_string(g.num_non_edges()) +
                          " available non-edges");
    const Deadline deadline(params.time_limit);

    Solution sol;
    sol.heuristic = kind;
    sol.params = params;
    sol.k = k;
    sol.seed = seed;
    sol.r_initial = total_resistance(g);

    auto st = make_strategy(kind, {params, seed, k, false});
    const auto t0 = Clock::now();
    st->compute(g);
    sol.timings.compute = seconds_since(t0);
    run_rounds(g, *st, k, std::nullopt, deadline, sol);
    return sol;
}

std::vector<Solution> run_klrip(const Graph& g, std::span<const Vertex> focus, int k, HeuristicKind kind,
                                const GreedyParams& params, std::uint64_t seed) {
    validate_params(params, k);
    assert_connected(g);
    const int n = g.num_nodes();
    if (focus.empty())
        throw ConfigError("at least one focus node is required");
    for (Vertex v : focus) {
        if (v < 0 || v >= n)
            throw ConfigError("focus node " + std::to_string(v) + " is out of range [0," + std::to_string(n) + ")");
        if (n - 1 - g.degree(v) < k)
            throw ConfigError("focus node " + std::to_string(v) + " has only " +
                              std::to_string(n - 1 - g.degree(v)) + " non-neighbors, fewer than k=" +
                              std::to_string(k));
    }
    const Deadline deadline(params.time_limit);
    const double r_initial = total_resistance(g);

    auto shared = make_strategy(kind, {params, seed, k, true});
    const auto t0 = Clock::now();
    shared->compute(g);
    const double compute_time = seconds_since(t0);

    std::vector<Solution> out;
    out.reserve(focus.size());
    for (Vertex v : focus) {
        Solution sol;
        sol.heuristic = kind;
        sol.params = params;
        sol.k = k;
        sol.seed = seed;
        sol.focus = v;
        sol.r_initial = r_initial;
        sol.timings.compute = compute_time;
        sol.amortized_compute = compute_time / static_cast<double>(focus.size());
        auto st = shared->clone();
        run_rounds(g, *st, k, v, deadline, sol);
        out.push_back(std::move(sol));
    }
    return out;
}

MonotonicityCounters monotonicity_counters() { return {g_checked.load(), g_violations.load()}; }

void reset_monotonicity_counters() {
    g_checked = 0;
    g_violations = 0;
}

} // namespace kgrip
