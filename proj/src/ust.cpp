#include "kgrip/ust.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "kgrip/kernels.hpp"

namespace kgrip {
namespace {

constexpr long long kWalkGuard = 1'000'000'000LL;

// Loop-erased random walks from every vertex outside the current forest.
void wilson_fill(const Graph& g, std::vector<char>& in_tree, std::vector<Vertex>& next, Rng& rng) {
    const int n = g.num_nodes();
    long long steps = 0;
    for (Vertex start = 0; start < n; ++start) {
        Vertex u = start;
        while (!in_tree[u]) {
            auto nb = g.neighbors(u);
            std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
            next[u] = nb[pick(rng)];
            u = next[u];
            if (++steps > kWalkGuard)
                throw Error("loop-erased random walk exceeded 1e9 steps");
        }
        // Retracing the successor pointers erases the loops.
        u = start;
        while (!in_tree[u]) {
            in_tree[u] = 1;
            u = next[u];
        }
    }
}

// Parent pointers of the same tree rooted at new_root.
std::vector<Vertex> reroot(const SpanningTree& t, Vertex new_root) {
    std::vector<Vertex> parent = t.parent;
    Vertex prev = -1;
    Vertex cur = new_root;
    while (cur != -1) {
        Vertex up = parent[cur];
        parent[cur] = prev;
        prev = cur;
        cur = up;
    }
    return parent;
}

} // namespace

std::vector<Edge> SpanningTree::edges() const {
    std::vector<Edge> out;
    out.reserve(parent.size());
    for (Vertex v = 0; v < static_cast<Vertex>(parent.size()); ++v)
        if (parent[v] >= 0)
            out.push_back(make_edge(v, parent[v]));
    std::sort(out.begin(), out.end());
    return out;
}

SpanningTree sample_ust(const Graph& g, Vertex root, Rng& rng) {
    const int n = g.num_nodes();
    std::vector<char> in_tree(n, 0);
    std::vector<Vertex> next(n, -1);
    in_tree[root] = 1;
    wilson_fill(g, in_tree, next, rng);
    next[root] = -1;
    return {std::move(next), root};
}

SpanningTree sample_ust_with_edge(const Graph& g, Vertex a, Vertex b, Rng& rng) {
    if (a == b || !g.has_edge(a, b))
        throw InvariantError("fixed edge {" + std::to_string(a) + "," + std::to_string(b) +
                             "} is not in the graph");
    const int n = g.num_nodes();
    std::vector<char> in_tree(n, 0);
    std::vector<Vertex> next(n, -1);
    in_tree[a] = 1;
    in_tree[b] = 1;
    wilson_fill(g, in_tree, next, rng);
    next[a] = -1;
    next[b] = a;
    return {std::move(next), a};
}

bool is_spanning_tree(const Graph& g, const SpanningTree& t) {
    const int n = g.num_nodes();
    if (static_cast<int>(t.parent.size()) != n || t.root < 0 || t.root >= n || t.parent[t.root] != -1)
        return false;
    int edges = 0;
    for (Vertex v = 0; v < n; ++v) {
        if (v == t.root)
            continue;
        const Vertex p = t.parent[v];
        if (p < 0 || p >= n || !g.has_edge(v, p))
            return false;
        ++edges;
    }
    if (edges != n - 1)
        return false;
    // Every vertex must reach the root without revisiting (no cycles).
    std::vector<char> state(n, 0); // 0 new, 1 on stack, 2 reaches root
    state[t.root] = 2;
    std::vector<Vertex> path;
    for (Vertex v = 0; v < n; ++v) {
        Vertex u = v;
        path.clear();
        while (state[u] == 0) {
            state[u] = 1;
            path.push_back(u);
            u = t.parent[u];
        }
        if (state[u] == 1)
            return false;
        for (Vertex w : path)
            state[w] = 2;
    }
    return true;
}

void aggregate_tree(const SpanningTree& t, std::span<const Vertex> bfs_parent, Vertex pivot,
                    std::span<double> acc) {
    const int n = static_cast<int>(t.parent.size());
    std::vector<Vertex> parent = t.root == pivot ? t.parent : reroot(t, pivot);

    // Euler intervals give O(1) ancestor tests.
    std::vector<int> child_start(n + 1, 0);
    for (Vertex v = 0; v < n; ++v)
        if (parent[v] >= 0)
            ++child_start[parent[v] + 1];
    std::partial_sum(child_start.begin(), child_start.end(), child_start.begin());
    std::vector<Vertex> children(std::max(n - 1, 0));
    std::vector<int> fill(child_start.begin(), child_start.end() - 1);
    for (Vertex v = 0; v < n; ++v)
        if (parent[v] >= 0)
            children[fill[parent[v]]++] = v;

    std::vector<int> tin(n), tout(n);
    std::vector<std::pair<Vertex, int>> stack;
    stack.reserve(n);
    int clock = 0;
    stack.emplace_back(pivot, child_start[pivot]);
    tin[pivot] = clock++;
    while (!stack.empty()) {
        auto& [u, next_child] = stack.back();
        if (next_child < child_start[u + 1]) {
            const Vertex c = children[next_child++];
            tin[c] = clock++;
            stack.emplace_back(c, child_start[c]);
        } else {
            tout[u] = clock++;
            stack.pop_back();
        }
    }
    auto ancestor_or_self = [&](Vertex x, Vertex v) { return tin[x] <= tin[v] && tout[v] <= tout[x]; };

    for (Vertex v = 0; v < n; ++v) {
        if (v == pivot)
            continue;
        int signed_count = 0;
        Vertex x = v;
        while (x != pivot) {
            const Vertex p = bfs_parent[x];
            // BFS path traverses p -> x on its way from the pivot to v.
            if (parent[x] == p && ancestor_or_self(x, v))
                ++signed_count;
            else if (parent[p] == x && ancestor_or_self(p, v))
                --signed_count;
            x = p;
        }
        acc[v] += signed_count;
    }
}

int ust_sample_count(int n, const UstConfig& cfg) {
    if (!(cfg.epsilon > 0.0))
        throw ConfigError("UST epsilon must be positive");
    const double tau = std::ceil(cfg.c_ust * std::log(std::max(n, 2)) / (cfg.epsilon * cfg.epsilon));
    return std::max(1, static_cast<int>(tau));
}

std::size_t UstRepository::stored_trees() const {
    std::size_t total_trees = 0;
    for (const auto& r : rounds)
        total_trees += r.size();
    return total_trees;
}

Vertex choose_pivot(const Graph& g) {
    Vertex best = 0;
    for (Vertex v = 1; v < g.num_nodes(); ++v)
        if (g.degree(v) > g.degree(best))
            best = v;
    return best;
}

namespace {

DiagEstimate diag_from_resistance(const UstRepository& repo, double epsilon) {
    const Eigen::Index n = repo.resistance.size();
    DiagEstimate d;
    d.epsilon = epsilon;
    d.values.resize(n);
    const Vertex u = repo.pivot;
    const double luu = repo.pivot_column[u];
    for (Eigen::Index v = 0; v < n; ++v)
        d.values[v] = v == u ? luu : repo.resistance[v] - luu + 2.0 * repo.pivot_column[v];
    return d;
}

// Sample `count` trees with sampler(rng) on per-tree streams and aggregate them.
template <class Sampler>
std::vector<double> sample_round(const UstRepository& repo, int count, std::uint64_t tag,
                                 std::uint64_t round, std::vector<SpanningTree>& out, Sampler&& sampler) {
    const int n = static_cast<int>(repo.bfs_parent.size());
    out.assign(count, {});
    return kernels::accumulate_jobs_parallel(count, n, [&](int i, std::span<double> acc) {
        Rng rng = make_stream(repo.seed, tag, (round << 32) | static_cast<std::uint64_t>(i));
        out[i] = sampler(rng);
        aggregate_tree(out[i], repo.bfs_parent, repo.pivot, acc);
    });
}

} // namespace

DiagResult approx_diag_lpinv(const Graph& g, const UstConfig& cfg, std::uint64_t seed,
                             const SolverConfig& solver) {
    assert_connected(g);
    const int n = g.num_nodes();
    UstRepository repo;
    repo.config = cfg;
    repo.seed = seed;
    repo.pivot = choose_pivot(g);
    repo.bfs_parent = bfs_tree(g, repo.pivot);
    repo.total = ust_sample_count(n, cfg);
    repo.graph_round = g.round();

    repo.rounds.emplace_back();
    std::vector<double> sums = sample_round(repo, repo.total, stream::kUstInitial, 0, repo.rounds.back(),
                                            [&](Rng& rng) { return sample_ust(g, repo.pivot, rng); });
    repo.weights.push_back(1.0);
    repo.resistance = Eigen::Map<Eigen::VectorXd>(sums.data(), n) / repo.total;
    repo.pivot_column = solve_lpinv_column(g, repo.pivot, solver);

    DiagEstimate diag = diag_from_resistance(repo, cfg.epsilon);
    return {std::move(diag), std::move(repo)};
}

DiagUpdateReport approx_update_diag(const Graph& g_new, UstRepository& repo, DiagEstimate& diag,
                                    const SolverConfig& solver) {
    if (g_new.round() != repo.graph_round + 1)
        throw InvariantError("diag update expects exactly one new edge (repository round " +
                             std::to_string(repo.graph_round) + ", graph round " +
                             std::to_string(g_new.round()) + ")");
    const Edge e = g_new.insertion_log().back();
    const LaplacianOperator op(g_new);

    // R_{G'}(a,b) from one solve on the new graph.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g_new.num_nodes());
    rhs[e.a] = 1.0;
    rhs[e.b] = -1.0;
    const Eigen::VectorXd potential = solve_laplacian(op, rhs, solver);
    const double omega = std::clamp(potential[e.a] - potential[e.b], 0.0, 1.0);

    for (std::size_t i = 0; i < repo.weights.size(); ++i) {
        repo.weights[i] *= (1.0 - omega);
        const auto keep = static_cast<std::size_t>(std::ceil(repo.weights[i] * repo.total));
        if (repo.rounds[i].size() > keep)
            repo.rounds[i].resize(keep); // drop from the tail
    }
    repo.weights.push_back(omega);

    const int count = std::max(1, static_cast<int>(std::ceil(omega * repo.total)));
    repo.rounds.emplace_back();
    std::vector<double> sums =
        sample_round(repo, count, stream::kUstUpdate, static_cast<std::uint64_t>(g_new.round()),
                     repo.rounds.back(), [&](Rng& rng) { return sample_ust_with_edge(g_new, e.a, e.b, rng); });
    const Eigen::VectorXd fresh = Eigen::Map<Eigen::VectorXd>(sums.data(), g_new.num_nodes()) / count;
    repo.resistance = omega * fresh + (1.0 - omega) * repo.resistance;

    while (static_cast<int>(repo.rounds.size()) > std::max(repo.config.max_rounds, 2)) {
        repo.weights[1] += repo.weights[0];
        auto& merged = repo.rounds[1];
        merged.insert(merged.begin(), std::make_move_iterator(repo.rounds[0].begin()),
                      std::make_move_iterator(repo.rounds[0].end()));
        const auto keep = static_cast<std::size_t>(std::ceil(repo.weights[1] * repo.total));
        if (merged.size() > keep)
            merged.resize(keep);
        repo.rounds.erase(repo.rounds.begin());
        repo.weights.erase(repo.weights.begin());
    }

    // Pivot column of the new graph (one extra solve).
    repo.pivot_column = solve_lpinv_column(op, repo.pivot, solver);
    repo.graph_round = g_new.round();
    diag = diag_from_resistance(repo, diag.epsilon);
    return {omega, count};
}

} // namespace kgrip
