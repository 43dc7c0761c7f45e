#include "kgrip/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

namespace kgrip {

long long candidate_size(SampleMode mode, int n, long long m_or_deg, int k, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw ConfigError("delta must lie in (0,1), got " + std::to_string(delta));
    if (k < 1)
        throw ConfigError("k must be >= 1");
    const double log_term = std::log(1.0 / delta);
    long long universe = 0;
    double raw = 0.0;
    switch (mode) {
    case SampleMode::GripPairs:
        universe = static_cast<long long>(n) * (n - 1) / 2 - m_or_deg;
        raw = static_cast<double>(universe) / k * log_term;
        break;
    case SampleMode::GripColumns:
        universe = n;
        raw = n * std::sqrt(log_term / k);
        break;
    case SampleMode::Lrip:
        universe = n - 1 - m_or_deg;
        raw = static_cast<double>(universe) / k * log_term;
        break;
    }
    if (universe < 1)
        throw ConfigError("candidate universe is empty");
    const long long s = static_cast<long long>(std::ceil(raw - 1e-12));
    return std::clamp(s, 1LL, universe);
}

std::vector<Edge> all_non_edges(const Graph& g) {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(g.num_non_edges()));
    const int n = g.num_nodes();
    for (Vertex a = 0; a < n; ++a) {
        auto nb = g.neighbors(a); // sorted
        auto it = std::upper_bound(nb.begin(), nb.end(), a);
        for (Vertex b = a + 1; b < n; ++b) {
            if (it != nb.end() && *it == b) {
                ++it;
                continue;
            }
            out.push_back({a, b});
        }
    }
    return out;
}

namespace {

template <class T>
void partial_shuffle(std::vector<T>& items, std::size_t s, Rng& rng) {
    for (std::size_t i = 0; i < s; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
        std::swap(items[i], items[pick(rng)]);
    }
    items.resize(s);
}

} // namespace

std::vector<Edge> sample_pairs_uniform(const Graph& g, long long s, Rng& rng) {
    const long long universe = g.num_non_edges();
    if (s < 1)
        throw ConfigError("sample size must be >= 1");
    std::vector<Edge> out;
    if (universe == 0)
        return out;
    if (s >= universe / 4) {
        out = all_non_edges(g);
        if (s < universe)
            partial_shuffle(out, static_cast<std::size_t>(s), rng);
    } else {
        // Rejection sampling: at most a quarter of the universe is drawn.
        const int n = g.num_nodes();
        std::uniform_int_distribution<Vertex> pick(0, n - 1);
        std::unordered_set<long long> seen;
        seen.reserve(static_cast<std::size_t>(2 * s));
        while (static_cast<long long>(out.size()) < s) {
            const Vertex u = pick(rng);
            const Vertex v = pick(rng);
            if (u == v || g.has_edge(u, v))
                continue;
            const Edge e = make_edge(u, v);
            if (seen.insert(static_cast<long long>(e.a) * n + e.b).second)
                out.push_back(e);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Vertex> sample_non_neighbors(const Graph& g, Vertex focus, long long s, Rng& rng) {
    if (s < 1)
        throw ConfigError("sample size must be >= 1");
    std::vector<Vertex> pool;
    pool.reserve(g.num_nodes());
    for (Vertex b = 0; b < g.num_nodes(); ++b)
        if (b != focus && !g.has_edge(focus, b))
            pool.push_back(b);
    if (s < static_cast<long long>(pool.size()))
        partial_shuffle(pool, static_cast<std::size_t>(s), rng);
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::vector<Vertex> sample_weighted_vertices(std::span<const double> weights, std::span<const Vertex> pool,
                                             long long s, Rng& rng) {
    if (s < 1)
        throw ConfigError("sample size must be >= 1");
    std::vector<Vertex> items;
    if (pool.empty()) {
        items.resize(weights.size());
        std::iota(items.begin(), items.end(), 0);
    } else {
        items.assign(pool.begin(), pool.end());
    }
    // Efraimidis-Spirakis keys ln(u)/w; zero weights rank last with a
    // uniform secondary key.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    struct Keyed {
        double key;
        double tie;
        Vertex v;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(items.size());
    for (Vertex v : items) {
        const double w = std::max(weights[v], 0.0);
        double u = unit(rng);
        while (u <= 0.0)
            u = unit(rng);
        const double tie = unit(rng);
        const double key = w > 0.0 ? std::log(u) / w : -std::numeric_limits<double>::infinity();
        keyed.push_back({key, tie, v});
    }
    const std::size_t take = static_cast<std::size_t>(std::min<long long>(s, static_cast<long long>(keyed.size())));
    std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(take), keyed.end(),
                      [](const Keyed& x, const Keyed& y) {
                          if (x.key != y.key)
                              return x.key > y.key;
                          return x.tie > y.tie;
                      });
    std::vector<Vertex> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
        out.push_back(keyed[i].v);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Edge> pairs_within(const Graph& g, std::span<const Vertex> vertices) {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (vertices[i] != vertices[j] && !g.has_edge(vertices[i], vertices[j]))
                out.push_back(make_edge(vertices[i], vertices[j]));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace kgrip
