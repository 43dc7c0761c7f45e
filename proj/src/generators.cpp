#include "kgrip/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "kgrip/rng.hpp"

namespace kgrip {
namespace {

Graph erdos_renyi(const ErdosRenyiParams& p, Rng& rng) {
    if (p.n < 1)
        throw ConfigError("er: n must be >= 1");
    if (!(p.p >= 0.0 && p.p <= 1.0))
        throw ConfigError("er: p must lie in [0,1]");
    std::vector<Edge> edges;
    std::bernoulli_distribution coin(p.p);
    for (Vertex u = 0; u < p.n; ++u)
        for (Vertex v = u + 1; v < p.n; ++v)
            if (coin(rng))
                edges.push_back({u, v});
    return Graph::from_edges(p.n, edges);
}

Graph barabasi_albert(const BarabasiAlbertParams& p, Rng& rng) {
    if (p.m_attach < 1)
        throw ConfigError("ba: m must be >= 1");
    if (p.m0 < p.m_attach)
        throw ConfigError("ba: m0 must be >= m");
    if (p.n < p.m0)
        throw ConfigError("ba: n must be >= m0");

    Graph g(p.n);
    // Every edge endpoint appears once here, so uniform draws are degree-proportional.
    std::vector<Vertex> endpoints;
    for (Vertex u = 0; u < p.m0; ++u)
        for (Vertex v = u + 1; v < p.m0; ++v) {
            g.insert_edge(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }

    std::vector<Vertex> targets;
    for (Vertex v = p.m0; v < p.n; ++v) {
        targets.clear();
        if (endpoints.empty()) {
            // m0 == 1: seed vertex has no degree yet
            for (Vertex u = 0; u < v && static_cast<int>(targets.size()) < p.m_attach; ++u)
                targets.push_back(u);
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
            while (static_cast<int>(targets.size()) < std::min(p.m_attach, v)) {
                Vertex t = endpoints[pick(rng)];
                if (std::find(targets.begin(), targets.end(), t) == targets.end())
                    targets.push_back(t);
            }
        }
        for (Vertex t : targets) {
            g.insert_edge(v, t);
            endpoints.push_back(v);
            endpoints.push_back(t);
        }
    }
    return Graph::from_edges(p.n, g.edges());
}

Graph watts_strogatz(const WattsStrogatzParams& p, Rng& rng) {
    if (p.n < 3)
        throw ConfigError("ws: n must be >= 3");
    if (p.degree < 2 || p.degree % 2 != 0)
        throw ConfigError("ws: degree must be even and >= 2");
    if (p.degree >= p.n)
        throw ConfigError("ws: degree must be < n");
    if (!(p.rewire_prob >= 0.0 && p.rewire_prob <= 1.0))
        throw ConfigError("ws: rewiring probability must lie in [0,1]");

    Graph g(p.n);
    const int half = p.degree / 2;
    for (Vertex u = 0; u < p.n; ++u)
        for (int j = 1; j <= half; ++j)
            g.insert_edge(u, (u + j) % p.n);

    // Rewire in lattice order, one offset at a time (Watts-Strogatz original).
    std::vector<Edge> edges = g.edges();
    std::bernoulli_distribution coin(p.rewire_prob);
    std::uniform_int_distribution<Vertex> pick(0, p.n - 1);
    std::map<Edge, bool> present;
    for (const Edge& e : edges)
        present[e] = true;
    std::vector<int> deg(p.n, p.degree);

    for (int j = 1; j <= half; ++j) {
        for (Vertex u = 0; u < p.n; ++u) {
            const Vertex v = (u + j) % p.n;
            if (!coin(rng))
                continue;
            if (deg[u] >= p.n - 1)
                continue;
            Vertex w;
            do {
                w = pick(rng);
            } while (w == u || present.count(make_edge(u, w)));
            auto it = present.find(make_edge(u, v));
            if (it == present.end())
                continue; // already rewired away
            present.erase(it);
            present[make_edge(u, w)] = true;
            --deg[v];
            ++deg[w];
        }
    }
    std::vector<Edge> result;
    result.reserve(present.size());
    for (const auto& [e, _] : present)
        result.push_back(e);
    return Graph::from_edges(p.n, result);
}

} // namespace

GeneratedGraph generate(const GeneratorParams& params, std::uint64_t seed) {
    Rng rng(seed);
    Graph g = std::visit(
        [&](const auto& p) -> Graph {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ErdosRenyiParams>)
                return erdos_renyi(p, rng);
            else if constexpr (std::is_same_v<T, BarabasiAlbertParams>)
                return barabasi_albert(p, rng);
            else
                return watts_strogatz(p, rng);
        },
        params);
    const int requested = g.num_nodes();
    if (!is_connected(g))
        g = largest_component(g);
    const int dropped = requested - g.num_nodes();
    return {std::move(g), requested, dropped};
}

GeneratorParams parse_generator_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string model = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw ConfigError("generator spec: expected key=value, got '" + item + "'");
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    auto take = [&](const std::string& key, const std::string& fallback) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (fallback.empty())
                throw ConfigError("generator spec '" + model + "' needs " + key);
            return fallback;
        }
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto as_int = [](const std::string& s) {
        try {
            std::size_t pos = 0;
            int v = std::stoi(s, &pos);
            if (pos != s.size())
                throw ConfigError("bad integer '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            throw ConfigError("bad integer '" + s + "'");
        }
    };
    auto as_double = [](const std::string& s) {
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size())
                throw ConfigError("bad number '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            throw ConfigError("bad number '" + s + "'");
        }
    };

    GeneratorParams out;
    if (model == "er") {
        out = ErdosRenyiParams{as_int(take("n", "")), as_double(take("p", ""))};
    } else if (model == "ba") {
        BarabasiAlbertParams p;
        p.n = as_int(take("n", ""));
        p.m_attach = as_int(take("m", "4"));
        p.m0 = as_int(take("m0", std::to_string(p.m_attach)));
        out = p;
    } else if (model == "ws") {
        WattsStrogatzParams p;
        p.n = as_int(take("n", ""));
        p.degree = as_int(take("degree", "4"));
        p.rewire_prob = as_double(take("p", "0.01"));
        out = p;
    } else {
        throw ConfigError("unknown generator model '" + model + "' (expected er, ba or ws)");
    }
    if (!kv.empty())
        throw ConfigError("generator spec: unknown key '" + kv.begin()->first + "'");
    return out;
}

} // namespace kgrip
