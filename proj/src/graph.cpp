#include "kgrip/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

namespace kgrip {

Graph::Graph(int n) : adj_(static_cast<std::size_t>(std::max(n, 0))) {}

Graph Graph::from_edges(int n, std::span<const Edge> edges) {
    Graph g(n);
    for (const Edge& e : edges) {
        if (e.a == e.b)
            throw InvariantError("self-loop at vertex " + std::to_string(e.a));
        if (e.a < 0 || e.b < 0 || e.a >= n || e.b >= n)
            throw InvariantError("edge endpoint out of range");
        if (g.has_edge(e.a, e.b))
            throw InvariantError("parallel edge {" + std::to_string(e.a) + "," +
                                 std::to_string(e.b) + "}");
        g.add_unchecked(e.a, e.b);
    }
    return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    // search the shorter list
    const auto& list = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    const Vertex other = adj_[u].size() <= adj_[v].size() ? v : u;
    return std::binary_search(list.begin(), list.end(), other);
}

void Graph::add_unchecked(Vertex u, Vertex v) {
    auto& au = adj_[u];
    au.insert(std::lower_bound(au.begin(), au.end(), v), v);
    auto& av = adj_[v];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    ++m_;
}

void Graph::insert_edge(Vertex u, Vertex v) {
    if (u == v)
        throw InvariantError("cannot insert self-loop at vertex " + std::to_string(u));
    if (u < 0 || v < 0 || u >= num_nodes() || v >= num_nodes())
        throw InvariantError("edge endpoint out of range");
    if (has_edge(u, v))
        throw InvariantError("edge {" + std::to_string(u) + "," + std::to_string(v) +
                             "} already exists");
    add_unchecked(u, v);
    log_.push_back(make_edge(u, v));
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(m_));
    for (Vertex u = 0; u < num_nodes(); ++u)
        for (Vertex v : adj_[u])
            if (u < v)
                out.push_back({u, v});
    return out;
}

long long Graph::num_non_edges() const {
    const long long n = num_nodes();
    return n * (n - 1) / 2 - m_;
}

bool Graph::check_invariants() const {
    long long twice_m = 0;
    for (Vertex u = 0; u < num_nodes(); ++u) {
        const auto& list = adj_[u];
        if (!std::is_sorted(list.begin(), list.end()))
            return false;
        if (std::adjacent_find(list.begin(), list.end()) != list.end())
            return false;
        for (Vertex v : list) {
            if (v == u || v < 0 || v >= num_nodes())
                return false;
            if (!std::binary_search(adj_[v].begin(), adj_[v].end(), u))
                return false;
        }
        twice_m += static_cast<long long>(list.size());
    }
    return twice_m == 2 * m_;
}

std::vector<int> connected_components(const Graph& g) {
    const int n = g.num_nodes();
    std::vector<int> label(n, -1);
    int next = 0;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < n; ++s) {
        if (label[s] != -1)
            continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            for (Vertex v : g.neighbors(u)) {
                if (label[v] == -1) {
                    label[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return label;
}

bool is_connected(const Graph& g) {
    if (g.num_nodes() <= 1)
        return true;
    auto label = connected_components(g);
    return std::all_of(label.begin(), label.end(), [](int c) { return c == 0; });
}

void assert_connected(const Graph& g) {
    if (g.num_nodes() == 0)
        throw InvariantError("graph has no vertices");
    auto label = connected_components(g);
    for (Vertex v = 1; v < g.num_nodes(); ++v) {
        if (label[v] != 0)
            throw InvariantError("graph is disconnected: vertices 0 and " + std::to_string(v) +
                                 " lie in different components");
    }
}

Graph largest_component(const Graph& g) {
    auto label = connected_components(g);
    if (label.empty())
        return g;
    const int count = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<int> size(count, 0);
    for (int c : label)
        ++size[c];
    const int best = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());

    std::vector<Vertex> remap(g.num_nodes(), -1);
    int n = 0;
    for (Vertex v = 0; v < g.num_nodes(); ++v)
        if (label[v] == best)
            remap[v] = n++;

    std::vector<Edge> edges;
    for (const Edge& e : g.edges())
        if (label[e.a] == best)
            edges.push_back(make_edge(remap[e.a], remap[e.b]));
    return Graph::from_edges(n, edges);
}

std::vector<Vertex> bfs_tree(const Graph& g, Vertex root) {
    std::vector<Vertex> parent(g.num_nodes(), -2);
    parent[root] = -1;
    std::queue<Vertex> queue;
    queue.push(root);
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop();
        for (Vertex v : g.neighbors(u)) {
            if (parent[v] == -2) {
                parent[v] = u;
                queue.push(v);
            }
        }
    }
    return parent;
}

} // namespace kgrip
