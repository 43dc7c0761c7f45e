#include "kgrip/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

namespace kgrip {
namespace {

std::string_view next_token(std::string_view& rest) {
    std::size_t start = rest.find_first_not_of(" \t\r,");
    if (start == std::string_view::npos) {
        rest = {};
        return {};
    }
    std::size_t end = rest.find_first_of(" \t\r,", start);
    std::string_view tok = rest.substr(start, end == std::string_view::npos ? end : end - start);
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
    return tok;
}

long long parse_id(std::string_view tok, std::size_t line) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || value < 0)
        throw ParseError(line, "expected non-negative integer vertex id, got '" + std::string(tok) + "'");
    return value;
}

} // namespace

LabeledGraph load_edge_list(std::istream& in) {
    std::unordered_map<long long, Vertex> compact;
    std::vector<long long> labels;
    std::set<Edge> edges;

    auto id_of = [&](long long raw) {
        auto [it, inserted] = compact.try_emplace(raw, static_cast<Vertex>(labels.size()));
        if (inserted)
            labels.push_back(raw);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view rest = line;
        std::string_view first = next_token(rest);
        if (first.empty() || first.front() == '#' || first.front() == '%')
            continue;
        std::string_view second = next_token(rest);
        if (second.empty())
            throw ParseError(lineno, "expected two vertex ids");
        // Trailing columns (weights, timestamps) are ignored.
        const long long u = parse_id(first, lineno);
        const long long v = parse_id(second, lineno);
        const Vertex cu = id_of(u);
        const Vertex cv = id_of(v);
        if (cu != cv)
            edges.insert(make_edge(cu, cv));
    }
    if (in.bad())
        throw IoError("read failure");
    if (labels.empty())
        throw ParseError(lineno, "edge list contains no edges");

    std::vector<Edge> list(edges.begin(), edges.end());
    return {Graph::from_edges(static_cast<int>(labels.size()), list), std::move(labels)};
}

LabeledGraph load_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    for (const Edge& e : g.edges())
        out << e.a << ' ' << e.b << '\n';
}

void write_edge_list(const std::filesystem::path& path, const Graph& g) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    write_edge_list(out, g);
    if (!out)
        throw IoError("write failure on '" + path.string() + "'");
}

} // namespace kgrip
