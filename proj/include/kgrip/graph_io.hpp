#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "kgrip/graph.hpp"

namespace kgrip {

struct LabeledGraph {
    Graph graph;
    /// Original id of each compacted vertex.
    std::vector<long long> labels;
};

/// Reads "u v" lines; '#' and '%' start comment lines. Duplicate edges and
/// self-loops are dropped, ids are compacted in first-appearance order.
LabeledGraph load_edge_list(std::istream& in);
LabeledGraph load_edge_list(const std::filesystem::path& path);

/// One "a b" line per edge with a < b, sorted.
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list(const std::filesystem::path& path, const Graph& g);

} // namespace kgrip
