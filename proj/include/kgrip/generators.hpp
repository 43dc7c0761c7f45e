#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "kgrip/graph.hpp"

namespace kgrip {

struct ErdosRenyiParams {
    int n = 0;
    double p = 0.0;
};

struct BarabasiAlbertParams {
    int n = 0;
    int m_attach = 4;
    int m0 = 4;
};

struct WattsStrogatzParams {
    int n = 0;
    int degree = 4; // even
    double rewire_prob = 0.0;
};

using GeneratorParams = std::variant<ErdosRenyiParams, BarabasiAlbertParams, WattsStrogatzParams>;

struct GeneratedGraph {
    Graph graph;
    int requested_n = 0;
    /// Vertices removed when restricting to the largest component.
    int dropped = 0;
};

/// Deterministic for a fixed seed. Disconnected results are reduced to their
/// largest connected component.
GeneratedGraph generate(const GeneratorParams& params, std::uint64_t seed);

/// Parses "er:n=100,p=0.05", "ba:n=1000,m=4,m0=4", "ws:n=50,degree=4,p=0.01".
GeneratorParams parse_generator_spec(const std::string& spec);

} // namespace kgrip
