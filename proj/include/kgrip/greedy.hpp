#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgrip/common.hpp"
#include "kgrip/graph.hpp"
#include "kgrip/pseudoinverse.hpp"

namespace kgrip {

enum class HeuristicKind { StGreedy, SimplStoch, ColStoch, SimplStochJLT, ColStochJLT, SpecStoch };

/// Lowercase CLI names: stgreedy, simplstoch, colstoch, simplstoch-jlt,
/// colstoch-jlt, specstoch.
std::string_view heuristic_name(HeuristicKind kind);
/// Inverse of heuristic_name (case-insensitive). Throws ConfigError.
HeuristicKind parse_heuristic(std::string_view name);
std::span<const HeuristicKind> all_heuristics();

struct GreedyParams {
    double delta = 0.9;
    double eta = 0.55;
    int cutoff = 50;
    double solver_eps = 1e-6;
    double diag_eps = 0.1;
    double c_ust = 1.0;
    double c_jlt = 4.0;
    /// Sketch rows; 0 picks max(4, ceil(c_jlt ln s)) for universe size s.
    int jlt_dim = 0;
    int dense_cap = kDefaultDenseCap;
    /// Wall-clock budget per run in seconds; 0 disables it.
    double time_limit = 0.0;
};

struct PhaseTimings {
    double compute = 0.0;
    double eval = 0.0;
    double update = 0.0;
};

struct Solution {
    HeuristicKind heuristic = HeuristicKind::StGreedy;
    GreedyParams params;
    int k = 0;
    std::uint64_t seed = 0;
    std::optional<Vertex> focus;
    std::vector<Edge> inserted_edges;
    /// Exact drop of total resistance caused by each insertion.
    std::vector<double> per_edge_true_gain;
    double r_initial = 0.0;
    double r_final = 0.0;
    PhaseTimings timings;
    /// k-LRIP only: shared preprocessing time divided by the number of focus nodes.
    double amortized_compute = 0.0;
    long long evaluations = 0;

    double total_gain() const;
};

/// Inserts k edges into a copy of g. Requires a connected graph and at least
/// k non-edges. Throws TimeoutError when params.time_limit is exceeded.
Solution run_kgrip(const Graph& g, int k, HeuristicKind kind, const GreedyParams& params, std::uint64_t seed);

/// One Solution per focus node; every inserted edge is incident to its focus.
/// Preprocessing runs once and is restored per focus node, so each result
/// equals run_klrip on that node alone with the same seed.
std::vector<Solution> run_klrip(const Graph& g, std::span<const Vertex> focus, int k, HeuristicKind kind,
                                const GreedyParams& params, std::uint64_t seed);

/// Process-wide tally of insertions checked for a strict decrease of the
/// total resistance, and of those that failed it.
struct MonotonicityCounters {
    long long checked = 0;
    long long violations = 0;
};
MonotonicityCounters monotonicity_counters();
void reset_monotonicity_counters();

} // namespace kgrip
