#include "kgrip/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kgrip/generators.hpp"
#include "kgrip/graph_io.hpp"
#include "kgrip/greedy.hpp"
#include "kgrip/kernels.hpp"
#include "kgrip/rng.hpp"

namespace kgrip {
namespace {

using json = nlohmann::json;

struct GraphSource {
    std::string input;
    std::string generator;
};

struct RunConfig {
    GraphSource source;
    int k = 1;
    std::string heuristic = "stgreedy";
    GreedyParams params;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string output;
    std::string format = "json";
    std::vector<long long> focus;
    int random_focus = 0;
};

struct LoadedGraph {
    Graph graph;
    std::vector<long long> labels;
    std::string description;
    int dropped = 0;
};

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Quotes a CSV field that contains a separator, quote or newline.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + '"';
}

bool looks_like_generator(const std::string& s) {
    for (const char* prefix : {"er:", "ba:", "ws:"})
        if (s.rfind(prefix, 0) == 0)
            return true;
    return false;
}

LoadedGraph load_graph(const GraphSource& src, std::uint64_t seed) {
    LoadedGraph out;
    if (!src.generator.empty()) {
        GeneratedGraph gen = generate(parse_generator_spec(src.generator), seed);
        out.graph = std::move(gen.graph);
        out.labels.resize(out.graph.num_nodes());
        std::iota(out.labels.begin(), out.labels.end(), 0LL);
        out.description = src.generator;
        out.dropped = gen.dropped;
    } else {
        LabeledGraph lg = load_edge_list(std::filesystem::path(src.input));
        out.graph = std::move(lg.graph);
        out.labels = std::move(lg.labels);
        out.description = src.input;
    }
    if (!is_connected(out.graph)) {
        try {
            assert_connected(out.graph);
        } catch (const Error& e) {
            throw ConfigError(std::string("input graph must be connected; ") + e.what());
        }
    }
    return out;
}

void apply_threads(int requested) {
    int threads = requested;
    if (threads <= 0) {
        if (const char* env = std::getenv("KGRIP_THREADS")) {
            try {
                threads = std::stoi(env);
            } catch (const std::exception&) {
                throw ConfigError(std::string("KGRIP_THREADS must be an integer, got '") + env + "'");
            }
        }
    }
    if (threads > 0)
        kernels::set_threads(threads);
}

json params_json(const Solution& s) {
    const GreedyParams& p = s.params;
    return {{"k", s.k},           {"delta", p.delta},       {"eta", p.eta},       {"cutoff", p.cutoff},
            {"solver_eps", p.solver_eps}, {"diag_eps", p.diag_eps}, {"c_ust", p.c_ust}, {"c_jlt", p.c_jlt},
            {"jlt_dim", p.jlt_dim}, {"time_limit", p.time_limit}};
}

json edges_json(const Solution& s, const std::vector<long long>& labels) {
    json arr = json::array();
    for (const Edge& e : s.inserted_edges)
        arr.push_back({labels[e.a], labels[e.b]});
    return arr;
}

json solution_json(const Solution& s, const std::vector<long long>& labels) {
    json j;
    if (s.focus)
        j["focus"] = labels[*s.focus];
    j["r_initial"] = s.r_initial;
    j["r_final"] = s.r_final;
    j["total_gain"] = s.total_gain();
    j["inserted_edges"] = edges_json(s, labels);
    j["per_edge_true_gain"] = s.per_edge_true_gain;
    j["timings"] = {{"compute", s.focus ? s.amortized_compute : s.timings.compute},
                    {"eval", s.timings.eval},
                    {"update", s.timings.update}};
    j["evaluations"] = s.evaluations;
    return j;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot open output file '" + path + "'");
    f << text;
    if (!f)
        throw IoError("failed writing output file '" + path + "'");
}

const char* kCsvHeader = "focus,step,a,b,true_gain,r_initial,r_final,compute,eval,update\n";

void append_csv(std::ostringstream& csv, const Solution& s, const std::vector<long long>& labels) {
    const std::string focus = s.focus ? std::to_string(labels[*s.focus]) : "";
    const double compute = s.focus ? s.amortized_compute : s.timings.compute;
    for (std::size_t i = 0; i < s.inserted_edges.size(); ++i) {
        const Edge& e = s.inserted_edges[i];
        csv << focus << ',' << i << ',' << labels[e.a] << ',' << labels[e.b] << ','
            << fmt_double(s.per_edge_true_gain[i]) << ',' << fmt_double(s.r_initial) << ','
            << fmt_double(s.r_final) << ',' << fmt_double(compute) << ',' << fmt_double(s.timings.eval) << ','
            << fmt_double(s.timings.update) << '\n';
    }
}

json header_json(const char* command, const RunConfig& cfg, const LoadedGraph& lg, HeuristicKind kind) {
    return {{"command", command},
            {"heuristic", std::string(heuristic_name(kind))},
            {"seed", cfg.seed},
            {"graph",
             {{"source", lg.description}, {"n", lg.graph.num_nodes()}, {"m", lg.graph.num_edges()},
              {"dropped_vertices", lg.dropped}}}};
}

void cmd_optimize(const RunConfig& cfg, std::ostream& out) {
    const HeuristicKind kind = parse_heuristic(cfg.heuristic);
    const LoadedGraph lg = load_graph(cfg.source, cfg.seed);
    const Solution s = run_kgrip(lg.graph, cfg.k, kind, cfg.params, cfg.seed);
    if (cfg.format == "csv") {
        std::ostringstream csv;
        csv << kCsvHeader;
        append_csv(csv, s, lg.labels);
        write_text(cfg.output, csv.str(), out);
        return;
    }
    json j = header_json("optimize", cfg, lg, kind);
    j["params"] = params_json(s);
    j.update(solution_json(s, lg.labels));
    write_text(cfg.output, j.dump(2) + "\n", out);
}

std::vector<Vertex> resolve_focus(const RunConfig& cfg, const LoadedGraph& lg) {
    const int n = lg.graph.num_nodes();
    std::vector<Vertex> focus;
    if (!cfg.focus.empty() && cfg.random_focus > 0)
        throw ConfigError("use either --focus or --random-focus, not both");
    if (cfg.random_focus > 0) {
        if (cfg.random_focus > n)
            throw ConfigError("--random-focus " + std::to_string(cfg.random_focus) + " exceeds n=" +
                              std::to_string(n));
        std::vector<Vertex> all(n);
        std::iota(all.begin(), all.end(), 0);
        Rng rng = make_stream(cfg.seed, stream::kFocus, 0);
        for (int i = 0; i < cfg.random_focus; ++i) {
            std::uniform_int_distribution<int> pick(i, n - 1);
            std::swap(all[i], all[pick(rng)]);
        }
        focus.assign(all.begin(), all.begin() + cfg.random_focus);
        return focus;
    }
    if (cfg.focus.empty())
        throw ConfigError("lrip needs --focus or --random-focus");
    std::map<long long, Vertex> by_label;
    for (Vertex v = 0; v < n; ++v)
        by_label[lg.labels[v]] = v;
    for (long long label : cfg.focus) {
        auto it = by_label.find(label);
        if (it == by_label.end())
            throw ConfigError("focus node " + std::to_string(label) + " is not a vertex of the graph (n=" +
                              std::to_string(n) + ")");
        focus.push_back(it->second);
    }
    return focus;
}

void cmd_lrip(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const HeuristicKind kind = parse_heuristic(cfg.heuristic);
    const LoadedGraph lg = load_graph(cfg.source, cfg.seed);
    const std::vector<Vertex> requested = resolve_focus(cfg, lg);
    const int n = lg.graph.num_nodes();

    std::vector<Vertex> usable;
    json skipped = json::array();
    for (Vertex v : requested) {
        const int free = n - 1 - lg.graph.degree(v);
        if (free < cfg.k) {
            err << "warning: skipping focus node " << lg.labels[v] << " (" << free << " non-neighbors, k=" << cfg.k
                << ")\n";
            skipped.push_back({{"focus", lg.labels[v]}, {"reason", "saturated"}, {"non_neighbors", free}});
        } else {
            usable.push_back(v);
        }
    }
    std::vector<Solution> sols;
    if (!usable.empty())
        sols = run_klrip(lg.graph, usable, cfg.k, kind, cfg.params, cfg.seed);

    if (cfg.format == "csv") {
        std::ostringstream csv;
        csv << kCsvHeader;
        for (const Solution& s : sols)
            append_csv(csv, s, lg.labels);
        write_text(cfg.output, csv.str(), out);
        return;
    }
    json j = header_json("lrip", cfg, lg, kind);
    GreedyParams p = cfg.params;
    j["params"] = {{"k", cfg.k},           {"delta", p.delta},       {"eta", p.eta},       {"cutoff", p.cutoff},
                   {"solver_eps", p.solver_eps}, {"diag_eps", p.diag_eps}, {"c_ust", p.c_ust}, {"c_jlt", p.c_jlt},
                   {"jlt_dim", p.jlt_dim}, {"time_limit", p.time_limit}};
    json focus = json::array();
    for (Vertex v : requested)
        focus.push_back(lg.labels[v]);
    j["focus_nodes"] = focus;
    j["skipped"] = skipped;
    const double pre = sols.empty() ? 0.0 : sols.front().timings.compute;
    j["preprocessing"] = {{"compute", pre}, {"amortized", sols.empty() ? 0.0 : sols.front().amortized_compute}};
    json results = json::array();
    for (const Solution& s : sols)
        results.push_back(solution_json(s, lg.labels));
    j["results"] = results;
    write_text(cfg.output, j.dump(2) + "\n", out);
}

void cmd_generate(const std::string& spec, std::uint64_t seed, const std::string& output, std::ostream& out,
                  std::ostream& err) {
    const GeneratedGraph gen = generate(parse_generator_spec(spec), seed);
    std::ostringstream text;
    write_edge_list(text, gen.graph);
    write_text(output, text.str(), out);
    err << "generated n=" << gen.graph.num_nodes() << " m=" << gen.graph.num_edges();
    if (gen.dropped > 0)
        err << " (largest component kept, " << gen.dropped << " of " << gen.requested_n << " vertices dropped)";
    err << "\n";
}

struct BenchCell {
    std::string instance;
    HeuristicKind kind;
    int k;
    std::string status;
    double gain = 0.0;
    double wall = 0.0;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

void cmd_bench(const std::vector<std::string>& instances, const std::string& heuristics,
               const std::vector<int>& ks, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (instances.empty())
        throw ConfigError("bench needs at least one --instance");
    std::vector<HeuristicKind> kinds;
    for (const std::string& name : split_list(heuristics))
        kinds.push_back(parse_heuristic(name));
    if (kinds.empty())
        throw ConfigError("bench needs at least one heuristic");

    std::vector<LoadedGraph> graphs;
    for (const std::string& inst : instances) {
        GraphSource src;
        (looks_like_generator(inst) ? src.generator : src.input) = inst;
        graphs.push_back(load_graph(src, cfg.seed));
    }

    std::vector<BenchCell> cells;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        for (int k : ks) {
            for (HeuristicKind kind : kinds) {
                BenchCell c{instances[gi], kind, k, "ok"};
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    c.gain = run_kgrip(graphs[gi].graph, k, kind, cfg.params, cfg.seed).total_gain();
                } catch (const TimeoutError&) {
                    c.status = "timeout";
                } catch (const SolverError& e) {
                    c.status = "solver-error";
                    err << "warning: " << instances[gi] << " " << heuristic_name(kind) << " k=" << k << ": "
                        << e.what() << "\n";
                }
                c.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                cells.push_back(c);
            }
        }
    }

    auto reference = [&](const BenchCell& c) -> const BenchCell* {
        for (const BenchCell& r : cells)
            if (r.instance == c.instance && r.k == c.k && r.kind == HeuristicKind::StGreedy && r.status == "ok")
                return &r;
        return nullptr;
    };

    std::ostringstream csv;
    csv << "instance,heuristic,k,status,total_gain,quality,wall_time,speedup\n";
    for (const BenchCell& c : cells) {
        const BenchCell* ref = c.status == "ok" ? reference(c) : nullptr;
        csv << csv_field(c.instance) << ',' << heuristic_name(c.kind) << ',' << c.k << ',' << c.status << ','
            << (c.status == "ok" ? fmt_double(c.gain) : "") << ',' << (ref ? fmt_double(c.gain / ref->gain) : "")
            << ',' << fmt_double(c.wall) << ',' << (ref ? fmt_double(ref->wall / c.wall) : "") << '\n';
    }
    // Geometric means over instances, one row per compared heuristic and k.
    const bool has_reference = std::find(kinds.begin(), kinds.end(), HeuristicKind::StGreedy) != kinds.end();
    for (int k : ks) {
        for (HeuristicKind kind : kinds) {
            if (has_reference && kind == HeuristicKind::StGreedy)
                continue;
            double log_gain = 0.0, log_quality = 0.0, log_speedup = 0.0, log_wall = 0.0;
            int count = 0, rated = 0;
            for (const BenchCell& c : cells) {
                if (c.kind != kind || c.k != k || c.status != "ok" || !(c.gain > 0.0))
                    continue;
                ++count;
                log_gain += std::log(c.gain);
                log_wall += std::log(std::max(c.wall, 1e-9));
                if (const BenchCell* ref = reference(c)) {
                    ++rated;
                    log_quality += std::log(c.gain / ref->gain);
                    log_speedup += std::log(ref->wall / std::max(c.wall, 1e-9));
                }
            }
            csv << "geomean," << heuristic_name(kind) << ',' << k << ',' << (count > 0 ? "ok" : "empty") << ','
                << (count > 0 ? fmt_double(std::exp(log_gain / count)) : "") << ','
                << (rated > 0 ? fmt_double(std::exp(log_quality / rated)) : "") << ','
                << (count > 0 ? fmt_double(std::exp(log_wall / count)) : "") << ','
                << (rated > 0 ? fmt_double(std::exp(log_speedup / rated)) : "") << '\n';
        }
    }
    write_text(cfg.output, csv.str(), out);
}

void add_run_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("-i,--input", cfg.source.input, "Edge-list file");
    cmd->add_option("-g,--generate", cfg.source.generator, "Generator spec, e.g. er:n=300,p=0.05");
    cmd->add_option("-k", cfg.k, "Number of edges to insert")->check(CLI::PositiveNumber);
    cmd->add_option("--heuristic", cfg.heuristic,
                    "stgreedy | simplstoch | colstoch | simplstoch-jlt | colstoch-jlt | specstoch");
    cmd->add_option("--delta", cfg.params.delta, "Stochastic-greedy accuracy in (0,1)");
    cmd->add_option("--eta", cfg.params.eta, "JLT distortion in (0,1)");
    cmd->add_option("--cutoff", cfg.params.cutoff, "Eigenpairs kept by specstoch");
    cmd->add_option("--solver-eps", cfg.params.solver_eps, "Laplacian solver relative residual");
    cmd->add_option("--diag-eps", cfg.params.diag_eps, "UST diagonal accuracy");
    cmd->add_option("--jlt-dim", cfg.params.jlt_dim, "Sketch rows (0 = automatic)");
    cmd->add_option("--time-limit", cfg.params.time_limit, "Wall-clock budget in seconds (0 = none)");
    cmd->add_option("--seed", cfg.seed, "Random seed");
    cmd->add_option("--threads", cfg.threads, "Worker threads (fallback: KGRIP_THREADS)");
    cmd->add_option("-o,--output", cfg.output, "Output path (default stdout)");
    cmd->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

void require_source(const RunConfig& cfg) {
    if (cfg.source.input.empty() == cfg.source.generator.empty())
        throw ConfigError("give exactly one of --input or --generate");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robustness improvement by edge insertion (k-GRIP / k-LRIP)", "kgrip"};
    app.require_subcommand(1);

    RunConfig opt;
    CLI::App* optimize = app.add_subcommand("optimize", "Insert k edges anywhere in the graph");
    add_run_options(optimize, opt);

    RunConfig lrip;
    CLI::App* lrip_cmd = app.add_subcommand("lrip", "Insert k edges incident to each focus node");
    add_run_options(lrip_cmd, lrip);
    lrip_cmd->add_option("--focus", lrip.focus, "Focus node ids")->delimiter(',');
    lrip_cmd->add_option("--random-focus", lrip.random_focus, "Number of random focus nodes");

    std::string gen_spec;
    std::uint64_t gen_seed = 42;
    std::string gen_output;
    CLI::App* gen = app.add_subcommand("generate", "Write a synthetic graph as an edge list");
    gen->add_option("spec", gen_spec, "er:n=..,p=.. | ba:n=..,m=..,m0=.. | ws:n=..,degree=..,p=..")->required();
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("-o,--output", gen_output, "Output path (default stdout)");

    RunConfig bench;
    std::vector<std::string> instances;
    std::string bench_heuristics = "stgreedy,simplstoch,colstoch";
    std::vector<int> bench_ks{2, 5, 20};
    CLI::App* bench_cmd = app.add_subcommand("bench", "Compare heuristics on several instances (CSV)");
    bench_cmd->add_option("--instance", instances, "Edge-list path or generator spec (repeatable)");
    bench_cmd->add_option("--heuristics", bench_heuristics, "Comma-separated heuristics");
    bench_cmd->add_option("-k", bench_ks, "Budgets")->delimiter(',');
    bench_cmd->add_option("--delta", bench.params.delta, "Stochastic-greedy accuracy in (0,1)");
    bench_cmd->add_option("--eta", bench.params.eta, "JLT distortion in (0,1)");
    bench_cmd->add_option("--cutoff", bench.params.cutoff, "Eigenpairs kept by specstoch");
    bench_cmd->add_option("--solver-eps", bench.params.solver_eps, "Laplacian solver relative residual");
    bench_cmd->add_option("--diag-eps", bench.params.diag_eps, "UST diagonal accuracy");
    bench.params.time_limit = 600.0;
    bench_cmd->add_option("--time-limit", bench.params.time_limit, "Per-cell budget in seconds");
    bench_cmd->add_option("--seed", bench.seed, "Random seed");
    bench_cmd->add_option("--threads", bench.threads, "Worker threads (fallback: KGRIP_THREADS)");
    bench_cmd->add_option("-o,--output", bench.output, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (optimize->parsed()) {
            require_source(opt);
            apply_threads(opt.threads);
            cmd_optimize(opt, out);
        } else if (lrip_cmd->parsed()) {
            require_source(lrip);
            apply_threads(lrip.threads);
            cmd_lrip(lrip, out, err);
        } else if (gen->parsed()) {
            cmd_generate(gen_spec, gen_seed, gen_output, out, err);
        } else if (bench_cmd->parsed()) {
            apply_threads(bench.threads);
            cmd_bench(instances, bench_heuristics, bench_ks, bench, out, err);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const TimeoutError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}

} // namespace kgrip
