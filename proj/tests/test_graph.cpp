#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "kgrip/generators.hpp"
#include "kgrip/graph.hpp"
#include "kgrip/graph_io.hpp"
#include "support/oracles.hpp"

using namespace kgrip;

namespace {

LabeledGraph load(const std::string& text) {
    std::istringstream in(text);
    return load_edge_list(in);
}

} // namespace

TEST(GraphIo, PathFromTwoLines) {
    const LabeledGraph lg = load("0 1\n1 2");
    EXPECT_EQ(lg.graph.num_nodes(), 3);
    EXPECT_EQ(lg.graph.num_edges(), 2);
    EXPECT_TRUE(lg.graph.has_edge(0, 1));
    EXPECT_TRUE(lg.graph.has_edge(1, 2));
}

TEST(GraphIo, DuplicatesAndLoopsDropped) {
    const LabeledGraph lg = load("0 1\n1 0\n1 1");
    EXPECT_EQ(lg.graph.num_nodes(), 2);
    EXPECT_EQ(lg.graph.num_edges(), 1);
}

TEST(GraphIo, NonIntegerTokenReportsLine) {
    try {
        load("a b");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1);
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
}

TEST(GraphIo, LaterLineNumberReported) {
    try {
        load("# header\n0 1\n\n1 x\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4);
    }
}

TEST(GraphIo, CommentsSeparatorsAndExtraColumns) {
    const LabeledGraph lg = load("% matrix market style\n# comment\n10,20,1.5\n20\t30 7\n\n");
    EXPECT_EQ(lg.graph.num_nodes(), 3);
    EXPECT_EQ(lg.graph.num_edges(), 2);
    EXPECT_EQ(lg.labels, (std::vector<long long>{10, 20, 30}));
}

TEST(GraphIo, RejectsNegativeIdsAndSingleTokens) {
    EXPECT_THROW(load("0 -1\n"), ParseError);
    EXPECT_THROW(load("5\n"), ParseError);
}

TEST(GraphIo, EmptyInputIsError) { EXPECT_THROW(load("# nothing\n"), ParseError); }

TEST(GraphIo, MissingFileIsIoError) {
    EXPECT_THROW(load_edge_list(std::filesystem::path("/nonexistent/kgrip/graph.txt")), IoError);
}

TEST(GraphIo, InsertSerializeLoadRoundTrip) {
    Graph g = oracle::path(5);
    g.insert_edge(0, 4);
    std::ostringstream out;
    write_edge_list(out, g);
    const LabeledGraph back = load(out.str());
    ASSERT_EQ(back.graph.num_nodes(), 5);
    std::set<Edge> original, loaded;
    for (const Edge& e : g.edges())
        original.insert(e);
    for (const Edge& e : back.graph.edges())
        loaded.insert(make_edge(static_cast<Vertex>(back.labels[e.a]), static_cast<Vertex>(back.labels[e.b])));
    EXPECT_EQ(original, loaded);
}

TEST(Graph, InsertClosesTriangle) {
    Graph g = oracle::path(3);
    g.insert_edge(0, 2);
    EXPECT_EQ(g.num_edges(), 3);
    EXPECT_EQ(g.round(), 1);
    EXPECT_EQ(g.insertion_log().back(), (Edge{0, 2}));
}

TEST(Graph, InsertExistingEdgeFails) {
    Graph g = oracle::complete(3);
    EXPECT_THROW(g.insert_edge(0, 1), InvariantError);
    EXPECT_THROW(g.insert_edge(1, 1), InvariantError);
    EXPECT_THROW(g.insert_edge(0, 7), InvariantError);
}

TEST(Graph, StarInsertion) {
    Graph g = oracle::star(4);
    g.insert_edge(1, 2);
    EXPECT_EQ(g.num_edges(), 4);
    EXPECT_EQ(g.insertion_log().size(), 1u);
    g.check_invariants();
}

TEST(Graph, FromEdgesRejectsBadInput) {
    EXPECT_THROW(Graph::from_edges(3, std::vector<Edge>{{0, 1}, {0, 1}}), InvariantError);
    EXPECT_THROW(Graph::from_edges(3, std::vector<Edge>{{1, 1}}), InvariantError);
    EXPECT_THROW(Graph::from_edges(3, std::vector<Edge>{{0, 3}}), InvariantError);
}

TEST(Graph, NonEdgeCount) {
    EXPECT_EQ(oracle::path(3).num_non_edges(), 1);
    EXPECT_EQ(oracle::complete(5).num_non_edges(), 0);
    EXPECT_EQ(oracle::star(6).num_non_edges(), 10);
}

TEST(Graph, InvariantsHoldOnRandomGraphs) {
    for (int seed = 0; seed < 10; ++seed) {
        Graph g = oracle::random_connected(30, 0.1, seed);
        for (const Edge& e : oracle::non_edges(g))
            if ((e.a + e.b + seed) % 7 == 0)
                g.insert_edge(e.a, e.b);
        g.check_invariants();
        for (Vertex v = 0; v < g.num_nodes(); ++v)
            for (Vertex u : g.neighbors(v))
                EXPECT_TRUE(g.has_edge(u, v));
    }
}

TEST(Connectivity, Examples) {
    EXPECT_NO_THROW(assert_connected(oracle::complete(3)));
    EXPECT_NO_THROW(assert_connected(Graph(1)));
    const Graph two = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {2, 3}});
    EXPECT_FALSE(is_connected(two));
    try {
        assert_connected(two);
        FAIL() << "expected an error";
    } catch (const InvariantError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("0"), std::string::npos);
        EXPECT_NE(msg.find("2"), std::string::npos);
    }
}

TEST(Connectivity, LargestComponent) {
    const Graph g = Graph::from_edges(7, std::vector<Edge>{{0, 1}, {2, 3}, {3, 4}, {4, 5}, {5, 2}});
    const Graph lcc = largest_component(g);
    EXPECT_EQ(lcc.num_nodes(), 4);
    EXPECT_EQ(lcc.num_edges(), 4);
    EXPECT_TRUE(is_connected(lcc));
}

TEST(Connectivity, BfsTreeParents) {
    const Graph g = oracle::path(4);
    const std::vector<Vertex> parent = bfs_tree(g, 2);
    EXPECT_EQ(parent, (std::vector<Vertex>{1, 2, -1, 2}));
}

TEST(Generators, BarabasiAlbertEdgeCount) {
    const GeneratedGraph gen = generate(BarabasiAlbertParams{1000, 4, 4}, 1);
    EXPECT_EQ(gen.graph.num_nodes(), 1000);
    EXPECT_EQ(gen.graph.num_edges(), 4LL * (1000 - 4) + 6);
    EXPECT_TRUE(is_connected(gen.graph));
}

TEST(Generators, ErdosRenyiCompleteLimit) {
    const GeneratedGraph gen = generate(ErdosRenyiParams{100, 1.0}, 7);
    EXPECT_EQ(gen.graph.num_edges(), 4950);
}

TEST(Generators, WattsStrogatzRingLattice) {
    const GeneratedGraph gen = generate(WattsStrogatzParams{50, 4, 0.0}, 3);
    EXPECT_EQ(gen.graph.num_edges(), 100);
    for (Vertex v = 0; v < 50; ++v) {
        EXPECT_EQ(gen.graph.degree(v), 4);
        EXPECT_TRUE(gen.graph.has_edge(v, (v + 1) % 50));
        EXPECT_TRUE(gen.graph.has_edge(v, (v + 2) % 50));
    }
}

TEST(Generators, DeterministicPerSeed) {
    for (const GeneratorParams& p :
         {GeneratorParams{ErdosRenyiParams{80, 0.05}}, GeneratorParams{BarabasiAlbertParams{80, 2, 3}},
          GeneratorParams{WattsStrogatzParams{80, 4, 0.2}}}) {
        EXPECT_EQ(generate(p, 5).graph.edges(), generate(p, 5).graph.edges());
        EXPECT_NE(generate(p, 5).graph.edges(), generate(p, 6).graph.edges());
    }
}

TEST(Generators, SparseErdosRenyiKeepsLargestComponent) {
    const GeneratedGraph gen = generate(ErdosRenyiParams{200, 0.01}, 2);
    EXPECT_TRUE(is_connected(gen.graph));
    EXPECT_EQ(gen.graph.num_nodes() + gen.dropped, 200);
    EXPECT_GT(gen.dropped, 0);
}

TEST(Generators, SpecParsing) {
    const auto er = std::get<ErdosRenyiParams>(parse_generator_spec("er:n=100,p=0.05"));
    EXPECT_EQ(er.n, 100);
    EXPECT_DOUBLE_EQ(er.p, 0.05);
    const auto ba = std::get<BarabasiAlbertParams>(parse_generator_spec("ba:n=50,m=3,m0=4"));
    EXPECT_EQ(ba.m_attach, 3);
    EXPECT_EQ(ba.m0, 4);
    const auto ws = std::get<WattsStrogatzParams>(parse_generator_spec("ws:n=30,degree=6,p=0.1"));
    EXPECT_EQ(ws.degree, 6);
    EXPECT_THROW(parse_generator_spec("xx:n=3"), ConfigError);
    EXPECT_THROW(generate(parse_generator_spec("er:n=10,p=2"), 1), ConfigError);
    EXPECT_THROW(parse_generator_spec("er:n=10"), ConfigError);
}

TEST(Generators, InvalidParameters) {
    EXPECT_THROW(generate(ErdosRenyiParams{10, -0.1}, 1), ConfigError);
    EXPECT_THROW(generate(BarabasiAlbertParams{10, 5, 4}, 1), ConfigError);
    EXPECT_THROW(generate(WattsStrogatzParams{10, 3, 0.1}, 1), ConfigError);
    EXPECT_THROW(generate(WattsStrogatzParams{4, 4, 0.1}, 1), ConfigError);
}
