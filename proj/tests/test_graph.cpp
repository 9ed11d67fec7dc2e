#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace synnet;

namespace {

syntax_graph peter_graph() {
    const std::vector<annotated_document> docs{fixtures::peter_document()};
    return build_graph(docs);
}

} // namespace

TEST(Graph, PeterNodesAndEdges) {
    auto g = peter_graph();
    EXPECT_EQ(g.node_count(), 9u);
    EXPECT_EQ(g.edge_count(), 7u);
    EXPECT_TRUE(g.has_edge("telephone", "go"));
    EXPECT_FALSE(g.has_edge("go", "telephone"));
    EXPECT_FALSE(g.nodes.count("xxx"));
    EXPECT_TRUE(g.dropped.empty());
    const auto& src = g.provenance.at({"in", "put"});
    EXPECT_EQ(src.corpus, "peter07");
    EXPECT_EQ(src.utterance, 5u);
    EXPECT_EQ(src.line, 43u);
}

TEST(Graph, CaseFoldedIdentity) {
    annotated_utterance u;
    u.tokens = make_tokens({"Telephone", "go", "telephone", "GO"});
    u.structures = {{{1, 2}, {{1, 2}}}, {{3, 4}, {{3, 4}}}};
    annotated_document d{"c", {u}};
    const std::vector<annotated_document> docs{d};
    auto g = build_graph(docs);
    EXPECT_EQ(g.nodes, (std::set<std::string>{"go", "telephone"}));
    EXPECT_EQ(g.edge_count(), 1u);
}

TEST(Graph, SelfLoopsDroppedAndLogged) {
    annotated_utterance u;
    u.tokens = make_tokens({"need", "Need"});
    u.structures = {{{1, 2}, {{1, 2}}}};
    annotated_document d{"c", {u}};
    const std::vector<annotated_document> docs{d};
    auto g = build_graph(docs);
    EXPECT_EQ(g.nodes, std::set<std::string>{"need"});
    EXPECT_TRUE(g.edges.empty());
    ASSERT_EQ(g.dropped.size(), 1u);
    EXPECT_EQ(g.dropped[0].word, "need");
}

TEST(Graph, RejectedContributeNothingIsolatedWordsContributeNodes) {
    annotated_utterance rej;
    rej.tokens = make_tokens({"oh", "my"});
    rej.structures = {{{1, 2}, {{1, 2}}}};
    rej.decision = {decision_status::rejected, decision_reason::onomatopoeia, ""};
    annotated_utterance iso;
    iso.tokens = make_tokens({"hello", "mommy"});
    iso.decision.status = decision_status::isolated_words;
    annotated_document d{"c", {rej, iso}};
    const std::vector<annotated_document> docs{d};
    auto g = build_graph(docs);
    EXPECT_EQ(g.nodes, (std::set<std::string>{"hello", "mommy"}));
    EXPECT_TRUE(g.edges.empty());
}

TEST(Graph, Components) {
    auto comps = components(peter_graph());
    ASSERT_EQ(comps.size(), 2u);
    EXPECT_EQ(comps[0].members, (std::vector<std::string>{"go", "in", "put", "right", "telephone", "there"}));
    EXPECT_EQ(comps[1].members, (std::vector<std::string>{"it", "my", "need"}));
    auto gcc = giant_component(peter_graph());
    EXPECT_FALSE(gcc.directed);
    EXPECT_EQ(gcc.edge_count(), 5u);
    EXPECT_TRUE(gcc.has_edge("go", "telephone"));
}

TEST(Graph, GccTieBreaksLexicographically) {
    syntax_graph g;
    g.nodes = {"b", "c", "a", "z"};
    g.edges = {{"z", "c"}, {"b", "a"}};
    auto gcc = giant_component(g);
    EXPECT_EQ(gcc.nodes, (std::set<std::string>{"a", "b"}));
    EXPECT_TRUE(giant_component(syntax_graph{}).nodes.empty());
}

TEST(Graph, AdjacencyForms) {
    auto g = peter_graph();
    auto d = adjacency(g, true);
    auto u = adjacency(g, false);
    EXPECT_FALSE(d.symmetric());
    EXPECT_TRUE(u.symmetric());
    std::size_t ones = 0;
    for (auto x : d.a) ones += x;
    EXPECT_EQ(ones, 7u);
    EXPECT_EQ(to_matrix_text(adjacency(giant_component(g), true)).substr(0, 38), "# go in put right telephone there\n0 0 ");
}

TEST(Graph, Exports) {
    auto g = peter_graph();
    auto tsv = to_edge_list(g);
    EXPECT_EQ(tsv.rfind("# isolated\n"), tsv.size() - 11);
    EXPECT_NE(tsv.find("telephone\tgo\n"), std::string::npos);
    syntax_graph lone;
    lone.nodes = {"hello"};
    EXPECT_EQ(to_edge_list(lone), "# edges\n# isolated\nhello\n");

    auto j = graph_to_json(g);
    EXPECT_EQ(j["nodes"].size(), 9u);
    EXPECT_EQ(j["in_degree"]["go"], 2);
    EXPECT_EQ(j["out_degree"]["there"], 2);
    EXPECT_EQ(j["edges"][0]["corpus"], "peter07");
}

// Properties over random documents.

TEST(GraphProperty, DedupMonotonicityPartition) {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 200; ++k) {
        std::vector<annotated_document> docs;
        for (auto n = rng() % 4; n > 0; --n) docs.push_back(fixtures::random_document(rng));
        auto g = build_graph(docs);

        auto twice = docs;
        twice.insert(twice.end(), docs.begin(), docs.end());
        EXPECT_TRUE(same_shape(build_graph(twice), g));

        auto more = docs;
        more.push_back(fixtures::random_document(rng));
        auto bigger = build_graph(more);
        EXPECT_TRUE(std::includes(bigger.nodes.begin(), bigger.nodes.end(), g.nodes.begin(), g.nodes.end()));
        EXPECT_TRUE(std::includes(bigger.edges.begin(), bigger.edges.end(), g.edges.begin(), g.edges.end()));

        std::set<std::string> seen;
        std::size_t total = 0;
        for (const auto& c : components(g)) {
            total += c.size();
            for (const auto& m : c.members) EXPECT_TRUE(seen.insert(m).second);
        }
        EXPECT_EQ(total, g.node_count());
        EXPECT_EQ(seen, g.nodes);

        auto u = adjacency(g, false);
        EXPECT_TRUE(u.symmetric());
    }
}

TEST(GraphProperty, ComponentsMatchFloodFill) {
    std::mt19937_64 rng(37);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 1 + rng() % 40;
        oracle::edge_list el;
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (auto m = rng() % (n + 5); m > 0; --m) el.emplace_back(pick(rng), pick(rng));
        syntax_graph g;
        for (std::size_t i = 0; i < n; ++i) g.nodes.insert("w" + std::to_string(i));
        for (auto [a, b] : el)
            if (a != b) g.edges.insert({"w" + std::to_string(a), "w" + std::to_string(b)});

        std::multiset<std::size_t> mine, theirs;
        for (const auto& c : components(g)) mine.insert(c.size());
        for (const auto& c : oracle::components(oracle::dense(n, el))) theirs.insert(c.size());
        EXPECT_EQ(mine, theirs);
    }
}
