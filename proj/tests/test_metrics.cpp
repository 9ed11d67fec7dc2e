#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace synnet;

namespace {

adjacency_list peter_gcc() {
    const std::vector<annotated_document> docs{fixtures::peter_document()};
    return to_adjacency_list(giant_component(build_graph(docs)));
}

oracle::matrix dense(const adjacency_list& g) {
    oracle::edge_list el;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (auto j : g.adj[i]) el.emplace_back(i, j);
    return oracle::dense(g.n(), el);
}

adjacency_list complete(std::size_t n) {
    oracle::edge_list el;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) el.emplace_back(i, j);
    return adjacency_list::from_edges(n, el);
}

} // namespace

TEST(AvgDegree, Examples) {
    EXPECT_EQ(avg_degree(complete(3)), 2.0);
    EXPECT_EQ(avg_degree(adjacency_list::from_edges(2, {{0, 1}})), 1.0);
    EXPECT_DOUBLE_EQ(*avg_degree(peter_gcc()), 10.0 / 6.0);
    EXPECT_FALSE(avg_degree(adjacency_list{}).has_value());
}

TEST(Clustering, Examples) {
    auto p3 = adjacency_list::from_edges(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(clustering_local(p3, 1), 0.0);
    EXPECT_EQ(clustering_local(p3, 0), 0.0);
    auto k4 = complete(4);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(clustering_local(k4, i), 1.0);
    EXPECT_EQ(clustering_avg(adjacency_list::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})), 0.0);
    EXPECT_EQ(clustering_avg(peter_gcc()), 0.0);
    EXPECT_THROW(clustering_local(p3, 3), std::out_of_range);
    EXPECT_FALSE(clustering_avg(adjacency_list{}).has_value());
}

TEST(PathLength, Examples) {
    EXPECT_EQ(path_length(complete(3)), 1.0);
    auto g = peter_gcc();
    EXPECT_DOUBLE_EQ(path_length(g), *oracle::path_length(dense(g)));
    EXPECT_DOUBLE_EQ(path_length(g), 31.0 / 15.0);
    EXPECT_THROW(path_length(adjacency_list::from_edges(3, {{0, 1}})), std::invalid_argument);
    EXPECT_THROW(path_length(adjacency_list::from_edges(1, {})), std::invalid_argument);
}

TEST(Poisson, Examples) {
    EXPECT_EQ(poisson_baseline(5.0 / 3.0, 5.0 / 3.0, 25.0 / 9.0), 1.0);
    EXPECT_DOUBLE_EQ(*poisson_baseline(6, 5.0 / 3.0, 25.0 / 9.0), 1.0 + std::log(3.6) / std::log(5.0 / 3.0));
    EXPECT_FALSE(poisson_baseline(6, 2, 2).has_value());
    EXPECT_FALSE(poisson_baseline(6, 0, 1).has_value());
    EXPECT_FALSE(poisson_baseline(0, 2, 4).has_value());
}

TEST(SmallWorld, Rule) {
    EXPECT_TRUE(small_world(3.0, 3.0, 1000));
    EXPECT_FALSE(small_world(99, 2.0, 100));
    EXPECT_TRUE(small_world(2.1, 2.0, 100, 0.5));
    EXPECT_FALSE(small_world(2.1, 2.0, 20, 0.5));
    EXPECT_FALSE(small_world(3.5, 2.0, 100, 0.5));
}

TEST(Assortativity, Examples) {
    EXPECT_EQ(assortativity(adjacency_list::from_edges(4, {{0, 1}, {0, 2}, {0, 3}})), -1.0);
    EXPECT_FALSE(assortativity(adjacency_list::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})).has_value());
    EXPECT_FALSE(assortativity(complete(5)).has_value());
    EXPECT_FALSE(assortativity(adjacency_list::from_edges(3, {})).has_value());
    auto g = peter_gcc();
    EXPECT_NEAR(*assortativity(g), *oracle::assortativity(dense(g)), 1e-12);
}

TEST(StructureSize, Examples) {
    const std::vector<annotated_document> peter{fixtures::peter_document()};
    auto st = avg_structure_size(peter);
    EXPECT_EQ(st.count, 4u);
    EXPECT_EQ(st.total_size, 12u);
    EXPECT_EQ(st.mean(), 3.0);

    annotated_utterance one;
    one.tokens = make_tokens({"hello"});
    one.decision.status = decision_status::isolated_words;
    const std::vector<annotated_document> single{{"c", {one}}};
    EXPECT_EQ(avg_structure_size(single).mean(), 1.0);
    EXPECT_FALSE(avg_structure_size({}).mean().has_value());
}

TEST(Report, Peter) {
    const std::vector<annotated_document> docs{fixtures::peter_document()};
    auto r = compute_report("peter07", docs);
    EXPECT_EQ(r.n_words, 9u);
    EXPECT_EQ(r.n_edges, 7u);
    EXPECT_EQ(r.gcc_size, 6u);
    EXPECT_EQ(r.gcc_edges, 5u);
    EXPECT_DOUBLE_EQ(*r.poisson_d, 1.0 + std::log(3.6) / std::log(5.0 / 3.0));
    EXPECT_EQ(r.small_world, false);
    EXPECT_EQ(r.s_avg, 3.0);

    metrics_config words;
    words.poisson_n = poisson_population::words;
    auto rw = compute_report("peter07", docs, words);
    EXPECT_DOUBLE_EQ(*rw.poisson_d, 1.0 + std::log(9.0 / (5.0 / 3.0)) / std::log(5.0 / 3.0));
}

TEST(Report, EmptyCorpusHasUndefinedMetrics) {
    auto r = compute_report("empty", {});
    EXPECT_EQ(r.gcc_size, 0u);
    EXPECT_FALSE(r.avg_degree);
    EXPECT_FALSE(r.path_length);
    EXPECT_FALSE(r.small_world);
    EXPECT_EQ(to_csv_row(r), "empty,0,0,,,,,,,,0");
    EXPECT_TRUE(report_to_json(r)["rho"].is_null());
}

TEST(Report, SerializationRoundTrip) {
    const std::vector<annotated_document> docs{fixtures::peter_document()};
    auto r = compute_report("peter, \"07\"", docs);
    r.child_age = age::parse("2;1.3");
    EXPECT_EQ(report_from_json(report_to_json(r)), r);
    EXPECT_EQ(to_csv_row(r).substr(0, 16), "\"peter, \"\"07\"\"\",");
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(2), "2");
}

// Invariants over random connected graphs and documents.

TEST(MetricProperty, OracleEquivalenceAndBounds) {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 2 + rng() % 49;
        auto el = oracle::random_connected(rng, n, std::uniform_real_distribution<double>(0, 0.4)(rng));
        auto g = adjacency_list::from_edges(n, el);
        auto m = oracle::dense(n, el);
        EXPECT_NEAR(*avg_degree(g), oracle::avg_degree(m), 1e-12);
        EXPECT_NEAR(*clustering_avg(g), oracle::clustering(m), 1e-12);
        EXPECT_NEAR(path_length(g), *oracle::path_length(m), 1e-12);
        auto rho = assortativity(g);
        auto orho = oracle::assortativity(m);
        ASSERT_EQ(rho.has_value(), orho.has_value());
        if (rho) {
            EXPECT_NEAR(*rho, *orho, 1e-12);
            EXPECT_GE(*rho, -1.0 - 1e-12);
            EXPECT_LE(*rho, 1.0 + 1e-12);
        }
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_GE(clustering_local(g, i), 0.0);
            EXPECT_LE(clustering_local(g, i), 1.0);
        }
        EXPECT_DOUBLE_EQ(*avg_degree(g) * static_cast<double>(n), 2.0 * static_cast<double>(g.edge_count()));
        EXPECT_GE(path_length(g), 1.0);
    }
}

TEST(MetricProperty, CompleteGraphPathLengthIsOne) {
    for (std::size_t n = 2; n <= 30; ++n) EXPECT_EQ(path_length(complete(n)), 1.0);
}

TEST(MetricProperty, AssortativityIgnoresEdgeMultiplicity) {
    // Listing every edge twice scales every sum by 2, which c = 1/m absorbs.
    std::mt19937_64 rng(43);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 3 + rng() % 30;
        auto g = adjacency_list::from_edges(n, oracle::random_connected(rng, n, 0.15));
        oracle::edge_list el;
        for (std::size_t i = 0; i < n; ++i)
            for (auto j : g.adj[i])
                if (i < j) el.emplace_back(i, j);
        auto doubled = el;
        doubled.insert(doubled.end(), el.begin(), el.end());
        auto m = oracle::dense(n, el);
        auto k_deg = oracle::degrees(m);
        double s1 = 0, s2 = 0, s3 = 0, s1d = 0, s2d = 0, s3d = 0;
        for (auto [a, b] : el) {
            s1 += k_deg[a] * k_deg[b];
            s2 += 0.5 * (k_deg[a] + k_deg[b]);
            s3 += 0.5 * (k_deg[a] * k_deg[a] + k_deg[b] * k_deg[b]);
        }
        for (auto [a, b] : doubled) {
            s1d += k_deg[a] * k_deg[b];
            s2d += 0.5 * (k_deg[a] + k_deg[b]);
            s3d += 0.5 * (k_deg[a] * k_deg[a] + k_deg[b] * k_deg[b]);
        }
        auto rho_of = [](double c, double a, double b, double d) {
            return (c * a - (c * b) * (c * b)) / (c * d - (c * b) * (c * b));
        };
        auto rho = assortativity(g);
        if (!rho) continue;
        const double m1 = static_cast<double>(el.size());
        EXPECT_NEAR(rho_of(1 / m1, s1, s2, s3), *rho, 1e-12);
        EXPECT_NEAR(rho_of(1 / (2 * m1), s1d, s2d, s3d), *rho, 1e-12);
    }
}

TEST(MetricProperty, StructureSizeIgnoresUtteranceOrder) {
    std::mt19937_64 rng(47);
    for (int k = 0; k < 200; ++k) {
        auto doc = fixtures::random_document(rng, 10);
        const std::vector<annotated_document> a{doc};
        std::shuffle(doc.utterances.begin(), doc.utterances.end(), rng);
        const std::vector<annotated_document> b{doc};
        auto sa = avg_structure_size(a), sb = avg_structure_size(b);
        EXPECT_EQ(sa.total_size, sb.total_size);
        EXPECT_EQ(sa.count, sb.count);
        if (sa.count) EXPECT_GE(*sa.mean(), 1.0);
    }
}
