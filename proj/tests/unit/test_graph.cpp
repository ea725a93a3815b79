#include <random>

#include <gtest/gtest.h>

#include "kcn/error.hpp"
#include "kcn/graph.hpp"
#include "oracles.hpp"

using namespace kcn;

namespace {

Corpus corpus_of(const std::vector<std::pair<int, std::vector<std::string>>>& rows) {
    Corpus c;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        c.records.push_back({"r" + std::to_string(i), "v", rows[i].first, rows[i].second});
    }
    return c;
}

}  // namespace

TEST(Build, WeightCountsArticles) {
    const auto g = build_kcn(corpus_of({{2020, {"ai", "education"}}, {2021, {"education", "ai"}}}), SliceSpec::all());
    ASSERT_EQ(g.node_count(), 2);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(g.weight(g.index_of("ai"), g.index_of("education")), 2.0);
    EXPECT_EQ(g.freq(g.index_of("ai")), 2u);
}

TEST(Build, SingleArticleTriangle) {
    const auto g = build_kcn(corpus_of({{2020, {"a", "b", "c"}}}), SliceSpec::all());
    EXPECT_EQ(g.edge_count(), 3u);
    for (const auto& e : g.edges()) EXPECT_EQ(e.weight, 1.0);
}

TEST(Build, YearSliceAndIsolatedKeyword) {
    const auto c = corpus_of({{2020, {"a", "b"}}, {2021, {"c", "d"}}, {2021, {"solo"}}});
    const auto g = build_kcn(c, SliceSpec::year(2021));
    EXPECT_EQ(g.node_count(), 3);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_TRUE(g.find("solo").has_value());
    EXPECT_FALSE(g.find("a").has_value());
    EXPECT_EQ(degree(g, "solo"), 0u);
    EXPECT_THROW(build_kcn(c, SliceSpec::year(1999)), Error);
    EXPECT_EQ(build_kcn(c, SliceSpec::range("early", 2019, 2020)).node_count(), 2);
}

TEST(Build, DeterministicNumbering) {
    auto c = corpus_of({{2020, {"x", "y"}}, {2020, {"z", "x"}}});
    const auto g1 = build_kcn(c, SliceSpec::all());
    std::swap(c.records[0], c.records[1]);
    const auto g2 = build_kcn(c, SliceSpec::all());
    EXPECT_EQ(g1.labels(), g2.labels());
    EXPECT_EQ(to_graphml(g1), to_graphml(g2));
}

TEST(Build, PropertySymmetricNoLoopsHandshake) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> kw(0, 25);
    std::uniform_int_distribution<int> len(1, 6);
    std::vector<std::pair<int, std::vector<std::string>>> rows;
    for (int i = 0; i < 80; ++i) {
        std::set<std::string> s;
        for (int j = len(rng); j > 0; --j) s.insert("k" + std::to_string(kw(rng)));
        rows.push_back({2020, {s.begin(), s.end()}});
    }
    const auto g = build_kcn(corpus_of(rows), SliceSpec::all());
    const auto& a = g.adjacency();
    EXPECT_EQ((Eigen::SparseMatrix<double>(a.transpose()) - a).norm(), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) EXPECT_EQ(g.weight(v, v), 0.0);
    EXPECT_EQ(degrees(g).sum(), 2.0 * static_cast<double>(g.edge_count()));
    for (const auto& e : g.edges()) EXPECT_GE(e.weight, 1.0);
}

TEST(Graph, ConstructorRejectsBadEdges) {
    EXPECT_THROW(oracle::graph({"a", "b"}, {{0, 0, 1.0}}), Error);
    EXPECT_THROW(oracle::graph({"a", "b"}, {{0, 1, 0.0}}), Error);
    EXPECT_THROW(oracle::graph({"a", "b"}, {{0, 1, 1.0}, {1, 0, 1.0}}), Error);
    EXPECT_THROW(oracle::graph({"a", "b"}, {{0, 2, 1.0}}), Error);
}

TEST(Graph, LargestComponent) {
    const auto tri = oracle::graph({"a", "b", "c"}, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
    EXPECT_EQ(largest_component(tri).node_count(), 3);
    const auto plus = oracle::graph({"a", "b", "c", "d"}, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
    const auto lc = largest_component(plus);
    EXPECT_EQ(lc.node_count(), 3);
    EXPECT_FALSE(lc.find("d").has_value());
}

TEST(Graph, DegreeStrengthNeighbors) {
    const auto star = oracle::graph({"c", "x", "y", "z"}, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
    EXPECT_EQ(degree(star, "c"), 3u);
    EXPECT_EQ(strength(star, "c"), 3.0);
    EXPECT_EQ(degree(star, "x"), 1u);
    EXPECT_EQ(strength(star, "x"), 1.0);
    EXPECT_EQ(neighbors(star, "c"), (std::vector<std::string>{"x", "y", "z"}));
    const auto g = oracle::graph({"v", "p", "q"}, {{0, 1, 2}, {0, 2, 5}});
    EXPECT_EQ(degree(g, "v"), 2u);
    EXPECT_EQ(strength(g, "v"), 7.0);
    EXPECT_THROW(degree(g, "missing"), Error);
}

TEST(Export, Formats) {
    const auto g = oracle::graph({"a,b", "c"}, {{0, 1, 2}});
    EXPECT_EQ(to_edge_csv(g), "source,target,weight\n\"a,b\",c,2\n");
    const auto ml = to_graphml(g);
    EXPECT_NE(ml.find("<graphml"), std::string::npos);
    EXPECT_NE(ml.find("attr.name=\"weight\""), std::string::npos);
    EXPECT_NE(ml.find("a,b"), std::string::npos);
    const auto dot = to_dot(g);
    EXPECT_NE(dot.find("graph"), std::string::npos);
    EXPECT_NE(dot.find("--"), std::string::npos);
}
