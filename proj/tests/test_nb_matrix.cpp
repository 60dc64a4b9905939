#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "nbwalk/errors.hpp"
#include "nbwalk/graph.hpp"
#include "nbwalk/nb_matrix.hpp"

using namespace nbwalk;

namespace {

FiniteGraph random_graph(std::mt19937_64& rng, std::size_t n, double p) {
    std::vector<Edge> edges;
    std::bernoulli_distribution coin(p);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (coin(rng)) edges.emplace_back(u, v);
    if (edges.empty()) edges.emplace_back(0, 1);
    return FiniteGraph::from_edges(n, edges);
}

FiniteGraph petersen() {
    std::vector<Edge> e;
    for (Vertex i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);
        e.emplace_back(i, i + 5);
        e.emplace_back(i + 5, (i + 2) % 5 + 5);
    }
    return FiniteGraph::from_edges(10, e);
}

}  // namespace

TEST_CASE("small-graph walk counts", "[nb]") {
    auto k4 = build_complete(4);
    auto a = nb_counts(k4, 3);
    REQUIRE(a.size() == 4);
    CHECK(a[0].entries == Matrix<BigInt>::identity(4));
    CHECK(a[1].entries == k4.adjacency_matrix<BigInt>());
    CHECK(a[2].entries(0, 0) == 0);
    CHECK(a[2].entries(0, 1) == 2);
    CHECK(a[3].entries(0, 0) == 6);
    CHECK(a[3].entries(0, 3) == 2);
    CHECK(a[3].step == 3);
    CHECK(a[3].graph_id == k4.id());

    CHECK(nb_counts(build_cycle(5), 5)[5].entries(0, 0) == 2);
    auto t52 = nb_counts(build_torus({5, 2}), 6);
    CHECK(t52[4].entries(0, 0) == 8);
    CHECK(t52[6].entries(0, 0) == 40);

    CHECK_THROWS_AS(nb_counts(k4, -1), InvalidArgument);
}

TEST_CASE("leaves end non-backtracking walks", "[nb]") {
    const Edge star_edges[] = {{0, 1}, {0, 2}, {0, 3}};
    auto star = FiniteGraph::from_edges(4, star_edges);
    auto a = nb_counts(star, 4);
    for (Vertex v = 1; v < 4; ++v) CHECK(a[1].entries(0, v) == 1);
    for (int k = 2; k <= 4; ++k)
        for (Vertex v = 0; v < 4; ++v) CHECK(a[k].entries(0, v) == 0);

    const Edge path_edges[] = {{0, 1}, {1, 2}, {2, 3}};
    auto path = FiniteGraph::from_edges(4, path_edges);
    auto p = nb_counts(path, 4);
    CHECK(p[1].entries(1, 0) == 1);
    CHECK(p[1].entries(1, 2) == 1);
    CHECK(p[2].entries(1, 3) == 1);
    CHECK(p[2].entries(1, 1) == 0);
    for (int k = 3; k <= 4; ++k)
        for (Vertex v = 0; v < 4; ++v) CHECK(p[k].entries(1, v) == 0);
}

TEST_CASE("isolated vertices keep zero rows", "[nb]") {
    const Edge e[] = {{0, 1}, {1, 2}, {2, 0}};
    auto g = FiniteGraph::from_edges(4, e);
    auto a = nb_counts(g, 5);
    for (int k = 1; k <= 5; ++k)
        for (Vertex v = 0; v < 4; ++v) CHECK(a[k].entries(3, v) == 0);
    CHECK(a[3].entries(0, 0) == 2);
}

TEST_CASE("recurrence, generating function and DFS oracle agree", "[nb][property]") {
    std::vector<FiniteGraph> graphs{build_cycle(3), build_cycle(5), build_complete(4), build_complete(5), petersen()};
    std::mt19937_64 rng(7);
    for (int i = 0; i < 12; ++i) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
        graphs.push_back(random_graph(rng, n, 0.45));
    }
    const int k_max = 8;
    for (const auto& g : graphs) {
        auto rec = nb_counts(g, k_max);
        auto gf = gen_func_counts(g, k_max);
        for (int k = 0; k <= k_max; ++k) CHECK(rec[k].entries == gf[k].entries);
        for (Vertex u = 0; u < g.vertex_count(); ++u) {
            auto dfs = nb_counts_brute_force_table(g, u, k_max);
            for (int k = 0; k <= k_max; ++k)
                for (Vertex v = 0; v < g.vertex_count(); ++v) CHECK(rec[k].entries(u, v) == dfs[k][v]);
        }
        for (Vertex t = 0; t < g.vertex_count(); ++t) {
            auto col = nb_count_column(g, t, k_max);
            for (int k = 0; k <= k_max; ++k)
                for (Vertex u = 0; u < g.vertex_count(); ++u) CHECK(col[k][u] == rec[k].entries(u, t));
        }
        if (g.regular_degree() && *g.regular_degree() >= 1) {
            for (int k = 0; k <= k_max; ++k) CHECK(nb_counts_regular_closed_form(g, k).entries == rec[k].entries);
        }
    }
}

TEST_CASE("count matrices are symmetric and rows sum to r (r-1)^{k-1}", "[nb][property]") {
    for (const auto& g : {build_cycle(6), build_complete(5), build_torus({4, 2}), petersen()}) {
        std::size_t r = *g.regular_degree();
        auto a = nb_counts(g, 9);
        for (int k = 1; k <= 9; ++k) {
            CHECK(a[k].entries.is_symmetric());
            BigInt expected = BigInt(r) * power(static_cast<std::int64_t>(r) - 1, k - 1);
            for (Vertex u = 0; u < g.vertex_count(); ++u) {
                BigInt row = 0;
                for (Vertex v = 0; v < g.vertex_count(); ++v) row += a[k].entries(u, v);
                CHECK(row == expected);
            }
        }
    }
}

TEST_CASE("torus diagonal matches the lattice while walks cannot wrap", "[nb]") {
    const long z2[] = {0, 8, 40, 312, 2240};
    auto g = build_torus({11, 2});
    auto col = nb_count_column(g, 0, 10);
    for (int n = 1; n <= 5; ++n) CHECK(col[2 * n][0] == z2[n - 1]);
}

TEST_CASE("closed form rejects irregular graphs", "[nb]") {
    const Edge e[] = {{0, 1}, {1, 2}};
    auto path = FiniteGraph::from_edges(3, e);
    CHECK_THROWS_AS(nb_counts_regular_closed_form(path, 3), RegularityError);
    CHECK_THROWS_AS(nb_transition(path, 3), RegularityError);
    const Edge single[] = {{0, 1}};
    CHECK_THROWS_AS(nb_transition(FiniteGraph::from_edges(2, single), 2), UnsupportedDegree);
}

TEST_CASE("DFS oracle respects its budget", "[nb]") {
    auto g = build_cycle(5);
    CHECK_THROWS_AS(nb_counts_brute_force(g, 0, 0, 13), OracleBudgetError);
    CHECK_THROWS_AS(nb_counts_brute_force(build_torus({8, 2}), 0, 0, 4), OracleBudgetError);
    Budgets wide;
    wide.oracle_depth = 14;
    CHECK(nb_counts_brute_force(g, 0, 0, 14, wide) == 0);
    CHECK(nb_counts_brute_force(g, 0, 0, 10) == 2);
}

TEST_CASE("transition matrices", "[nb]") {
    auto k4 = build_complete(4);
    auto p = nb_transition(k4, 4);
    CHECK(p[0].entries == Matrix<Rational>::identity(4));
    CHECK(p[1].entries(0, 1) == Rational(1, 3));
    CHECK(p[2].entries(0, 0) == 0);
    CHECK(p[2].entries(0, 1) == Rational(1, 3));
    CHECK(p[3].entries(0, 0) == Rational(1, 2));
    CHECK(p[2].regular_degree == 3);
}

TEST_CASE("transition matrices are counts over r (r-1)^{k-1} and stochastic", "[nb][property]") {
    for (const auto& g : {build_cycle(7), build_complete(5), build_torus({5, 2}), petersen(), build_torus({3, 3})}) {
        std::size_t r = *g.regular_degree();
        auto counts = nb_counts(g, 8);
        auto trans = nb_transition(g, 8);
        for (int k = 1; k <= 8; ++k) {
            Rational total = Rational(BigInt(r) * power(static_cast<std::int64_t>(r) - 1, k - 1));
            for (Vertex u = 0; u < g.vertex_count(); ++u) {
                Rational row = 0;
                for (Vertex v = 0; v < g.vertex_count(); ++v) {
                    CHECK(trans[k].entries(u, v) == Rational(counts[k].entries(u, v)) / total);
                    CHECK(trans[k].entries(u, v) >= 0);
                    row += trans[k].entries(u, v);
                }
                CHECK(row == 1);
            }
            CHECK(trans[k].entries.is_symmetric());
        }
    }
}

TEST_CASE("exports", "[nb][io]") {
    auto g = build_cycle(3);
    auto a = nb_counts(g, 1);
    auto json = to_json(a[1]);
    CHECK(json.find("\"graph_id\":\"" + g.id() + "\"") != std::string::npos);
    CHECK(json.find("\"arithmetic\":\"exact-integer\"") != std::string::npos);
    CHECK(json.find("[\"0\",\"1\",\"1\"]") != std::string::npos);
    auto csv = to_csv(a[1]);
    CHECK(csv.rfind("# graph_id=" + g.id(), 0) == 0);
    CHECK(csv.find("\n0,1,1\n") != std::string::npos);

    auto t = nb_transition(g, 1);
    auto tj = to_json(t[1], g.id());
    CHECK(tj.find("\"1/2\"") != std::string::npos);
}
