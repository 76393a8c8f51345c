#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "flgc/errors.hpp"
#include "flgc/graph.hpp"
#include "flgc/numerics.hpp"
#include "flgc/rng.hpp"
#include "oracles.hpp"

using namespace flgc;

namespace {

// Writes `text` to a unique temp file and returns its path.
std::string write_temp(const std::string& stem, const std::string& text) {
    const std::string path = std::string("/tmp/flgc_test_") + stem + ".txt";
    std::ofstream out(path);
    out << text;
    return path;
}

DenseMatrix column(const std::vector<double>& xs) {
    DenseMatrix m(xs.size(), 1);
    for (std::size_t i = 0; i < xs.size(); ++i) m(i, 0) = xs[i];
    return m;
}

}  // namespace

TEST_CASE("SparseAdjacency validates edges and collapses duplicates") {
    CHECK_THROWS_AS(SparseAdjacency(0, {}), EmptyInput);
    CHECK_THROWS_AS(SparseAdjacency(3, {{0, 3, 1.0}}), IndexOutOfRange);
    CHECK_THROWS_AS(SparseAdjacency(3, {{-1, 0, 1.0}}), IndexOutOfRange);
    CHECK_THROWS_AS(SparseAdjacency(3, {{1, 1, 1.0}}), ConfigError);
    CHECK_THROWS_AS(SparseAdjacency(3, {{0, 1, 0.0}}), ConfigError);
    CHECK_THROWS_AS(SparseAdjacency(3, {{0, 1, -2.0}}), ConfigError);

    // Duplicate unordered pair: last weight wins, either orientation.
    SparseAdjacency g(3, {{0, 1, 2.0}, {1, 0, 5.0}, {1, 2, 1.0}});
    CHECK(g.edge_count() == 2);
    CHECK(g.weighted_degree(0) == 5.0);
    CHECK(g.weighted_degree(1) == 6.0);
    REQUIRE(g.neighbors(0).size() == 1);
    CHECK(g.neighbors(0)[0].first == 1);
    CHECK(g.neighbors(0)[0].second == 5.0);

    CHECK_THROWS_AS(g.neighbors(3), IndexOutOfRange);
}

TEST_CASE("SparseAdjacency lists neighbors in ascending order") {
    SparseAdjacency g(5, {{2, 4, 1.0}, {2, 0, 1.0}, {2, 3, 1.0}, {2, 1, 1.0}});
    const auto& nb = g.neighbors(2);
    REQUIRE(nb.size() == 4);
    const int want[4] = {0, 1, 3, 4};
    for (std::size_t i = 0; i < nb.size(); ++i) CHECK(nb[i].first == want[i]);
}

TEST_CASE("renormalize matches hand-computed values on a path graph") {
    // Path 0-1-2: augmented degrees are 2, 3, 2.
    const PropagationMatrix p = renormalize(SparseAdjacency(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
    const DenseMatrix d = p.to_dense();
    const double off = 1.0 / std::sqrt(6.0);
    CHECK(d(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d(0, 1) == doctest::Approx(off).epsilon(1e-14));
    CHECK(d(0, 2) == 0.0);
    CHECK(d(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(d(2, 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d(2, 1) == doctest::Approx(off).epsilon(1e-14));
}

TEST_CASE("renormalize of a single edge gives the constant half matrix") {
    const DenseMatrix d = renormalize(SparseAdjacency(2, {{0, 1, 1.0}})).to_dense();
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(d(i, j) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("renormalize keeps isolated nodes as identity rows") {
    // Node 2 has no edges: its only entry is the self-loop with weight 1.
    const PropagationMatrix p = renormalize(SparseAdjacency(4, {{0, 1, 1.0}, {0, 3, 1.0}}));
    const DenseMatrix d = p.to_dense();
    CHECK(d(2, 2) == 1.0);
    for (std::size_t j = 0; j < 4; ++j)
        if (j != 2) CHECK(d(2, j) == 0.0);
}

TEST_CASE("renormalize is bitwise symmetric and every row carries its diagonal") {
    Rng rng(99);
    std::vector<Edge> edges;
    const int n = 40;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < 0.12) edges.push_back({i, j, rng.uniform(0.1, 3.0)});
    const PropagationMatrix p = renormalize(SparseAdjacency(n, edges));
    const DenseMatrix d = p.to_dense();

    for (std::size_t i = 0; i < d.rows(); ++i) {
        CHECK(d(i, i) > 0.0);
        for (std::size_t j = 0; j < i; ++j) {
            // Exact equality: both sides are computed as the same product.
            CHECK(d(i, j) == d(j, i));
        }
    }

    // CSR row structure: sorted columns, diagonal present.
    for (int i = 0; i < n; ++i) {
        bool saw_diag = false;
        for (int k = p.row_offsets()[i]; k < p.row_offsets()[i + 1]; ++k) {
            if (k > p.row_offsets()[i]) CHECK(p.column_indices()[k] > p.column_indices()[k - 1]);
            if (p.column_indices()[k] == i) saw_diag = true;
        }
        CHECK(saw_diag);
    }
}

TEST_CASE("renormalize has spectral radius at most one") {
    Rng rng(7);
    std::vector<Edge> edges;
    const int n = 30;
    for (int i = 1; i < n; ++i) edges.push_back({static_cast<int>(rng.uniform_index(i)), i, 1.0});
    for (int t = 0; t < 25; ++t) {
        const int u = static_cast<int>(rng.uniform_index(n));
        const int v = static_cast<int>(rng.uniform_index(n));
        if (u != v) edges.push_back({u, v, rng.uniform(0.5, 2.0)});
    }
    const DenseMatrix d = renormalize(SparseAdjacency(n, edges)).to_dense();
    const EigenPairs eig = sym_eig_smallest(d, static_cast<std::size_t>(n));
    const double radius = std::max(std::fabs(eig.values.front()), std::fabs(eig.values.back()));
    CHECK(radius <= 1.0 + 1e-9);
    // The top eigenvalue of the renormalized operator is exactly one in
    // exact arithmetic (eigenvector (D+I)^{1/2} 1).
    CHECK(eig.values.back() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("knn_graph matches the hand example") {
    // 1-D points 0, 1, 10 with k=1: directed nn edges 0->1, 1->0, 2->1,
    // union gives exactly {0-1, 1-2}.
    const SparseAdjacency g = knn_graph(column({0.0, 1.0, 10.0}), 1);
    CHECK(g.edge_count() == 2);
    REQUIRE(g.neighbors(1).size() == 2);
    CHECK(g.neighbors(1)[0].first == 0);
    CHECK(g.neighbors(1)[1].first == 2);
    CHECK(g.neighbors(0).size() == 1);
    CHECK(g.neighbors(2).size() == 1);
    // Binary weights.
    CHECK(g.neighbors(1)[0].second == 1.0);
}

TEST_CASE("knn_graph breaks distance ties toward the smaller index") {
    // Node 0 is equidistant from 1 and 2; the tie goes to node 1.
    const SparseAdjacency g = knn_graph(column({0.0, 1.0, -1.0}), 1);
    CHECK(g.edge_count() == 2);
    REQUIRE(g.neighbors(0).size() == 2);  // chosen by 0, plus chosen by 2
    CHECK(g.neighbors(1).size() == 1);
    CHECK(g.neighbors(1)[0].first == 0);
    CHECK(g.neighbors(2).size() == 1);
    CHECK(g.neighbors(2)[0].first == 0);
}

TEST_CASE("knn_graph union keeps every degree at least k") {
    Rng rng(1234);
    const DenseMatrix x = oracle::random_matrix(rng, 60, 3, 0.0, 1.0);
    for (int k : {1, 3, 7}) {
        const SparseAdjacency g = knn_graph(x, k);
        for (int i = 0; i < 60; ++i) CHECK(g.neighbors(i).size() >= static_cast<std::size_t>(k));
    }
}

TEST_CASE("knn_graph is invariant to translating all features") {
    Rng rng(5);
    const DenseMatrix x = oracle::random_matrix(rng, 25, 2, -1.0, 1.0);
    DenseMatrix shifted = x;
    for (std::size_t i = 0; i < shifted.rows(); ++i) {
        shifted(i, 0) += 10.0;
        shifted(i, 1) -= 4.0;
    }
    const SparseAdjacency a = knn_graph(x, 4);
    const SparseAdjacency b = knn_graph(shifted, 4);
    REQUIRE(a.edge_count() == b.edge_count());
    for (int i = 0; i < 25; ++i) {
        REQUIRE(a.neighbors(i).size() == b.neighbors(i).size());
        for (std::size_t j = 0; j < a.neighbors(i).size(); ++j)
            CHECK(a.neighbors(i)[j].first == b.neighbors(i)[j].first);
    }
}

TEST_CASE("knn_graph rejects bad arguments") {
    CHECK_THROWS_AS(knn_graph(column({1.0}), 1), DegenerateInput);
    CHECK_THROWS_AS(knn_graph(column({0.0, 1.0}), 0), ConfigError);
    CHECK_THROWS_AS(knn_graph(column({0.0, 1.0}), 2), ConfigError);
}

TEST_CASE("load_edge_list handles comments, commas, and weights") {
    const std::string path = write_temp("edges_ok",
                                        "# comment line\n"
                                        "0 1\n"
                                        "\n"
                                        "1,2,0.5\n"
                                        "  2 3 2.0  # trailing comment\n");
    const EdgeListResult r = load_edge_list(path, 4);
    CHECK(r.adjacency.edge_count() == 3);
    CHECK(r.self_loops_dropped == 0);
    CHECK(r.duplicates_collapsed == 0);
    CHECK(r.adjacency.weighted_degree(2) == doctest::Approx(2.5));
    CHECK(r.adjacency.neighbors(0)[0].second == 1.0);  // default weight
    std::remove(path.c_str());
}

TEST_CASE("load_edge_list drops self-loops and counts duplicates") {
    const std::string path = write_temp("edges_dups",
                                        "0 0\n"
                                        "0 1 1.0\n"
                                        "1 0 3.0\n"
                                        "2 2\n"
                                        "1 2\n");
    const EdgeListResult r = load_edge_list(path, 3);
    CHECK(r.self_loops_dropped == 2);
    CHECK(r.duplicates_collapsed == 1);
    CHECK(r.adjacency.edge_count() == 2);
    // Last weight wins for the duplicated pair.
    CHECK(r.adjacency.neighbors(0)[0].second == 3.0);
    std::remove(path.c_str());
}

TEST_CASE("load_edge_list reports parse errors with line numbers") {
    const std::string bad_tokens = write_temp("edges_bad1", "0 1\nfoo bar\n");
    try {
        load_edge_list(bad_tokens, 3);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 2);
    }
    std::remove(bad_tokens.c_str());

    const std::string bad_weight = write_temp("edges_bad2", "0 1 -1.0\n");
    try {
        load_edge_list(bad_weight, 3);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 1);
    }
    std::remove(bad_weight.c_str());

    const std::string trailing = write_temp("edges_bad3", "0 1 1.0 extra\n");
    CHECK_THROWS_AS(load_edge_list(trailing, 3), ParseError);
    std::remove(trailing.c_str());

    const std::string out_of_range = write_temp("edges_bad4", "0 5\n");
    CHECK_THROWS_AS(load_edge_list(out_of_range, 3), IndexOutOfRange);
    std::remove(out_of_range.c_str());

    CHECK_THROWS_AS(load_edge_list("/nonexistent/edges.txt", 3), ConfigError);
}
