#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "pcosync/analysis.hpp"
#include "pcosync/topology.hpp"

using namespace pcosync;

namespace {

Topology random_graph(std::mt19937_64& rng, int n, double p) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((rng() >> 11) * 0x1.0p-53 < p) edges.emplace_back(i, j);
    return Topology(n, edges, std::vector<double>(n, 0.0), 0.0, 1.0);
}

}  // namespace

TEST_CASE("incidence of a single edge") {
    const Topology t(2, {{0, 1}}, {0.0, 0.0}, 0.0, 1.0);
    const Matrix b = incidence_matrix(t);
    REQUIRE(b.rows() == 2);
    REQUIRE(b.cols() == 1);
    CHECK(b(0, 0) == 1.0);
    CHECK(b(1, 0) == -1.0);
}

TEST_CASE("incidence of an empty graph is N x 0") {
    const Topology t(3, {}, {0.0, 0.0, 0.0}, 0.0, 1.0);
    const Matrix b = incidence_matrix(t);
    CHECK(b.rows() == 3);
    CHECK(b.cols() == 0);
}

TEST_CASE("path graph Laplacian") {
    const Topology t(3, {{0, 1}, {1, 2}}, {0.0, 0.0, 0.0}, 0.0, 1.0);
    const Matrix l = laplacian(t);
    const double expect[3][3] = {{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(l(i, j) == expect[i][j]);
    const Matrix b = incidence_matrix(t);
    const Matrix bbt = b * b.transposed();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(bbt(i, j) == l(i, j));
}

TEST_CASE("K2 Laplacian eigenvalues") {
    const Topology t(2, {{0, 1}}, {0.0, 0.0}, 0.0, 1.0);
    const auto eig = symmetric_eigen(laplacian(t));
    CHECK(eig.eigenvalues[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(2.0));
}

TEST_CASE("4-ring Laplacian spectrum is {0, 2, 2, 4}") {
    const Topology t(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, std::vector<double>(4, 0.0), 0.0, 1.0);
    const auto eig = symmetric_eigen(laplacian(t));
    const double expect[4] = {0.0, 2.0, 2.0, 4.0};
    for (int i = 0; i < 4; ++i) CHECK(eig.eigenvalues[i] == doctest::Approx(expect[i]).scale(1.0));
}

TEST_CASE("L = B B^T exactly on random graphs up to N = 50") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 49);
        const Topology t = random_graph(rng, n, 0.2);
        const Matrix l = laplacian(t);
        const Matrix b = incidence_matrix(t);
        const Matrix bbt = b * b.transposed();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) REQUIRE(l(i, j) == bbt(i, j));  // integer arithmetic, exact
    }
}

TEST_CASE("spectral sanity: zero mode, connectivity, Gershgorin") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 3 + static_cast<int>(rng() % 18);
        const Topology t = random_graph(rng, n, 0.25);
        const auto eig = symmetric_eigen(laplacian(t));
        CHECK(std::abs(eig.eigenvalues.front()) < 1e-9);
        CHECK((eig.eigenvalues[1] > 1e-9) == is_connected(t));
        CHECK(eig.eigenvalues.back() <= 2.0 * t.max_degree() + 1e-9);
    }
}

TEST_CASE("connectivity by reachability") {
    CHECK(is_connected(Topology(3, {{0, 1}, {1, 2}}, {0, 0, 0}, 0.0, 1.0)));
    CHECK_FALSE(is_connected(Topology(4, {{0, 1}, {2, 3}}, {0, 0, 0, 0}, 0.0, 1.0)));
    CHECK(is_connected(Topology(1, {}, {0.0}, 0.0, 1.0)));
    CHECK(is_connected(Topology::desk18()));
}

TEST_CASE("constructor rejects bad input") {
    CHECK_THROWS_AS(Topology(2, {{0, 0}}, {0, 0}, 0.0, 1.0), std::invalid_argument);    // self-loop
    CHECK_THROWS_AS(Topology(2, {{0, 2}}, {0, 0}, 0.0, 1.0), std::invalid_argument);    // out of range
    CHECK_THROWS_AS(Topology(2, {{0, 1}, {1, 0}}, {0, 0}, 0.0, 1.0), std::invalid_argument);  // dup
    CHECK_THROWS_AS(Topology(2, {{0, 1}}, {0, 0, 0}, 0.0, 1.0), std::invalid_argument); // bad g length
    CHECK_THROWS_AS(Topology(2, {{0, 1}}, {-0.1, 0}, 0.0, 1.0), std::invalid_argument); // negative gain
    CHECK_THROWS_AS(Topology(2, {{0, 1}}, {0, 0}, -1.0, 1.0), std::invalid_argument);   // negative l
    CHECK_THROWS_AS(Topology(2, {{0, 1}}, {0, 0}, 0.0, 0.0), std::invalid_argument);    // zero period
}

TEST_CASE("weak coupling advisories") {
    CHECK(Topology(2, {{0, 1}}, {0.01, 0.0}, 0.01, 1.0).advisories().empty());
    CHECK(Topology(2, {{0, 1}}, {0.2, 0.0}, 0.01, 1.0).advisories().size() == 1);
    CHECK(Topology(2, {{0, 1}}, {0.2, 0.0}, 0.5, 1.0).advisories().size() == 2);
}

TEST_CASE("JSON round trip and strictness") {
    const char* path = "topology_test_net.json";
    {
        std::ofstream out(path);
        out << R"({"n": 3, "edges": [[0,1],[1,2]], "g": [0.01, 0, 0], "l": 0.02, "T": 1.5})";
    }
    const Topology t = Topology::from_json_file(path);
    CHECK(t.n() == 3);
    CHECK(t.edge(0, 1));
    CHECK(t.edge(1, 0));
    CHECK_FALSE(t.edge(0, 2));
    CHECK(t.local_strength() == 0.02);
    CHECK(t.period() == 1.5);
    const Topology t2 = Topology::from_json(t.to_json());
    CHECK(t2.edges() == t.edges());
    std::remove(path);

    using nlohmann::json;
    CHECK_THROWS_AS(Topology::from_json(json::parse(R"({"n":2,"edges":[],"g":[0,0],"l":0,"T":1,"x":1})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(Topology::from_json(json::parse(R"({"n":2,"edges":[],"g":[0,0],"l":0})")),
                    std::invalid_argument);
    // the same undirected edge listed twice with flipped orientation
    CHECK_THROWS_AS(Topology::from_json(json::parse(R"({"n":2,"edges":[[0,1],[1,0]],"g":[0,0],"l":0,"T":1})")),
                    std::invalid_argument);
}

TEST_CASE("desk18 shape") {
    const Topology t = Topology::desk18();
    CHECK(t.n() == 18);
    CHECK(t.edge_count() == 36);
    CHECK(is_connected(t));
    for (int i = 0; i < t.n(); ++i) CHECK(t.degree(i) >= 2);
}
