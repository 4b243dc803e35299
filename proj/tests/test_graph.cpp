#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "ogp/errors.hpp"
#include "ogp/graph.hpp"

using namespace ogp;

namespace {

Graph cycle(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return Graph(n, e);
}

// Floyd-Warshall oracle
std::vector<std::vector<int>> all_pairs(const Graph& g) {
    const int n = g.n();
    const int inf = 1 << 29;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i) {
        d[i][i] = 0;
        for (Vertex j : g.neighbors(i)) d[i][j] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

void check_invariants(const Graph& g) {
    for (Vertex v = 0; v < g.n(); ++v) {
        auto nb = g.neighbors(v);
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
        for (Vertex u : nb) {
            CHECK(u != v);
            CHECK(g.has_edge(u, v));
        }
    }
}

}  // namespace

TEST_CASE("graph construction validates input") {
    CHECK_THROWS_AS(Graph(3, {{0, 0}}), ParameterError);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), ParameterError);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), ParameterError);
    Graph g(4, {{2, 1}, {0, 3}, {1, 3}});
    check_invariants(g);
    CHECK(g.num_edges() == 3);
    CHECK(g.edges() == std::vector<Edge>{{0, 3}, {1, 2}, {1, 3}});
}

TEST_CASE("edge list round trip") {
    Graph g = gen_er(60, 0.1, 3);
    std::stringstream ss;
    write_edge_list(ss, g);
    Graph h = read_edge_list(ss);
    CHECK(g == h);
}

TEST_CASE("gen_er basics") {
    Graph g = gen_er(2, 1.0, 99);
    CHECK(g.num_edges() == 1);
    CHECK(g.has_edge(0, 1));
    CHECK_THROWS_AS(gen_er(1, 0.5, 1), ParameterError);
    CHECK_THROWS_AS(gen_er(10, 0.0, 1), ParameterError);
    CHECK_THROWS_AS(gen_er(10, 1.5, 1), ParameterError);
    check_invariants(gen_er(300, 0.05, 5));
    CHECK(gen_er(500, 0.02, 17) == gen_er(500, 0.02, 17));
    CHECK(!(gen_er(500, 0.02, 17) == gen_er(500, 0.02, 18)));
    Graph full = gen_er(12, 1.0, 1);
    CHECK(full.num_edges() == 66);
}

TEST_CASE("gen_er at n=1e5, q=1e-4 has edge count within 5 sigma of the binomial mean") {
    const double n = 1e5, q = 1e-4;
    Graph g = gen_er(100000, q, 2024);
    const double pairs = n * (n - 1) / 2;
    const double mean = pairs * q, sd = std::sqrt(pairs * q * (1 - q));
    CHECK(mean == doctest::Approx(499995.0));
    CHECK(std::abs(static_cast<double>(g.num_edges()) - mean) <= 5 * sd);
}

TEST_CASE("gen_er per-pair edge frequency over 10^4 seeds") {
    const int n = 50, seeds = 10000;
    std::vector<int> hits(n * n, 0);
    for (int s = 0; s < seeds; ++s)
        for (const auto& [u, v] : gen_er(n, 0.3, static_cast<std::uint64_t>(s)).edges()) ++hits[u * n + v];
    double worst = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) worst = std::max(worst, std::abs(hits[u * n + v] / double(seeds) - 0.3));
    CHECK(worst <= 0.02);
}

TEST_CASE("resample_pair limits") {
    Graph g = gen_er(400, 0.02, 1);
    CHECK(resample_pair(g, 0.02, 1.0, 5) == g);
    // rho = 0: independent copy, shared fraction of g's edges is about q
    double shared = 0, total = 0;
    for (int s = 0; s < 20; ++s) {
        Graph h = resample_pair(g, 0.02, 0.0, static_cast<std::uint64_t>(s));
        for (const auto& [u, v] : g.edges()) shared += h.has_edge(u, v);
        total += static_cast<double>(g.num_edges());
    }
    CHECK(std::abs(shared / total - 0.02) < 0.01);
    CHECK_THROWS_AS(resample_pair(g, 0.02, 1.2, 1), ParameterError);
}

TEST_CASE("resample_pair retention matches rho + (1-rho) q") {
    const double q = 0.005, rho = 0.5;
    double shared = 0, total = 0;
    for (int s = 0; s < 10; ++s) {
        Graph g = gen_er(2000, q, static_cast<std::uint64_t>(100 + s));
        Graph h = resample_pair(g, q, rho, static_cast<std::uint64_t>(s));
        check_invariants(h);
        for (const auto& [u, v] : g.edges()) shared += h.has_edge(u, v);
        total += static_cast<double>(g.num_edges());
    }
    CHECK(std::abs(shared / total - (rho + (1 - rho) * q)) <= 0.02);
}

TEST_CASE("resampled and trajectory graphs keep the G(n,q) marginal") {
    // z-scores of per-pair frequencies; with 435 pairs the max |z| should stay below ~4.5
    const int n = 30, seeds = 4000;
    const double q = 0.2;
    std::vector<int> a(n * n, 0), b(n * n, 0);
    for (int s = 0; s < seeds; ++s) {
        Graph g = gen_er(n, q, static_cast<std::uint64_t>(s));
        for (const auto& [u, v] : resample_pair(g, q, 0.6, static_cast<std::uint64_t>(s) + 77).edges()) ++a[u * n + v];
        ResampleTrajectory tr(g, q, {0.0, 0.5}, static_cast<std::uint64_t>(s) * 3 + 1);
        for (const auto& [u, v] : tr.snapshot_at(1).edges()) ++b[u * n + v];
    }
    const double sd = std::sqrt(seeds * q * (1 - q));
    double za = 0, zb = 0, chi_a = 0, chi_b = 0;
    int cells = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            double ea = (a[u * n + v] - seeds * q) / sd, eb = (b[u * n + v] - seeds * q) / sd;
            za = std::max(za, std::abs(ea));
            zb = std::max(zb, std::abs(eb));
            chi_a += ea * ea;
            chi_b += eb * eb;
            ++cells;
        }
    CHECK(za < 4.5);
    CHECK(zb < 4.5);
    // chi-square with 435 dof: mean 435, sd ~29.5
    CHECK(chi_a < cells + 5 * std::sqrt(2.0 * cells));
    CHECK(chi_b < cells + 5 * std::sqrt(2.0 * cells));
}

TEST_CASE("trajectory structure") {
    Graph g = gen_er(500, 0.02, 4);
    ResampleTrajectory tr(g, 0.02, {0.0, 0.1, 0.4, 0.8}, 9);
    CHECK(tr.snapshot_at(0) == g);
    auto r1 = tr.resampled_by(0.1), r2 = tr.resampled_by(0.4), r3 = tr.resampled_by(0.8);
    CHECK(std::includes(r2.begin(), r2.end(), r1.begin(), r1.end()));
    CHECK(std::includes(r3.begin(), r3.end(), r2.begin(), r2.end()));
    CHECK(tr.snapshot(0.4) == tr.snapshot_at(2));
    CHECK(tr.union_size() < static_cast<std::size_t>(3 * g.num_edges()));
    CHECK_THROWS_AS(ResampleTrajectory(g, 0.02, {0.5, 0.2}, 1), ParameterError);
    CHECK_THROWS_AS(ResampleTrajectory(g, 0.02, {0.5, 0.5}, 1), ParameterError);
    CHECK_THROWS_AS(ResampleTrajectory(g, 0.02, {1.0}, 1), ParameterError);
}

TEST_CASE("trajectory retention at n=1e4, q=1e-3, t=0.1") {
    Graph g = gen_er(10000, 1e-3, 12);
    ResampleTrajectory tr(g, 1e-3, {0.1}, 3);
    Graph h = tr.snapshot_at(0);
    double shared = 0;
    for (const auto& [u, v] : g.edges()) shared += h.has_edge(u, v);
    CHECK(std::abs(shared / static_cast<double>(g.num_edges()) - (0.9 + 0.1 * 1e-3)) <= 0.02);
}

TEST_CASE("bfs on small named graphs") {
    Graph path(3, {{0, 1}, {1, 2}});
    auto L = bfs_layers(path, 0);
    CHECK(L.dist == std::vector<int>{0, 1, 2});
    CHECK(std::vector<Vertex>(L.parents(2).begin(), L.parents(2).end()) == std::vector<Vertex>{1});

    auto C = bfs_layers(cycle(8), 0);
    CHECK(C.sizes == std::vector<std::int64_t>{1, 2, 2, 2, 1});
    CHECK(std::vector<Vertex>(C.parents(4).begin(), C.parents(4).end()) == std::vector<Vertex>{3, 5});
    CHECK(C.parents(0).empty());

    Graph split(5, {{0, 1}, {2, 3}});
    auto S = bfs_layers(split, 0);
    CHECK(S.dist[2] == kInfDist);
    CHECK(S.reachable_count() == 2);
    CHECK_THROWS_AS(bfs_layers(split, 7), ParameterError);
}

TEST_CASE("bfs distances equal Floyd-Warshall on random graphs with n <= 64") {
    for (int s = 0; s < 60; ++s) {
        const int n = 2 + s;
        Graph g = gen_er(n, std::min(1.0, 2.5 / n), static_cast<std::uint64_t>(s));
        auto fw = all_pairs(g);
        for (Vertex root : {0, n / 2, n - 1}) {
            auto L = bfs_layers(g, root);
            std::int64_t sum = 0;
            for (int v = 0; v < n; ++v) {
                int want = fw[root][v] >= (1 << 29) ? kInfDist : fw[root][v];
                CHECK(L.dist[v] == want);
                if (L.reachable(v) && v != root) {
                    CHECK(!L.parents(v).empty());
                    for (Vertex p : L.parents(v)) CHECK(L.dist[p] == L.dist[v] - 1);
                    int expected = 0;
                    for (Vertex w : g.neighbors(v)) expected += (fw[root][w] == fw[root][v] - 1);
                    CHECK(static_cast<int>(L.parents(v).size()) == expected);
                }
            }
            for (std::size_t d = 0; d < L.layers.size(); ++d) {
                sum += L.sizes[d];
                for (Vertex v : L.layers[d]) CHECK(L.dist[v] == static_cast<int>(d));
            }
            CHECK(sum == L.reachable_count());
        }
    }
}

TEST_CASE("proxies at n=1e5, q=1e-4") {
    // independent evaluation of the definitions
    const double n = 1e5, q = 1e-4;
    const double thr = n / std::pow(std::log(std::log(n)), 2);
    int d = 1;
    while (std::pow(n * q, d) < thr) ++d;
    auto p = proxies(n, q);
    CHECK(d == 5);
    CHECK(p.d_star == 5);
    CHECK(p.ell_star == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::abs(p.delta) < 1e-12);
    CHECK(p.lambda == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(p.lambda == doctest::Approx(0.3679).epsilon(1e-4));
    CHECK(p.gamma == 1.0);
    CHECK(p.alpha == doctest::Approx(10.0 / std::log(1e5)));
    CHECK(p.kappa == doctest::Approx((1 - std::exp(-1.0)) * std::log(std::log(1e5))));
    CHECK(p.eta == doctest::Approx(1.0 / (std::exp(-1.0) * 10.0)));
    auto p2 = proxies(n, q, 0.99);
    CHECK(p2.gamma == doctest::Approx(0.9509900499).epsilon(1e-10));
    CHECK(p2.xi == doctest::Approx(std::pow(std::exp(-1.0), 1 - p2.gamma)));
    CHECK_THROWS_AS(proxies(100, 0.005), DomainError);
    CHECK_THROWS_AS(proxies(2, 0.9), DomainError);
}

TEST_CASE("proxy sandwich and d* minimality over a grid of (n, alpha)") {
    for (double n : {1e3, 1e4, 1e5, 1e6, 1e8}) {
        for (double alpha : {0.5, 0.9, 1.0, 2.0, 4.0, 10.0, 30.0}) {
            const double q = alpha * std::log(n) / n;
            if (n * q <= 1.0) continue;
            auto p = proxies(n, q);
            const double lll = std::log(std::log(std::log(n)));
            CHECK(p.delta >= -2 * lll / (std::log(alpha) + std::log(std::log(n))) - 1e-12);
            CHECK(p.delta < 1.0);
            const double thr = n / std::pow(std::log(std::log(n)), 2);
            CHECK(std::pow(n * q, p.d_star) >= thr * (1 - 1e-12));
            CHECK(std::pow(n * q, p.d_star - 1) < thr);
            CHECK(p.lambda > 0.0);
            CHECK(p.lambda < 1.0);
            auto pr = proxies(n, q, 0.9);
            CHECK(pr.gamma > 0.0);
            CHECK(pr.gamma < 1.0);
        }
    }
}

TEST_CASE("layer intersection") {
    Graph g = gen_er(300, 0.02, 2);
    auto L = bfs_layers(g, 0);
    auto I = layer_intersection(L, L);
    CHECK(I.counts == L.sizes);
    CHECK(I.same_distance_fraction == doctest::Approx(static_cast<double>(L.reachable_count()) / 300));
    auto L2 = bfs_layers(gen_er(301, 0.02, 2), 0);
    CHECK_THROWS_AS(layer_intersection(L, L2), ParameterError);
    CHECK_THROWS_AS(layer_intersection(L, bfs_layers(g, 1)), ParameterError);
}
