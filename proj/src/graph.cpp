#include "ogp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "ogp/errors.hpp"
#include "ogp/rng.hpp"

namespace ogp {

namespace {

// Fill CSR arrays from a duplicate-free edge list. Adjacency lists come out sorted when
// the edges are ordered by (min, max) or by (max, min); otherwise they are sorted here.
void build_csr(int n, const std::vector<Edge>& edges, std::vector<std::int64_t>& offsets, std::vector<Vertex>& adj) {
    offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [u, v] : edges) {
        ++offsets[static_cast<std::size_t>(u) + 1];
        ++offsets[static_cast<std::size_t>(v) + 1];
    }
    for (int i = 0; i < n; ++i) offsets[static_cast<std::size_t>(i) + 1] += offsets[static_cast<std::size_t>(i)];
    adj.assign(static_cast<std::size_t>(offsets.back()), 0);
    std::vector<std::int64_t> pos(offsets.begin(), offsets.end() - 1);
    for (const auto& [u, v] : edges) {
        adj[static_cast<std::size_t>(pos[static_cast<std::size_t>(u)]++)] = v;
        adj[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)]++)] = u;
    }
    for (int i = 0; i < n; ++i) {
        auto b = adj.begin() + offsets[static_cast<std::size_t>(i)];
        auto e = adj.begin() + offsets[static_cast<std::size_t>(i) + 1];
        if (!std::is_sorted(b, e)) std::sort(b, e);
    }
}

// Pairs {w < v} enumerated in the order (v, w): index v(v-1)/2 + w. Calls emit(w, v) for every
// pair selected independently with probability p, in that order.
template <class Emit>
void geometric_pairs(int n, double p, Rng& rng, Emit&& emit) {
    if (p <= 0.0) return;
    if (p >= 1.0) {
        for (Vertex v = 1; v < n; ++v)
            for (Vertex w = 0; w < v; ++w) emit(w, v);
        return;
    }
    const double lq = std::log1p(-p);
    std::int64_t v = 1, w = -1;
    while (v < n) {
        double skip = std::floor(std::log(rng.uniform_pos()) / lq);
        if (skip > 9.0e18) break;
        w += 1 + static_cast<std::int64_t>(skip);
        while (w >= v && v < n) {
            w -= v;
            ++v;
        }
        if (v < n) emit(static_cast<Vertex>(w), static_cast<Vertex>(v));
    }
}

}  // namespace

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw ParameterError("Graph: negative vertex count");
    for (auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw ParameterError("Graph: endpoint out of range");
        if (u == v) throw ParameterError("Graph: self loop at " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw ParameterError("Graph: duplicate edge");
    build_csr(n, edges, offsets_, adj_);
}

Graph Graph::from_sorted_unique(int n, const std::vector<Edge>& edges) {
    Graph g;
    g.n_ = n;
    build_csr(n, edges, g.offsets_, g.adj_);
    return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(num_edges()));
    for (Vertex u = 0; u < n_; ++u)
        for (Vertex v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

void write_edge_list(std::ostream& os, const Graph& g) {
    os << g.n() << ' ' << g.num_edges() << '\n';
    for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& is) {
    long long n = 0, m = 0;
    if (!(is >> n >> m) || n < 0 || m < 0) throw ParameterError("read_edge_list: bad header");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        long long u, v;
        if (!(is >> u >> v)) throw ParameterError("read_edge_list: truncated edge list");
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    return Graph(static_cast<int>(n), std::move(edges));
}

Graph gen_er(int n, double q, std::uint64_t seed) {
    if (n < 2) throw ParameterError("gen_er: need n >= 2");
    if (!(q > 0.0) || q > 1.0) throw ParameterError("gen_er: need 0 < q <= 1");
    Rng rng(seed, 0x4552);  // "ER"
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(0.5 * n * (n - 1.0) * q * 1.05 + 16));
    geometric_pairs(n, q, rng, [&](Vertex w, Vertex v) { edges.emplace_back(w, v); });
    return Graph::from_sorted_unique(n, edges);
}

Graph resample_pair(const Graph& g1, double q, double rho, std::uint64_t seed) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("resample_pair: rho must lie in [0,1]");
    if (!(q > 0.0) || q > 1.0) throw ParameterError("resample_pair: need 0 < q <= 1");
    const double keep = rho + (1.0 - rho) * q;
    std::vector<Edge> edges;
    for (const auto& [u, v] : g1.edges())
        if (keep >= 1.0 || keyed_uniform(seed, static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(v), 0x4b) < keep)
            edges.emplace_back(u, v);
    Rng rng(seed, 0x4e4557);  // "NEW"
    geometric_pairs(g1.n(), (1.0 - rho) * q, rng, [&](Vertex w, Vertex v) {
        if (!g1.has_edge(w, v)) edges.emplace_back(w, v);
    });
    std::sort(edges.begin(), edges.end());
    return Graph::from_sorted_unique(g1.n(), edges);
}

CorrelatedPair correlated_pair(int n, double q, double rho, std::uint64_t seed) {
    CorrelatedPair p;
    p.g1 = gen_er(n, q, hash_combine(seed, 1));
    p.g2 = resample_pair(p.g1, q, rho, hash_combine(seed, 2));
    p.rho = rho;
    return p;
}

ResampleTrajectory::ResampleTrajectory(Graph base, double q, std::vector<double> time_points, std::uint64_t seed)
    : base_(std::move(base)), q_(q), times_(std::move(time_points)), seed_(seed) {
    if (!(q > 0.0) || q > 1.0) throw ParameterError("trajectory: need 0 < q <= 1");
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!(times_[i] >= 0.0 && times_[i] < 1.0)) throw ParameterError("trajectory: time points must lie in [0,1)");
        if (i > 0 && !(times_[i] > times_[i - 1]))
            throw ParameterError("trajectory: time points must be strictly increasing");
    }
    auto base_edges = base_.edges();
    union_.reserve(base_edges.size() * 2);
    for (const auto& e : base_edges) union_.push_back({e, 0.0, true, false});
    Rng rng(seed, 0x46524553);  // "FRES"
    std::vector<Edge> fresh;
    geometric_pairs(base_.n(), q, rng, [&](Vertex w, Vertex v) { fresh.emplace_back(w, v); });
    std::sort(fresh.begin(), fresh.end());
    for (const auto& e : fresh) {
        auto it = std::lower_bound(union_.begin(), union_.begin() + static_cast<std::ptrdiff_t>(base_edges.size()), e,
                                   [](const PairState& s, const Edge& x) { return s.e < x; });
        if (it != union_.begin() + static_cast<std::ptrdiff_t>(base_edges.size()) && it->e == e)
            it->fresh_edge = true;
        else
            union_.push_back({e, 0.0, false, true});
    }
    std::sort(union_.begin(), union_.end(), [](const PairState& a, const PairState& b) { return a.e < b.e; });
    for (auto& s : union_) s.t = time_of(s.e.first, s.e.second);
}

double ResampleTrajectory::time_of(Vertex u, Vertex v) const {
    if (u > v) std::swap(u, v);
    return keyed_uniform(seed_, static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(v), 0x54);
}

Graph ResampleTrajectory::snapshot(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("snapshot: t must lie in [0,1]");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(base_.num_edges()) + 16);
    for (const auto& s : union_) {
        bool present = (s.t > t) ? s.base_edge : s.fresh_edge;
        if (present) edges.push_back(s.e);
    }
    return Graph::from_sorted_unique(base_.n(), edges);
}

std::vector<Edge> ResampleTrajectory::resampled_by(double t) const {
    std::vector<Edge> out;
    for (const auto& s : union_)
        if (s.t <= t) out.push_back(s.e);
    return out;
}

std::int64_t LayerDecomposition::reachable_count() const {
    std::int64_t s = 0;
    for (auto x : sizes) s += x;
    return s;
}

std::vector<int> bfs_distances(const Graph& g, Vertex root) {
    if (root < 0 || root >= g.n()) throw ParameterError("bfs: root out of range");
    std::vector<int> dist(static_cast<std::size_t>(g.n()), kInfDist);
    std::vector<Vertex> queue;
    queue.reserve(static_cast<std::size_t>(g.n()));
    dist[static_cast<std::size_t>(root)] = 0;
    queue.push_back(root);
    for (std::size_t h = 0; h < queue.size(); ++h) {
        Vertex u = queue[h];
        int du = dist[static_cast<std::size_t>(u)];
        for (Vertex w : g.neighbors(u)) {
            if (dist[static_cast<std::size_t>(w)] == kInfDist) {
                dist[static_cast<std::size_t>(w)] = du + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

LayerDecomposition bfs_layers(const Graph& g, Vertex root) {
    LayerDecomposition L;
    L.root = root;
    L.dist = bfs_distances(g, root);
    const int n = g.n();
    for (Vertex v = 0; v < n; ++v) {
        int d = L.dist[static_cast<std::size_t>(v)];
        if (d == kInfDist) continue;
        if (d >= static_cast<int>(L.layers.size())) L.layers.resize(static_cast<std::size_t>(d) + 1);
        L.layers[static_cast<std::size_t>(d)].push_back(v);
    }
    L.sizes.resize(L.layers.size());
    for (std::size_t d = 0; d < L.layers.size(); ++d) L.sizes[d] = static_cast<std::int64_t>(L.layers[d].size());
    L.parent_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (Vertex v = 0; v < n; ++v) {
        int d = L.dist[static_cast<std::size_t>(v)];
        std::int64_t c = 0;
        if (d != kInfDist && d > 0)
            for (Vertex w : g.neighbors(v))
                if (L.dist[static_cast<std::size_t>(w)] == d - 1) ++c;
        L.parent_offsets[static_cast<std::size_t>(v) + 1] = L.parent_offsets[static_cast<std::size_t>(v)] + c;
    }
    L.parent_list.resize(static_cast<std::size_t>(L.parent_offsets.back()));
    std::size_t pos = 0;
    for (Vertex v = 0; v < n; ++v) {
        int d = L.dist[static_cast<std::size_t>(v)];
        if (d == kInfDist || d == 0) continue;
        for (Vertex w : g.neighbors(v))
            if (L.dist[static_cast<std::size_t>(w)] == d - 1) L.parent_list[pos++] = w;
    }
    return L;
}

Proxies proxies(double n, double q, std::optional<double> rho) {
    if (!(q > 0.0 && q < 1.0)) throw ParameterError("proxies: need 0 < q < 1");
    if (!(n * q > 1.0)) throw DomainError("proxies: nq <= 1 is outside the sparse supercritical regime");
    const double loglogn = std::log(std::log(n));
    if (!(loglogn > 0.0)) throw DomainError("proxies: log log n must be positive (n > e)");
    Proxies p;
    p.n = n;
    p.q = q;
    p.loglogn = loglogn;
    p.alpha = q * n / std::log(n);
    const double lnq = std::log(n * q);
    p.ell_star = std::log(n) / lnq;
    // least integer d with d log(nq) >= log(n) - 2 log log log n
    const double target = std::log(n) - 2.0 * std::log(loglogn);
    int d = static_cast<int>(std::ceil(target / lnq));
    while (d > 0 && (d - 1) * lnq >= target) --d;
    while (d * lnq < target) ++d;
    p.d_star = d;
    p.delta = d - p.ell_star;
    p.lambda = std::exp(-std::pow(n * q, p.delta));
    p.kappa = (1.0 - p.lambda) * loglogn;
    p.rho = rho.value_or(1.0);
    if (!(p.rho >= 0.0 && p.rho <= 1.0)) throw ParameterError("proxies: rho must lie in [0,1]");
    p.gamma = std::pow(p.rho, d);
    p.eta = std::log(1.0 / p.lambda) / (p.lambda * n * q);
    p.xi = std::pow(p.lambda, 1.0 - p.gamma);
    return p;
}

LayerIntersection layer_intersection(const LayerDecomposition& l1, const LayerDecomposition& l2) {
    if (l1.n() != l2.n()) throw ParameterError("layer_intersection: vertex counts differ");
    if (l1.root != l2.root) throw ParameterError("layer_intersection: roots differ");
    LayerIntersection out;
    out.counts.assign(std::min(l1.layers.size(), l2.layers.size()), 0);
    std::int64_t total = 0;
    for (int v = 0; v < l1.n(); ++v) {
        int d = l1.dist[static_cast<std::size_t>(v)];
        if (d != kInfDist && d == l2.dist[static_cast<std::size_t>(v)]) {
            ++out.counts[static_cast<std::size_t>(d)];
            ++total;
        }
    }
    out.same_distance_fraction = l1.n() > 0 ? static_cast<double>(total) / l1.n() : 0.0;
    return out;
}

}  // namespace ogp
