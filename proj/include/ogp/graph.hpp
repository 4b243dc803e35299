#ifndef OGP_GRAPH_HPP
#define OGP_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ogp {

/// Vertex identifier. The source vertex called "1" in the literature is ID 0 here.
using Vertex = std::int32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Distance of a vertex that is not reachable from the root.
inline constexpr int kInfDist = std::numeric_limits<int>::max();

/**
 * Undirected simple graph in compressed adjacency form.
 *
 * Neighbor lists are sorted by ID, there are no self loops or duplicate edges and the
 * adjacency is symmetric. Immutable after construction, so it can be shared freely
 * between threads.
 */
class Graph {
public:
    Graph() = default;

    /// Builds from an arbitrary edge list. Throws ParameterError on self loops,
    /// duplicates or out-of-range endpoints.
    Graph(int n, std::vector<Edge> edges);

    /// Builds from edges that are already sorted lexicographically with u < v and
    /// free of duplicates. Used by the generators; skips validation.
    static Graph from_sorted_unique(int n, const std::vector<Edge>& edges);

    int n() const { return n_; }
    std::int64_t num_edges() const { return static_cast<std::int64_t>(adj_.size() / 2); }
    std::span<const Vertex> neighbors(Vertex v) const {
        return {adj_.data() + offsets_[static_cast<std::size_t>(v)],
                static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1] - offsets_[static_cast<std::size_t>(v)])};
    }
    int degree(Vertex v) const {
        return static_cast<int>(offsets_[static_cast<std::size_t>(v) + 1] - offsets_[static_cast<std::size_t>(v)]);
    }
    bool has_edge(Vertex u, Vertex v) const;

    /// All edges (u, v) with u < v in lexicographic order.
    std::vector<Edge> edges() const;

    bool operator==(const Graph& o) const { return n_ == o.n_ && offsets_ == o.offsets_ && adj_ == o.adj_; }

private:
    int n_ = 0;
    std::vector<std::int64_t> offsets_{0};
    std::vector<Vertex> adj_;
};

/// Writes the "n m" header followed by one "u v" line per edge (u < v, sorted).
void write_edge_list(std::ostream& os, const Graph& g);
/// Reads the format produced by write_edge_list.
Graph read_edge_list(std::istream& is);

/// Erdos-Renyi G(n, q); every unordered pair is an edge independently with probability q.
/// Runs in O(n + m) by geometric skipping. Requires n >= 2 and 0 < q <= 1.
Graph gen_er(int n, double q, std::uint64_t seed);

/**
 * Correlated copy of g1: each pair is kept with probability rho and otherwise redrawn
 * as a fresh Bernoulli(q). The returned graph is marginally G(n, q) when g1 is.
 */
Graph resample_pair(const Graph& g1, double q, double rho, std::uint64_t seed);

struct CorrelatedPair {
    Graph g1;
    Graph g2;
    double rho = 1.0;
};

CorrelatedPair correlated_pair(int n, double q, double rho, std::uint64_t seed);

/**
 * Resampling trajectory.
 *
 * Every pair {u,v} owns a resample time T_uv ~ U(0,1) and a fresh Bernoulli(q) value
 * B_uv used after time T_uv. The snapshot at time t keeps the base state of pairs with
 * T_uv > t and uses B_uv for the rest, so snapshot(t) versus base is a correlated pair
 * with retention rho = 1 - t, and resampled sets are nested in t.
 *
 * Storage is sparse: T_uv is a keyed hash of (seed, u, v), and the pairs with B_uv = 1
 * are drawn once by geometric skipping. Only pairs that are an edge in some snapshot are
 * ever materialized.
 */
class ResampleTrajectory {
public:
    ResampleTrajectory(Graph base, double q, std::vector<double> time_points, std::uint64_t seed);

    const Graph& base() const { return base_; }
    const std::vector<double>& time_points() const { return times_; }
    double q() const { return q_; }

    /// Resample time of a pair.
    double time_of(Vertex u, Vertex v) const;

    /// Snapshot at an arbitrary t in [0,1].
    Graph snapshot(double t) const;
    /// Snapshot at the k-th configured time point.
    Graph snapshot_at(std::size_t k) const { return snapshot(times_.at(k)); }

    /// Pairs resampled by time t among the union of all snapshot edges (u < v, sorted).
    std::vector<Edge> resampled_by(double t) const;

    /// Number of pairs that appear as an edge in at least one snapshot.
    std::size_t union_size() const { return union_.size(); }

private:
    struct PairState {
        Edge e;
        double t;
        bool base_edge;
        bool fresh_edge;  // B_uv
    };
    Graph base_;
    double q_;
    std::vector<double> times_;
    std::uint64_t seed_;
    std::vector<PairState> union_;
};

/**
 * BFS layer decomposition from a root.
 *
 * `parents(v)` lists the neighbors of v one step closer to the root, sorted by ID.
 * Unreachable vertices have distance kInfDist and appear in no layer.
 */
struct LayerDecomposition {
    Vertex root = 0;
    std::vector<int> dist;
    std::vector<std::vector<Vertex>> layers;
    std::vector<std::int64_t> sizes;
    std::vector<std::int64_t> parent_offsets;
    std::vector<Vertex> parent_list;

    int n() const { return static_cast<int>(dist.size()); }
    std::span<const Vertex> parents(Vertex v) const {
        return {parent_list.data() + parent_offsets[static_cast<std::size_t>(v)],
                static_cast<std::size_t>(parent_offsets[static_cast<std::size_t>(v) + 1] -
                                         parent_offsets[static_cast<std::size_t>(v)])};
    }
    bool reachable(Vertex v) const { return dist[static_cast<std::size_t>(v)] != kInfDist; }
    std::int64_t reachable_count() const;
    /// N_d, or 0 when d is beyond the last layer.
    std::int64_t size_at(int d) const {
        return (d >= 0 && d < static_cast<int>(sizes.size())) ? sizes[static_cast<std::size_t>(d)] : 0;
    }
};

LayerDecomposition bfs_layers(const Graph& g, Vertex root);

/// Plain BFS distances, without parents or layers.
std::vector<int> bfs_distances(const Graph& g, Vertex root);

/**
 * Derived scalars of the sparse regime.
 *
 * q = alpha log n / n; ell* = log n / log(nq); d* is the least integer with
 * (nq)^d >= n / (log log n)^2; Delta = d* - ell*; lambda = exp(-(nq)^Delta);
 * kappa = (1 - lambda) log log n; gamma = rho^{d*}; eta = log(1/lambda) / (lambda n q);
 * xi = lambda^{1 - gamma}.
 */
struct Proxies {
    double n = 0;
    double q = 0;
    double alpha = 0;
    double ell_star = 0;
    int d_star = 0;
    double delta = 0;
    double lambda = 0;
    double kappa = 0;
    double rho = 1;
    double gamma = 1;
    double eta = 0;
    double xi = 1;
    double loglogn = 0;
};

/// Throws DomainError when nq <= 1 or n <= e (log log n must be positive).
Proxies proxies(double n, double q, std::optional<double> rho = std::nullopt);

struct LayerIntersection {
    std::vector<std::int64_t> counts;  ///< N_d^I for d = 0..
    double same_distance_fraction = 0;  ///< sum_d N_d^I / n
    std::int64_t at(int d) const {
        return (d >= 0 && d < static_cast<int>(counts.size())) ? counts[static_cast<std::size_t>(d)] : 0;
    }
};

/// N_d^I = |Gamma_d(L1) cap Gamma_d(L2)|. Throws ParameterError on mismatched n or roots.
LayerIntersection layer_intersection(const LayerDecomposition& l1, const LayerDecomposition& l2);

}  // namespace ogp

#endif
