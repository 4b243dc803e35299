#ifndef OGP_SPT_HPP
#define OGP_SPT_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "ogp/graph.hpp"
#include "ogp/numerics.hpp"
#include "ogp/rng.hpp"

namespace ogp {

/**
 * Product measure over rooted trees: every non-root vertex picks its parent independently
 * from a finite support. Supports point strictly toward the root (level[parent] = level[v] - 1)
 * so every realization is acyclic. Weights are optional; an empty weight array means uniform.
 *
 * The shortest-path DAG is the uniform case with support(v) = par_G(v), and its
 * realizations are exactly the shortest-path trees.
 */
struct ProductTreeMeasure {
    Vertex root = 0;
    std::vector<int> level;  ///< kInfDist for vertices outside the measure
    std::vector<std::int64_t> offsets;
    std::vector<Vertex> support;
    std::vector<double> weights;  ///< parallel to `support`; empty = uniform

    int n() const { return static_cast<int>(level.size()); }
    std::span<const Vertex> support_of(Vertex v) const {
        return {support.data() + offsets[static_cast<std::size_t>(v)],
                static_cast<std::size_t>(offsets[static_cast<std::size_t>(v) + 1] - offsets[static_cast<std::size_t>(v)])};
    }
    bool uniform() const { return weights.empty(); }
    bool covers(Vertex v) const { return level[static_cast<std::size_t>(v)] != kInfDist; }
    /// Probability that v picks candidate at position k of its support.
    double prob(Vertex v, std::size_t k) const;
    /// Throws StructuralError if a covered non-root vertex has an empty support or a
    /// support entry is not one level closer to the root, or a support is not strictly increasing.
    void validate() const;
};

/**
 * Rooted spanning tree of the root's component as a parent map.
 * parent[root] = root; parent[v] = -1 and dist_T[v] = kInfDist for vertices outside.
 */
struct ParentMap {
    Vertex root = 0;
    std::vector<Vertex> parent;
    std::vector<int> dist_T;

    int n() const { return static_cast<int>(parent.size()); }
    bool contains(Vertex v) const { return parent[static_cast<std::size_t>(v)] >= 0; }
    bool operator==(const ParentMap& o) const { return root == o.root && parent == o.parent; }
};

/// Builds a ParentMap from parent pointers, computing tree depths. Throws StructuralError on a cycle
/// or a pointer to a vertex outside the tree.
ParentMap make_parent_map(Vertex root, std::vector<Vertex> parent);

/// Checks that `t` is a spanning tree of the root component of g using graph edges.
bool is_spanning_tree_of(const ParentMap& t, const Graph& g);

/// sum_v dist_T(root, v) over the tree.
std::int64_t tree_energy(const ParentMap& t);

/// Children lists of a tree (sorted by ID).
std::vector<std::vector<Vertex>> children_of(const ParentMap& t);

ProductTreeMeasure shortest_path_dag(const LayerDecomposition& L);

/// Draws every parent independently from its support. Throws StructuralError on an empty support.
ParentMap uniform_spt_sample(const ProductTreeMeasure& m, Rng& rng);
ParentMap uniform_spt_sample(const ProductTreeMeasure& m, std::uint64_t seed);

/// log of the number of realizations: sum over non-root vertices of log |support(v)|.
double log_spt_count(const ProductTreeMeasure& m);

/// Unique u-v path in T as a list of edges (in walking order from u to v).
/// Throws DomainError if u or v is outside the tree.
std::vector<Edge> project_path(const ParentMap& t, Vertex u, Vertex v);

enum class PivotRule {
    FirstImproving,  ///< round-robin scan of vertices by ID; first vertex with an improving re-attachment
    Dantzig          ///< globally steepest improvement
};

struct LocalSearchResult {
    ParentMap tree;
    std::int64_t swaps = 0;
    std::vector<std::int64_t> objective_trace;  ///< objective before the first swap and after each swap
};

/**
 * 1-local search on min_T sum_v d_T(root, v) over spanning trees.
 *
 * A move removes one tree edge (v, parent(v)) and adds one graph edge (v, u); it is
 * applied only when the objective strictly decreases, which happens exactly when
 * d_T(u) + 1 < d_T(v). A tree with no such move has d_T = d_G everywhere, so the
 * search stops at the global optimum.
 *
 * With FirstImproving, vertices are visited round robin in ID order and the improving
 * vertex is re-attached to its shallowest neighbor (smallest ID on ties). Each full pass
 * fixes at least one more BFS level, so the number of swaps is at most n * ecc(root).
 */
LocalSearchResult local_search_p2(const Graph& g, Vertex root, const ParentMap& init,
                                  PivotRule rule = PivotRule::FirstImproving);

/**
 * Loopy belief propagation for the finite-temperature tree measure. Each directed message
 * u -> v is a distribution over D_u + 1 where D_u is u's distance estimate. With
 * beta_bar = +infinity messages are point masses and the update is min-plus, which is
 * Dijkstra/Bellman-Ford on unit weights.
 *
 * At finite beta_bar the update is the exact expectation of the softmin-weighted mixture
 * over the independent incoming distances, computed by a DP over per-level counts.
 * Message supports are truncated at distance n-1, masses below `prune` are dropped, and
 * every message is renormalized after each round.
 */
struct BpResult {
    std::vector<DiscreteDist> beliefs;  ///< per vertex; value +inf means "unreachable"
    int rounds_run = 0;
    bool converged = false;
};

BpResult bp_dijkstra(const Graph& g, Vertex root, double beta_bar, int rounds, double prune = 1e-13);

/// Mode of each belief as an integer distance (kInfDist for +inf).
std::vector<int> bp_modes(const BpResult& r);

// serialization
void write_parent_map(std::ostream& os, const ParentMap& t);
ParentMap read_parent_map(std::istream& is);
void write_measure(std::ostream& os, const ProductTreeMeasure& m);

}  // namespace ogp

#endif
