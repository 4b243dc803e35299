#ifndef OGP_OVERLAP_HPP
#define OGP_OVERLAP_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ogp/graph.hpp"
#include "ogp/rng.hpp"
#include "ogp/spt.hpp"

namespace ogp {

/// Summary of every overlap estimator for one correlated pair. All fields lie in [0,1].
struct OverlapReport {
    double r_tilde = 0;          ///< optimal-coupling tree overlap
    double q_indep = 0;          ///< independent-coupling tree overlap
    double s_dag = 0;            ///< shortest-path DAG overlap
    double same_dist_frac = 0;   ///< fraction of vertices at the same distance in both graphs
    double n_d_star_I_frac = 0;  ///< |Gamma_{d*}(1) cap Gamma_{d*}(2)| / n
    std::optional<double> path_overlap;
};

/**
 * Probability that the vertex-wise optimal coupling of the two parent laws at v picks
 * the same parent: sum_x min(p1(x), p2(x)). For uniform supports this is
 * |S1 cap S2| / max(|S1|, |S2|). Zero when v is covered by only one measure.
 */
double vertex_agreement_optimal(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2, Vertex v);

/// sum_x p1(x) p2(x): agreement probability when the two parents are drawn independently.
double vertex_agreement_independent(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2, Vertex v);

/// R~ = (1/n) sum_{v != root} vertex_agreement_optimal. Throws ParameterError on mismatched roots or n.
double tree_overlap_optimal(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2);

/// Q = (1/(n-1)) sum_{v != root} vertex_agreement_independent.
double tree_overlap_independent(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2);

/// S = |D1 cap D2| / sqrt(|D1| |D2|) over directed parent->child edges. Throws DomainError on an empty DAG.
double dag_overlap(const ProductTreeMeasure& d1, const ProductTreeMeasure& d2);

/// Draws (parent in m1, parent in m2) at v from the optimal coupling; -1 where v is not covered.
std::pair<Vertex, Vertex> coupled_parent(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2, Vertex v, Rng& rng);

struct CoupledSample {
    ParentMap t1;
    ParentMap t2;
    std::int64_t common_edges = 0;  ///< number of v with the same parent in both trees
};

/// Samples both trees from the product of vertex-wise optimal couplings.
CoupledSample coupled_spt_sample(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2, Rng& rng);
CoupledSample coupled_spt_sample(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2, std::uint64_t seed);

/// Number of shortest root-v paths (as a double; exact below 2^53).
std::vector<double> count_shortest_paths(const LayerDecomposition& L);

struct PathOverlapTrial {
    double overlap = 0;   ///< |P1 cap P2| / sqrt(|P1| |P2|)
    int len1 = 0;
    int len2 = 0;
    bool unique1 = false;  ///< s-t shortest path unique in the first graph
    bool unique2 = false;
    std::vector<Vertex> path1;  ///< vertices from s to t
    std::vector<Vertex> path2;
};

/**
 * Samples a shortest s-t path in each graph of the pair and returns their overlap.
 *
 * Paths are drawn by walking back from t along parent pointers, where the parent pair at
 * each visited vertex comes from the vertex-wise optimal coupling of the two parent laws
 * (memoized so both walks share the same draw). Walking backward from t never leaves the
 * s-t shortest-path sub-DAG, so this is the projection onto the s-t path of a coupled
 * pair of uniform shortest-path trees rooted at s.
 *
 * Throws DomainError if t is unreachable from s in either graph.
 */
PathOverlapTrial path_overlap_trial(const Graph& g1, const Graph& g2, Vertex s, Vertex t, Rng& rng);
PathOverlapTrial path_overlap_trial(const LayerDecomposition& l1, const LayerDecomposition& l2, Vertex t, Rng& rng);

/// Convenience wrapper returning only the overlap.
double path_overlap_experiment(const CorrelatedPair& pair, Vertex s, Vertex t, std::uint64_t seed);

/// Undirected path overlap |P1 cap P2| / sqrt(|P1| |P2|) for vertex sequences; 1 for two empty paths.
double path_overlap(const std::vector<Vertex>& p1, const std::vector<Vertex>& p2);

/// All estimators at once. `d_star` selects the layer for n_d_star_I_frac.
OverlapReport overlap_report(const LayerDecomposition& l1, const LayerDecomposition& l2, int d_star);

}  // namespace ogp

#endif
