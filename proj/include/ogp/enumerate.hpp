#ifndef OGP_ENUMERATE_HPP
#define OGP_ENUMERATE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "ogp/graph.hpp"
#include "ogp/spt.hpp"

namespace ogp {

/// Largest root component that the brute-force routines accept.
inline constexpr int kMaxEnumerate = 9;

/// Optional restriction on tree edges: allow(v, u) says whether v may take u as its parent.
using ParentFilter = std::function<bool(Vertex v, Vertex u)>;

/**
 * Calls `fn(parent)` once per spanning tree of the root's component.
 *
 * parent[root] = root and parent[v] = -1 outside the component. Parents are assigned in BFS
 * order with a pointer-chasing cycle check, so only acyclic partial maps are extended.
 * Throws TooLargeError when the component has more than kMaxEnumerate vertices.
 */
void for_each_spanning_tree(const Graph& g, Vertex root, const std::function<void(const std::vector<Vertex>&)>& fn,
                            const ParentFilter& allow = {});

/// Number of spanning trees of the root component, by enumeration.
std::int64_t count_spanning_trees(const Graph& g, Vertex root);

/// Exact Gibbs law over spanning trees, in enumeration order.
struct ExactGibbsLaw {
    double log_z = 0;
    std::vector<ParentMap> trees;
    std::vector<std::int64_t> energies;
    std::vector<double> probs;
};

/// log Z = log sum_T exp(-beta_bar * energy(T)).
double exact_z_bruteforce(const Graph& g, Vertex root, double beta_bar);
ExactGibbsLaw exact_gibbs_law(const Graph& g, Vertex root, double beta_bar);

using EnergySpectrum = std::map<std::int64_t, std::int64_t>;  ///< energy -> number of trees

/// Energy spectrum of all spanning trees of the root component.
EnergySpectrum energy_spectrum(const Graph& g, Vertex root);

/**
 * Energy spectrum split by kernel at layer d_star.
 *
 * For every subset A of the critical layer the trees with kernel exactly A are enumerated
 * directly, by forbidding layer-(d_star-1) parents outside A and requiring them on A; no
 * call to kernel_of is involved. by_size[m] sums the subsets of size m. The counts are
 * integers, so Z = sum_m Z_m can be compared with energy_spectrum exactly, energy by energy.
 */
struct KernelSpectrum {
    int d_star = 0;
    std::int64_t N_dstar = 0;
    std::vector<Vertex> layer;  ///< critical layer, sorted
    std::map<std::vector<Vertex>, EnergySpectrum> by_kernel;  ///< only kernels with at least one tree
    std::vector<EnergySpectrum> by_size;
    EnergySpectrum total;  ///< sum of by_size

    /// log Z_m for m = 0..N_dstar (-inf where there are no trees).
    std::vector<double> log_z_by_size(double beta_bar) const;
    double log_z(double beta_bar) const;
};

KernelSpectrum kernel_spectrum(const Graph& g, Vertex root, int d_star);

/// Fraction of the n-1 tree edges shared by two spanning trees of the same component.
double tree_overlap_R(const ParentMap& a, const ParentMap& b);

struct FppWindow {
    double log_z = 0;  ///< -inf when the window is empty
    bool empty = false;
    std::int64_t trees = 0;
};

/**
 * Empirical Franz-Parisi window: log of the Gibbs weight of the trees T' with
 * r - eps <= R(center, T') < r + eps (the top window also keeps R = 1).
 */
FppWindow fpp_empirical(const Graph& g, Vertex root, double beta_bar, const ParentMap& center, double r, double eps);

/**
 * Canonical code of a graph with at most 11 vertices: the smallest upper-triangle adjacency
 * bit string over the vertex orders compatible with an isomorphism-invariant color refinement.
 */
std::uint64_t canonical_code(const Graph& g);

/// Graph with the adjacency of a canonical code.
Graph graph_from_code(int n, std::uint64_t code);

/// All connected graphs on n vertices up to isomorphism (1 <= n <= 8), as canonical representatives.
std::vector<Graph> connected_graphs(int n);

}  // namespace ogp

#endif
