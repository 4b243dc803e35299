#ifndef OGP_GIBBS_HPP
#define OGP_GIBBS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ogp/graph.hpp"
#include "ogp/numerics.hpp"
#include "ogp/rng.hpp"
#include "ogp/spt.hpp"

namespace ogp {

/**
 * Gibbs measure over spanning trees of the root's component:
 * mu(T) proportional to exp(-beta_bar * sum_v d_T(root, v)), beta_bar = beta * log log n.
 */
struct GibbsConfig {
    double beta = 1.0;
    double beta_bar = 0.0;
    Vertex root = 0;

    /// beta_bar = beta * log log n. Throws ParameterError for beta < 0 or n <= e.
    static GibbsConfig make(double beta, double n, Vertex root = 0);
};

/// Kernel: a sorted subset of the critical layer Gamma_{d*}.
using Kernel = std::vector<Vertex>;

/**
 * Per-graph statistics for the one-dimensional optimization. `d_star` is passed in
 * explicitly so the same code serves ER graphs (d* from the proxies) and tiny test graphs.
 */
struct GraphStats {
    std::int64_t n = 0;  ///< size of the root component
    double n_total = 0;  ///< vertex count of the graph, used for log log n
    double loglogn = 0;
    double q = 0;
    int d_star = 0;
    std::int64_t N_dstar = 0;
    std::int64_t N_dstar1 = 0;
    std::vector<Vertex> critical_layer;  ///< Gamma_{d*} sorted by ID
    std::vector<int> parent_counts;      ///< |par_G(v)| for v in critical_layer
    std::int64_t m0 = 0;                 ///< components of the residual graph G minus Gamma_{<= d*-1}
    std::int64_t m_ell = 0;              ///< proof threshold m0 v ceil(n / (3 (log log n)^2)); diagnostics only
    Proxies proxies;
};

/// Statistics with d* taken from proxies(n_total, q).
GraphStats graph_stats(const Graph& g, const LayerDecomposition& L, double q);
/// Statistics for an explicit critical layer (proxies are left default).
GraphStats graph_stats(const Graph& g, const LayerDecomposition& L, double q, int d_star);

// ---------------------------------------------------------------------------
// Kernels

/// phi(T) = Gamma_{d*} cap ch_T(Gamma_{d*-1}), sorted.
Kernel kernel_of(const ParentMap& t, const LayerDecomposition& L, int d_star);

/// Residual component labels of G minus Gamma_{<= d*-1} within the root component (-1 elsewhere).
std::vector<int> residual_components(const Graph& g, const LayerDecomposition& L, int d_star, int* count = nullptr);

/// True iff A is a subset of Gamma_{d*} meeting every residual component.
bool kernel_valid(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star);

/**
 * Minimum-energy distance vector given kernel A: d_G(root, v) below the critical layer and
 * d* + (distance to A inside the residual graph) elsewhere. Throws StructuralError when A is
 * not a valid kernel.
 */
std::vector<int> kernel_distances(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star);

/**
 * Three-step sampler for the zero-temperature conditional law given kernel A: uniform
 * G-parents below the critical layer and on A, and for every other residual vertex a
 * uniform neighbor one step closer to A in the residual graph.
 */
ParentMap sample_cond_ground(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star,
                             Rng& rng);
ParentMap sample_cond_ground(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star,
                             std::uint64_t seed);

/// log of the number of trees the conditional ground sampler can return (product of its option counts).
double cond_ground_log_count(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star);

/// Running totals of tau_sample's rejection step.
struct TauDiagnostics {
    std::int64_t attempts = 0;
    std::int64_t rejected = 0;
    double rejection_rate() const { return attempts ? double(rejected) / double(attempts) : 0.0; }
};

/// Critical-layer vertices that form a residual component on their own; every kernel contains them.
std::vector<Vertex> forced_kernel_vertices(const Graph& g, const LayerDecomposition& L, int d_star);

/**
 * Draws an m-subset of `layer` with probability proportional to the product of `weights`.
 *
 * Vertices in `forced` are always included; since the weight is a product this is exact
 * conditioning on containing them. If `valid` is given, invalid draws are rejected and
 * redrawn; once 100 or more attempts have been made with a rejection rate above 1% the
 * call throws StructuralError with the rate in the message.
 * Throws ParameterError unless max(1, |forced|) <= m <= |layer|.
 */
Kernel tau_sample(std::int64_t m, std::span<const Vertex> layer, std::span<const int> weights, Rng& rng,
                  const std::function<bool(const Kernel&)>& valid = {}, TauDiagnostics* diag = nullptr,
                  std::span<const Vertex> forced = {});
Kernel tau_sample(std::int64_t m, std::span<const Vertex> layer, std::span<const int> weights, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Psi and the one-dimensional optimization

namespace gibbs {
/// m-wise LogSumExp; the implementation lives in numerics.
using ogp::lse_m;
}  // namespace gibbs

struct PsiEstimate {
    double mean = 0;
    double se = 0;
    int samples = 0;
};

/// Budget for exact DP evaluation of Psi: N * m at most this many cells.
inline constexpr double kPsiDpBudget = 5e7;

/**
 * Monte Carlo estimate of Psi(m; N, lambda) = E[lse_m(log X_1, ..., log X_N)], X_i ~ ZTP(log(1/lambda)).
 * Throws TooLargeError when N * m exceeds kPsiDpBudget (use psi_bounds instead).
 */
PsiEstimate psi_estimate(std::int64_t m, std::int64_t N, double lambda, int samples, std::uint64_t seed);

/// Monte Carlo estimate of Psi(m; N, lambda) for every m = 0..N from the same draws.
std::vector<double> psi_curve(std::int64_t N, double lambda, int samples, std::uint64_t seed);

/// Envelope of Psi without the unknown constant: lower = m Psi_1, upper = N H(m/N) + m Psi_1.
struct PsiBounds {
    double lower = 0;
    double upper = 0;
};
PsiBounds psi_bounds(std::int64_t m, std::int64_t N, double lambda);

enum class PsiPolicy {
    LowerBound,  ///< Psi(m) ~ m Psi_1, the leading-order approximant
    Exact,       ///< Monte Carlo DP curve (requires N^2 within the budget)
    Auto         ///< Exact when within budget, LowerBound otherwise
};

struct PhiOpt {
    std::int64_t m_star_numeric = 0;  ///< argmax of Phi~ over [max(m0,1), N_{d*}]
    double value = 0;                  ///< Phi~ at the argmax
    std::int64_t m_star_formula = 0;   ///< N_{d*} (low T) or floor(N_{d*} / ((1-Delta-beta) kappa)) (high T)
    bool low_temperature = false;
    bool near_critical = false;  ///< |beta - (1 - Delta - 1/kappa)| < 0.05
    PsiPolicy policy_used = PsiPolicy::LowerBound;
    std::vector<double> curve;  ///< Phi~(m) for m = 0..N (entries below the search range are -inf)
};

/// Phi~(m) = Psi(m) + (n - m) log(m q) + beta_bar m - beta_bar (d*+1) n, given Psi(m).
double phi_tilde(const GraphStats& s, double beta, std::int64_t m, double psi_m);

/// Scans Phi~ over m and returns the argmax together with the closed-form m*.
PhiOpt phi_tilde_opt(const GraphStats& s, double beta, PsiPolicy policy = PsiPolicy::LowerBound,
                     int psi_samples = 8, std::uint64_t seed = 0);

struct LogZFormula {
    double value = 0;
    bool low_temperature = false;
    bool near_critical = false;
    bool asymptotic_only = false;  ///< n so small that log log n is O(1): no tolerance guarantee
};

/// Closed-form log partition function for the low- or high-temperature phase.
LogZFormula log_z_formula(const GraphStats& s, double beta);

// ---------------------------------------------------------------------------
// Energies, MCMC, witness

/// sum_v d_G(root, v) over the root component.
std::int64_t ground_energy(const LayerDecomposition& L);
/// sum_v d_T(root, v).
std::int64_t energy(const ParentMap& t);

/// argmax_i (log_weights[i] + Gumbel noise); distributed as softmax(log_weights).
std::size_t gumbel_max_sample(std::span<const double> log_weights, Rng& rng);
std::size_t gumbel_max_sample(std::span<const double> log_weights, std::uint64_t seed);

/**
 * Single-site heat-bath dynamics on spanning trees of the root component.
 *
 * A step picks a non-root vertex v uniformly and redraws its parent among the neighbors
 * outside v's subtree, with weight exp(-beta_bar * |subtree(v)| * (d_T(u) + 1 - d_T(v))).
 * The candidate set is unchanged by the move, so the chain is reversible with respect to
 * the Gibbs measure. Depths and energy are updated in O(|subtree(v)|).
 */
class GlauberChain {
public:
    GlauberChain(const Graph& g, Vertex root, double beta_bar, std::uint64_t seed);
    GlauberChain(const Graph& g, const ParentMap& init, double beta_bar, std::uint64_t seed);

    struct Move {
        Vertex v = -1;
        Vertex from = -1;
        Vertex to = -1;
        std::vector<Vertex> candidates;
        std::vector<double> probs;  ///< heat-bath probabilities over `candidates`
    };

    /// One step; returns the move (v, old parent, new parent, and the candidate law).
    Move step();
    void run(std::int64_t steps);

    /// Heat-bath law for re-parenting v from the current state, without moving.
    Move proposal(Vertex v) const;

    ParentMap tree() const;
    std::int64_t energy() const { return energy_; }
    const std::vector<Vertex>& parent() const { return parent_; }
    const std::vector<int>& depth() const { return depth_; }
    /// Energy recomputed from scratch; equals energy() at all times.
    std::int64_t recompute_energy() const;

private:
    void init_from(const ParentMap& t);
    void collect_subtree(Vertex v, std::vector<Vertex>& out) const;

    const Graph* g_;
    Vertex root_;
    double beta_bar_;
    Rng rng_;
    std::vector<Vertex> movable_;
    std::vector<Vertex> parent_;
    std::vector<std::vector<Vertex>> children_;
    std::vector<int> depth_;
    std::int64_t energy_ = 0;
};

/// Runs a chain from the BFS tree, discarding `burn_in` steps and keeping every `thin`-th state.
std::vector<ParentMap> glauber_run(const Graph& g, Vertex root, double beta_bar, std::int64_t steps,
                                   std::uint64_t seed, std::int64_t burn_in = 0, std::int64_t thin = 1);

/// f(T) = sum_{v in Gamma_{d*}} | |ch_T(v)| - N_{d*+1}/N_{d*} |.
double witness_statistic(const ParentMap& t, const LayerDecomposition& L, int d_star);

/// Upper bound on the mean witness under uniform shortest-path trees: sqrt(2 N_{d*} (n - N_{d*})).
double witness_uniform_bound(std::int64_t n, std::int64_t N_dstar);

/// Leading term of the lower bound for trees with kernel A: |N^A_{d*+1} - |A| N_{d*+1}/N_{d*}|.
double witness_kernel_bound(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star);

/// High-temperature surrogate sample: m* from the closed form, A ~ tau_{G,m*}, T from the conditional ground sampler.
ParentMap ht_sample(const GraphStats& s, const LayerDecomposition& L, const Graph& g, double beta, Rng& rng,
                    Kernel* kernel_out = nullptr, TauDiagnostics* diag = nullptr);

// ---------------------------------------------------------------------------
// Gibbs measure on s-t walks

/**
 * Log walk counts: row l holds log #(walks s -> v of length l) for l = 0..max_len
 * (-inf where there are none).
 */
std::vector<std::vector<double>> log_walk_counts(const Graph& g, Vertex s, int max_len);

/// log sum_{l <= max_len} #walks(s -> t, l) * log(n)^{-beta l}; -inf if t is not reachable within max_len.
double path_partition_function(const Graph& g, Vertex s, Vertex t, double beta, int max_len);

/// Samples reusable across draws: walk-count table plus the length law.
class PathGibbsSampler {
public:
    PathGibbsSampler(const Graph& g, Vertex s, Vertex t, double beta, int max_len);
    double log_z() const { return log_z_; }
    /// Vertex sequence s = w_0, ..., w_l = t. Throws DomainError if t is unreachable.
    std::vector<Vertex> sample(Rng& rng) const;

private:
    const Graph* g_;
    Vertex s_, t_;
    std::vector<std::vector<double>> a_;
    std::vector<double> len_logw_;
    double log_z_;
};

std::vector<Vertex> path_gibbs_sample(const Graph& g, Vertex s, Vertex t, double beta, int max_len, std::uint64_t seed);

}  // namespace ogp

#endif
