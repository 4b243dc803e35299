#ifndef OGP_THEORY_HPP
#define OGP_THEORY_HPP

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ogp/graph.hpp"

namespace ogp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/**
 * Limiting parameters for the closed-form predictions.
 *
 * In the asymptotic setting the parameters must be consistent: rho < 1 forces gamma = 0,
 * delta = 1 forces lambda = 0 and lambda = 1 forces delta = 0. Finite-n overlays plug in
 * the proxies at a given (n, q, rho), which violate those limits, so `finite_n` skips the
 * consistency checks while keeping the range checks.
 */
struct LimitParams {
    double lambda = 0.5;
    double gamma = 1.0;
    double rho = 1.0;
    double delta = 0.0;
    double kappa = kInf;
    double eta = 0.0;
    double xi = 1.0;
    double beta = 1.0;
    bool finite_n = false;

    /// Throws ParameterError on out-of-range or inconsistent values.
    void validate() const;

    /// Proxies evaluated at finite n, flagged as a finite-n overlay.
    static LimitParams from_proxies(const Proxies& p, double beta = 1.0);
};

// ---------------------------------------------------------------------------
// Poisson functionals

/**
 * g(a,b) = E[Z / (max(X1,X2) + Z) | Z > 0] for independent X1, X2 ~ Poisson(a),
 * Z ~ Poisson(b). g(0,b) = 1 for b > 0 and g(a,0) = 0. The truncated series leaves
 * out probability mass below `precision`, and the integrand is bounded by 1.
 */
double g_func(double a, double b, double precision = 1e-12);

/// h(a,b) = E[Z / ((X1+Z)(X2+Z)) | Z > 0]; the a = 0 branch is E[1/Z | Z > 0]. h(a,0) = 0.
double h_func(double a, double b, double precision = 1e-12);

/// Psi_0(lambda) = E[log(X v 1)] with X ~ Poisson(log(1/lambda)).
double psi0(double lambda);

/// Psi_1(lambda) = E[log X] with X ~ ZTP(log(1/lambda)).
double psi1(double lambda);

// ---------------------------------------------------------------------------
// Correlated graph limits

/// Limit of N^I_{d*}/n: 1 - 2 lambda + lambda^{2-gamma}.
double limit_intersection_fraction(double lambda, double gamma);

/**
 * Limit of the optimal-coupling tree overlap R~.
 *
 * Branches: 1 for gamma = 1; the g-series formula for gamma in (0,1); rho (1-lambda) lambda^2
 * for gamma = 0; gamma when lambda is 0 or 1.
 */
double limit_tree_overlap(const LimitParams& p);

/**
 * The same limit in the single-display form that carries rho on the first term and covers
 * every gamma in [0,1] when 0 < lambda < 1. It coincides with limit_tree_overlap on
 * consistent parameters and is the one to use for finite-n overlays where rho < 1 and gamma > 0.
 */
double limit_tree_overlap_unified(const LimitParams& p);

/// Limit of the independent-coupling overlap Q: h(...)(1 - lambda^gamma) when 0 < lambda < 1 and gamma > 0, else 0.
double limit_indep_overlap(const LimitParams& p);

/// Limit of the DAG overlap S: gamma if lambda = 1 or eta = inf, else rho ((1-(2-xi)lambda) xi + eta gamma) / (1 - lambda + eta).
double limit_dag_overlap(const LimitParams& p);

/// Limiting probability of a unique shortest path between two fixed vertices (d* odd): lambda log(1/lambda).
double unique_path_probability(double lambda);

// ---------------------------------------------------------------------------
// Gibbs measure limits

enum class Regime { A, B, C_i, C_ii, C_iii };

const char* regime_name(Regime r);

/// Classifies (lambda, delta, kappa). Throws ParameterError on an impossible combination.
Regime classify_regime(double lambda, double delta, double kappa);

/// Limiting free energy density. Throws ParameterError for beta <= 0 or an invalid (lambda, delta).
double free_energy_density(double lambda, double delta, double beta);

/// beta_c = 1 - delta - 1/kappa (kappa = inf gives 1 - delta, kappa = 0 gives -inf).
double critical_beta(double delta, double kappa);

/**
 * Franz-Parisi potential f_{lambda,Delta}(r) for a reference tree with kernel fraction r1
 * and single-parent kernel fraction r2. Uses the four-piece form when beta >= 1 - delta and
 * the two-piece form otherwise. Throws ParameterError if r is outside [0,1] or the
 * (r1, r2) pair is not ordered 0 <= r2 <= r1 <= 1.
 */
double fpp_value(double lambda, double delta, double beta, double r1, double r2, double r);

/// fpp_value on every grid point.
std::vector<double> fpp_curve(double lambda, double delta, double beta, double r1, double r2,
                              std::span<const double> r_grid);

/**
 * (r1, r2) for a reference tree drawn from the Gibbs measure at inverse temperature
 * beta_tree: (1 - lambda, lambda log(1/lambda)) when beta_tree > 1 - delta, (0, 0) otherwise.
 */
std::pair<double, double> fpp_gibbs_reference(double lambda, double delta, double beta_tree);

/// Two-temperature potential F_{beta, beta_tree}(r).
double fpp_two_temperature(double lambda, double delta, double beta, double beta_tree, double r);

struct RateValue {
    double value = 0;
    bool finite = true;  ///< false at the endpoints, where value holds +inf
};

/// Lambda(t; lambda) = E[log(1 - 1/X + e^t/X) | X >= 2], X ~ Poisson(log(1/lambda)).
double rate_cgf(double lambda, double t);

/// r_bar* = E[1/X | X >= 2], the zero of the rate function.
double rate_zero(double lambda);

/**
 * I_lambda(r_bar) = sup_t (t r_bar - Lambda(t; lambda)) by bisection on Lambda'.
 * Requires lambda in (0,1); r_bar in {0,1} returns the +inf sentinel with finite = false.
 * Throws ParameterError for r_bar outside [0,1].
 */
RateValue rate_function(double lambda, double r_bar);

/// Limiting overlap of two independent Gibbs samples: (1-lambda) E[1/X | X > 0] for lambda in (0,1) and beta >= 1, else 0.
double replica_overlap(double lambda, double beta);

/// Objective g_{alpha,b}((1-lambda) y) - I(y) at the critical temperature window.
double kernel_objective(double alpha, double b, double lambda, double y);

/// Rate I(y) for the Bernoulli(A/(A+1)) tilt with A ~ ZTP(log(1/lambda)).
double kernel_rate(double lambda, double y);

/// Unique maximizer y* of kernel_objective over (0,1], by golden-section search.
double critical_kernel_fraction(double alpha, double b, double lambda);

/// Internal energy density 1 - lambda - r for kernel fraction r.
double internal_energy_density(double lambda, double r);

/// Ground-state entropy n Psi_0(lambda) + lambda n log(alpha (1-lambda) log n).
double ground_state_log_count(double n, double alpha, double lambda);

// ---------------------------------------------------------------------------
// Curve emission

/// Table of numeric columns written as CSV with a header row.
struct Curve {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
    void write_csv(std::ostream& os) const;
};

}  // namespace ogp

#endif
