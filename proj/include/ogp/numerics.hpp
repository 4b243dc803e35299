#ifndef OGP_NUMERICS_HPP
#define OGP_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ogp/rng.hpp"

namespace ogp {

/** Finite discrete distribution. Values may include +infinity (used for BP beliefs). */
struct DiscreteDist {
    std::vector<double> values;
    std::vector<double> probs;

    /// Throws ParameterError unless probabilities are nonnegative and sum to 1 within 1e-12.
    void validate() const;
    double mean() const;
    /// Value carrying the largest mass (first one on ties).
    double mode() const;
    /// Returns a copy sorted by value with equal values merged.
    DiscreteDist normalized() const;
};

// ---------------------------------------------------------------------------
// log-domain helpers

/// log(exp(a) + exp(b)) without overflow; handles -inf.
double log_add(double a, double b);

/// Standard LogSumExp over a list. Returns -inf for an empty list.
double log_sum_exp(std::span<const double> xs);

/// log C(n, k) through lgamma.
double log_binomial(double n, double k);

// ---------------------------------------------------------------------------
// Poisson family

double log_poisson_pmf(std::int64_t k, double mu);
double poisson_pmf(std::int64_t k, double mu);

/// Smallest K such that P(Poisson(mu) > K) < tail.
std::int64_t poisson_tail_cutoff(double mu, double tail);

/// Vector of Poisson(mu) pmf values for k = 0..K with K from poisson_tail_cutoff.
std::vector<double> poisson_pmf_table(double mu, double tail = 1e-16);

/// pmf of the zero-truncated Poisson law at k >= 1.
double ztp_pmf(std::int64_t k, double mu);

/// Sample X ~ Poisson(mu) conditioned on X >= 1.
std::int64_t ztp_sample(double mu, Rng& rng);
std::int64_t ztp_sample(double mu, std::uint64_t seed);

/// Sample X ~ Binomial(n, p) conditioned on X >= 1.
std::int64_t ztb_sample(std::int64_t n, double p, Rng& rng);
std::int64_t ztb_sample(std::int64_t n, double p, std::uint64_t seed);

/// E[f(X)] for X ~ Poisson(mu) restricted to X >= kmin, divided by P(X >= kmin).
/// Truncation uses a tail mass below `tail`.
double poisson_conditional_mean(double mu, std::int64_t kmin,
                                const std::function<double(std::int64_t)>& f,
                                double tail = 1e-14);

// ---------------------------------------------------------------------------
// 1-D Wasserstein distance

/// W1 between two empirical measures of equal size given as sorted samples.
double w1_1d(std::span<const double> xs, std::span<const double> ys);

/// W1 between two finite distributions via the CDF integral.
double w1_1d(const DiscreteDist& a, const DiscreteDist& b);

/// Empirical distribution of a sample.
DiscreteDist empirical(std::span<const double> xs);

// ---------------------------------------------------------------------------
// Legendre transform

struct LegendreResult {
    double value;   ///< sup_t (t x - cgf(t))
    double t;       ///< maximizer (or the last bracket point when not attained)
    bool attained;  ///< false when the supremum is approached only as |t| grows without bound
};

/**
 * sup_t (t*x - cgf(t)) for a convex `cgf` with derivative `dcgf`.
 *
 * Finds the root of dcgf(t) = x by bisection. The bracket starts at [-1,1] and is
 * doubled until it contains the root; if it reaches |t| = 2^40 without doing so the
 * result is flagged as not attained.
 */
LegendreResult legendre_sup(const std::function<double(double)>& cgf,
                            const std::function<double(double)>& dcgf, double x);

/// Same, with a central-difference derivative.
LegendreResult legendre_sup(const std::function<double(double)>& cgf, double x);

// ---------------------------------------------------------------------------
// Weighted subsets / elementary symmetric polynomials

/**
 * Log-domain dynamic program for elementary symmetric polynomials
 * e_m(w_1..w_N) = sum over m-subsets I of prod_{i in I} w_i,
 * with inputs given as log weights.
 *
 * Sampling an m-subset with probability proportional to its weight uses the suffix
 * table e_j(w_i..w_N). To keep memory at O((sqrt(N) + block) * m) instead of O(N m) the
 * table is stored at checkpoint rows and recomputed block by block during sampling.
 */
class WeightedSubsetDP {
public:
    WeightedSubsetDP(std::vector<double> log_weights, int m);

    int size() const { return static_cast<int>(logw_.size()); }
    int m() const { return m_; }

    /// log e_m of all weights.
    double log_esp() const { return log_em_; }

    /// log e_j for j = 0..m.
    const std::vector<double>& log_esp_all() const { return full_; }

    /// Sample an m-subset (sorted indices) with probability prop. to its weight.
    std::vector<int> sample(Rng& rng) const;

    /// P(i in A) for each i. O(N m^2); intended for moderate N.
    std::vector<double> inclusion_probabilities() const;

private:
    std::vector<double> suffix_row(int i, const std::vector<double>& next) const;

    std::vector<double> logw_;
    int m_;
    double log_em_;
    std::vector<double> full_;
    int block_;
    // checkpoints_[k] is the suffix row starting at index k*block_
    std::vector<std::vector<double>> checkpoints_;
};

/// Free-function form returning only log e_m.
double log_elementary_symmetric(std::span<const double> log_weights, int m);

/**
 * m-wise LogSumExp: log sum_{|I|=m} exp(sum_{i in I} x_i), computed with a rolling
 * O(m) row in O(len * m) time. This is the single implementation; gibbs::lse_m forwards here.
 */
double lse_m(std::span<const double> xs, int m);

}  // namespace ogp

#endif
