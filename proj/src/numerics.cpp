#include "ogp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ogp/errors.hpp"

namespace ogp {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void DiscreteDist::validate() const {
    if (values.size() != probs.size()) throw ParameterError("DiscreteDist: size mismatch");
    double s = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw ParameterError("DiscreteDist: negative probability");
        s += p;
    }
    if (std::abs(s - 1.0) > 1e-12) throw ParameterError("DiscreteDist: probabilities do not sum to 1");
}

double DiscreteDist::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (probs[i] > 0) s += values[i] * probs[i];
    return s;
}

double DiscreteDist::mode() const {
    if (values.empty()) throw ParameterError("DiscreteDist: empty");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (probs[i] > probs[best]) best = i;
    return values[best];
}

DiscreteDist DiscreteDist::normalized() const {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    DiscreteDist out;
    for (auto i : idx) {
        if (!out.values.empty() && out.values.back() == values[i]) {
            out.probs.back() += probs[i];
        } else {
            out.values.push_back(values[i]);
            out.probs.push_back(probs[i]);
        }
    }
    return out;
}

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> xs) {
    double mx = kNegInf;
    for (double x : xs) mx = std::max(mx, x);
    if (mx == kNegInf) return kNegInf;
    if (std::isinf(mx)) return mx;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - mx);
    return mx + std::log(s);
}

double log_binomial(double n, double k) {
    if (k < 0 || k > n) return kNegInf;
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double log_poisson_pmf(std::int64_t k, double mu) {
    if (k < 0) return kNegInf;
    if (mu == 0.0) return k == 0 ? 0.0 : kNegInf;
    return k * std::log(mu) - mu - std::lgamma(static_cast<double>(k) + 1.0);
}

double poisson_pmf(std::int64_t k, double mu) { return std::exp(log_poisson_pmf(k, mu)); }

std::int64_t poisson_tail_cutoff(double mu, double tail) {
    if (mu < 0) throw ParameterError("poisson_tail_cutoff: negative mean");
    // walk the pmf upward from 0 accumulating mass
    double cdf = 0.0;
    std::int64_t k = 0;
    const auto mode = static_cast<std::int64_t>(mu);
    for (;; ++k) {
        cdf += poisson_pmf(k, mu);
        if (k >= mode && 1.0 - cdf < tail) {
            // cdf rounding makes 1-cdf unreliable near 1e-16; confirm with a direct tail bound
            double next = poisson_pmf(k + 1, mu);
            // geometric bound of the tail beyond k: next / (1 - mu/(k+2))
            double ratio = mu / static_cast<double>(k + 2);
            if (ratio < 1.0 && next / (1.0 - ratio) < tail) return k;
        }
        if (k > mode + 100000) return k;
    }
}

std::vector<double> poisson_pmf_table(double mu, double tail) {
    const auto kmax = poisson_tail_cutoff(mu, tail);
    std::vector<double> out(static_cast<std::size_t>(kmax) + 1);
    for (std::int64_t k = 0; k <= kmax; ++k) out[static_cast<std::size_t>(k)] = poisson_pmf(k, mu);
    return out;
}

double ztp_pmf(std::int64_t k, double mu) {
    if (k < 1) return 0.0;
    return std::exp(log_poisson_pmf(k, mu) - std::log(-std::expm1(-mu)));
}

std::int64_t ztp_sample(double mu, Rng& rng) {
    if (!(mu > 0.0)) throw ParameterError("ztp_sample: mu must be positive");
    if (mu < 30.0) {
        // inverse CDF from k=1
        double u = rng.uniform() * (-std::expm1(-mu));
        double p = std::exp(-mu) * mu;  // P(X=1) untruncated
        std::int64_t k = 1;
        while (u >= p) {
            u -= p;
            ++k;
            p *= mu / static_cast<double>(k);
            if (p < 1e-300 && k > mu) break;
        }
        return k;
    }
    std::poisson_distribution<std::int64_t> pois(mu);
    for (;;) {
        auto x = pois(rng);
        if (x > 0) return x;
    }
}

std::int64_t ztp_sample(double mu, std::uint64_t seed) {
    Rng rng(seed);
    return ztp_sample(mu, rng);
}

std::int64_t ztb_sample(std::int64_t n, double p, Rng& rng) {
    if (n < 1 || !(p > 0.0) || p > 1.0) throw ParameterError("ztb_sample: need n >= 1 and p in (0,1]");
    if (n == 1 || p == 1.0) return n == 1 ? 1 : n;
    const double p0 = std::pow(1.0 - p, static_cast<double>(n));
    if (p0 > 0.5 || n <= 64) {
        // inverse CDF over k = 1..n
        double u = rng.uniform() * (1.0 - p0);
        for (std::int64_t k = 1; k <= n; ++k) {
            double pk = std::exp(log_binomial(static_cast<double>(n), static_cast<double>(k)) +
                                 k * std::log(p) + (n - k) * std::log1p(-p));
            if (u < pk) return k;
            u -= pk;
        }
        return n;
    }
    std::binomial_distribution<std::int64_t> bin(n, p);
    for (;;) {
        auto x = bin(rng);
        if (x > 0) return x;
    }
}

std::int64_t ztb_sample(std::int64_t n, double p, std::uint64_t seed) {
    Rng rng(seed);
    return ztb_sample(n, p, rng);
}

double poisson_conditional_mean(double mu, std::int64_t kmin, const std::function<double(std::int64_t)>& f,
                                double tail) {
    const auto kmax = std::max<std::int64_t>(poisson_tail_cutoff(mu, tail), kmin + 1);
    double num = 0.0, den = 0.0;
    for (std::int64_t k = kmin; k <= kmax; ++k) {
        double p = poisson_pmf(k, mu);
        num += p * f(k);
        den += p;
    }
    if (den <= 0.0) throw DomainError("poisson_conditional_mean: conditioning event has no mass");
    return num / den;
}

double w1_1d(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ParameterError("w1_1d: sample sizes differ; use the distribution overload");
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += std::abs(xs[i] - ys[i]);
    return s / static_cast<double>(xs.size());
}

double w1_1d(const DiscreteDist& a0, const DiscreteDist& b0) {
    const DiscreteDist a = a0.normalized(), b = b0.normalized();
    // merge support points; integrate |Fa - Fb| between consecutive points
    std::size_t i = 0, j = 0;
    double fa = 0.0, fb = 0.0, prev = 0.0, total = 0.0;
    bool started = false;
    while (i < a.values.size() || j < b.values.size()) {
        double x;
        if (j >= b.values.size() || (i < a.values.size() && a.values[i] <= b.values[j]))
            x = a.values[i];
        else
            x = b.values[j];
        if (started) total += std::abs(fa - fb) * (x - prev);
        while (i < a.values.size() && a.values[i] == x) fa += a.probs[i++];
        while (j < b.values.size() && b.values[j] == x) fb += b.probs[j++];
        prev = x;
        started = true;
    }
    return total;
}

DiscreteDist empirical(std::span<const double> xs) {
    DiscreteDist d;
    d.values.assign(xs.begin(), xs.end());
    d.probs.assign(xs.size(), 1.0 / static_cast<double>(xs.size()));
    return d.normalized();
}

LegendreResult legendre_sup(const std::function<double(double)>& cgf, const std::function<double(double)>& dcgf,
                            double x) {
    constexpr double kMaxT = 1099511627776.0;  // 2^40
    double lo = -1.0, hi = 1.0;
    while (dcgf(lo) > x && lo > -kMaxT) lo *= 2.0;
    while (dcgf(hi) < x && hi < kMaxT) hi *= 2.0;
    bool attained = dcgf(lo) <= x && dcgf(hi) >= x;
    if (!attained) {
        double t = dcgf(lo) > x ? lo : hi;
        return {t * x - cgf(t), t, false};
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (dcgf(mid) < x)
            lo = mid;
        else
            hi = mid;
    }
    double t = 0.5 * (lo + hi);
    return {t * x - cgf(t), t, true};
}

LegendreResult legendre_sup(const std::function<double(double)>& cgf, double x) {
    auto d = [&](double t) {
        double h = 1e-5 * std::max(1.0, std::abs(t));
        return (cgf(t + h) - cgf(t - h)) / (2 * h);
    };
    return legendre_sup(cgf, d, x);
}

// ---------------------------------------------------------------------------

namespace {

// Given row e_j(w_{i+1..N-1}) for j=0..m, produce e_j(w_{i..N-1}).
void extend_row(std::vector<double>& row, double lw) {
    for (std::size_t j = row.size() - 1; j >= 1; --j) row[j] = log_add(row[j], row[j - 1] + lw);
}

std::vector<double> empty_row(int m) {
    std::vector<double> r(static_cast<std::size_t>(m) + 1, kNegInf);
    r[0] = 0.0;
    return r;
}

}  // namespace

WeightedSubsetDP::WeightedSubsetDP(std::vector<double> log_weights, int m) : logw_(std::move(log_weights)), m_(m) {
    const int n = size();
    if (m < 0 || m > n) throw ParameterError("WeightedSubsetDP: need 0 <= m <= N");
    block_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
    const int nblocks = (n + block_ - 1) / block_ + 1;
    checkpoints_.assign(static_cast<std::size_t>(nblocks), {});
    std::vector<double> row = empty_row(m);
    if (n % block_ == 0) checkpoints_[static_cast<std::size_t>(n / block_)] = row;
    for (int i = n - 1; i >= 0; --i) {
        extend_row(row, logw_[static_cast<std::size_t>(i)]);
        if (i % block_ == 0) checkpoints_[static_cast<std::size_t>(i / block_)] = row;
    }
    full_ = row;
    log_em_ = row[static_cast<std::size_t>(m)];
}

std::vector<int> WeightedSubsetDP::sample(Rng& rng) const {
    const int n = size();
    if (log_em_ == kNegInf) throw DomainError("WeightedSubsetDP: no subset has positive weight");
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(m_));
    int need = m_;
    int start = 0;
    while (start < n && need > 0) {
        const int end = std::min(n, start + block_);
        // rows[k] = suffix row starting at start+k, for k=0..end-start
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(end - start + 1));
        rows.back() = (end == n) ? empty_row(m_) : checkpoints_[static_cast<std::size_t>(end / block_)];
        for (int i = end - 1; i >= start; --i) {
            rows[static_cast<std::size_t>(i - start)] = rows[static_cast<std::size_t>(i - start + 1)];
            extend_row(rows[static_cast<std::size_t>(i - start)], logw_[static_cast<std::size_t>(i)]);
        }
        for (int i = start; i < end && need > 0; ++i) {
            const auto& here = rows[static_cast<std::size_t>(i - start)];
            const auto& next = rows[static_cast<std::size_t>(i - start + 1)];
            double lp = logw_[static_cast<std::size_t>(i)] + next[static_cast<std::size_t>(need - 1)] -
                        here[static_cast<std::size_t>(need)];
            if (std::log(rng.uniform_pos()) <= lp) {
                chosen.push_back(i);
                --need;
            }
        }
        start = end;
    }
    return chosen;
}

std::vector<double> WeightedSubsetDP::inclusion_probabilities() const {
    const int n = size();
    std::vector<std::vector<double>> prefix(static_cast<std::size_t>(n) + 1);
    prefix[0] = empty_row(m_);
    for (int i = 0; i < n; ++i) {
        prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)];
        extend_row(prefix[static_cast<std::size_t>(i) + 1], logw_[static_cast<std::size_t>(i)]);
    }
    std::vector<std::vector<double>> suffix(static_cast<std::size_t>(n) + 1);
    suffix[static_cast<std::size_t>(n)] = empty_row(m_);
    for (int i = n - 1; i >= 0; --i) {
        suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i) + 1];
        extend_row(suffix[static_cast<std::size_t>(i)], logw_[static_cast<std::size_t>(i)]);
    }
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    if (m_ == 0) return out;
    for (int i = 0; i < n; ++i) {
        double acc = kNegInf;
        const auto& pre = prefix[static_cast<std::size_t>(i)];
        const auto& suf = suffix[static_cast<std::size_t>(i) + 1];
        for (int k = 0; k <= m_ - 1; ++k) acc = log_add(acc, pre[static_cast<std::size_t>(k)] + suf[static_cast<std::size_t>(m_ - 1 - k)]);
        out[static_cast<std::size_t>(i)] = std::exp(logw_[static_cast<std::size_t>(i)] + acc - log_em_);
    }
    return out;
}

double log_elementary_symmetric(std::span<const double> log_weights, int m) {
    return lse_m(log_weights, m);
}

double lse_m(std::span<const double> xs, int m) {
    const auto n = static_cast<int>(xs.size());
    if (m < 0 || m > n) throw ParameterError("lse_m: need 0 <= m <= len");
    std::vector<double> row = empty_row(m);
    for (int i = 0; i < n; ++i) {
        const int top = std::min(i + 1, m);
        for (int j = top; j >= 1; --j)
            row[static_cast<std::size_t>(j)] = log_add(row[static_cast<std::size_t>(j)], row[static_cast<std::size_t>(j - 1)] + xs[static_cast<std::size_t>(i)]);
    }
    return row[static_cast<std::size_t>(m)];
}

}  // namespace ogp
