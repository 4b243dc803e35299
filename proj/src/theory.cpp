#include "ogp/theory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "ogp/errors.hpp"
#include "ogp/numerics.hpp"

namespace ogp {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

void require_unit(double x, const char* what) {
    if (!in_unit(x)) throw ParameterError(std::string(what) + " must lie in [0,1]");
}

/// Poisson(mu) pmf conditioned on X >= kmin, truncated so that the dropped conditional mass is below tail.
std::vector<std::pair<std::int64_t, double>> conditional_weights(double mu, std::int64_t kmin, double tail) {
    double cond_mass = 0.0;
    for (std::int64_t k = 0; k < kmin; ++k) cond_mass += poisson_pmf(k, mu);
    cond_mass = 1.0 - cond_mass;
    if (kmin == 1) cond_mass = -std::expm1(-mu);
    if (!(cond_mass > 0.0)) throw DomainError("conditioning event has no mass");
    const auto kmax = std::max<std::int64_t>(poisson_tail_cutoff(mu, tail * cond_mass), kmin);
    std::vector<std::pair<std::int64_t, double>> w;
    double s = 0.0;
    for (std::int64_t k = kmin; k <= kmax; ++k) {
        double p = poisson_pmf(k, mu);
        w.emplace_back(k, p);
        s += p;
    }
    for (auto& [k, p] : w) p /= s;
    return w;
}

double log_one_over_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("lambda must lie in (0,1)");
    return -std::log(lambda);
}

/// log(k - 1 + e^t), stable in both tails for k >= 2.
double log_km1_plus_exp(std::int64_t k, double t) {
    const double c = static_cast<double>(k - 1);
    if (t > std::log(c)) return t + std::log1p(c * std::exp(-t));
    return std::log(c) + std::log1p(std::exp(t) / c);
}

}  // namespace

void LimitParams::validate() const {
    require_unit(lambda, "lambda");
    require_unit(gamma, "gamma");
    require_unit(rho, "rho");
    require_unit(delta, "delta");
    require_unit(xi, "xi");
    if (!(kappa >= 0.0)) throw ParameterError("kappa must be nonnegative");
    if (!(eta >= 0.0)) throw ParameterError("eta must be nonnegative");
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
    if (finite_n) return;
    if (rho < 1.0 && gamma != 0.0) throw ParameterError("rho < 1 requires gamma = 0 in the limit");
    if (delta == 1.0 && lambda != 0.0) throw ParameterError("delta = 1 requires lambda = 0");
    if (lambda == 1.0 && delta != 0.0) throw ParameterError("lambda = 1 requires delta = 0");
}

LimitParams LimitParams::from_proxies(const Proxies& p, double beta) {
    LimitParams lp;
    lp.lambda = p.lambda;
    lp.gamma = p.gamma;
    lp.rho = p.rho;
    lp.delta = std::clamp(p.delta, 0.0, 1.0);
    lp.kappa = p.kappa;
    lp.eta = p.eta;
    lp.xi = p.xi;
    lp.beta = beta;
    lp.finite_n = true;
    return lp;
}

double g_func(double a, double b, double precision) {
    if (!(a >= 0.0 && b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw ParameterError("g_func: a and b must be finite and nonnegative");
    if (b == 0.0) return 0.0;
    if (a == 0.0) return 1.0;
    const auto z = conditional_weights(b, 1, precision / 3.0);
    const auto px = poisson_pmf_table(a, precision / 6.0);
    // law of max(X1, X2) from the squared CDF
    std::vector<double> pm(px.size());
    double f_prev = 0.0, f = 0.0;
    for (std::size_t k = 0; k < px.size(); ++k) {
        f += px[k];
        pm[k] = f * f - f_prev * f_prev;
        f_prev = f;
    }
    double s = 0.0;
    for (const auto& [zk, pz] : z) {
        const double zz = static_cast<double>(zk);
        double inner = 0.0;
        for (std::size_t m = 0; m < pm.size(); ++m) inner += pm[m] * zz / (static_cast<double>(m) + zz);
        s += pz * inner;
    }
    return s;
}

double h_func(double a, double b, double precision) {
    if (!(a >= 0.0 && b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw ParameterError("h_func: a and b must be finite and nonnegative");
    if (b == 0.0) return 0.0;
    const auto z = conditional_weights(b, 1, precision / 3.0);
    if (a == 0.0) {
        double s = 0.0;
        for (const auto& [zk, pz] : z) s += pz / static_cast<double>(zk);
        return s;
    }
    const auto px = poisson_pmf_table(a, precision / 6.0);
    double s = 0.0;
    for (const auto& [zk, pz] : z) {
        const double zz = static_cast<double>(zk);
        double e = 0.0;  // E[1/(X+z)]
        for (std::size_t k = 0; k < px.size(); ++k) e += px[k] / (static_cast<double>(k) + zz);
        s += pz * zz * e * e;
    }
    return s;
}

double psi0(double lambda) {
    if (lambda == 1.0) return 0.0;
    const double mu = log_one_over_lambda(lambda);
    return poisson_conditional_mean(mu, 0, [](std::int64_t k) { return k > 1 ? std::log(double(k)) : 0.0; });
}

double psi1(double lambda) {
    const double mu = log_one_over_lambda(lambda);
    return poisson_conditional_mean(mu, 1, [](std::int64_t k) { return std::log(double(k)); });
}

double limit_intersection_fraction(double lambda, double gamma) {
    require_unit(lambda, "lambda");
    require_unit(gamma, "gamma");
    return 1.0 - 2.0 * lambda + std::pow(lambda, 2.0 - gamma);
}

namespace {

/// First term of the tree-overlap limit without the rho factor.
double tree_overlap_head(double lambda, double gamma) {
    const double lg = std::pow(lambda, 2.0 - gamma);
    return (1.0 - 2.0 * lambda + lg) / (1.0 - lambda) * lg;
}

double tree_overlap_tail(double lambda, double gamma) {
    const double L = -std::log(lambda);
    return g_func((1.0 - gamma) * L, gamma * L) * (1.0 - std::pow(lambda, gamma));
}

}  // namespace

double limit_tree_overlap(const LimitParams& p) {
    p.validate();
    if (p.lambda == 0.0 || p.lambda == 1.0) return p.gamma;
    if (p.gamma == 1.0) return 1.0;
    if (p.gamma == 0.0) return p.rho * (1.0 - p.lambda) * p.lambda * p.lambda;
    return tree_overlap_head(p.lambda, p.gamma) + tree_overlap_tail(p.lambda, p.gamma);
}

double limit_tree_overlap_unified(const LimitParams& p) {
    p.validate();
    if (p.lambda == 0.0 || p.lambda == 1.0) return p.gamma;
    return p.rho * tree_overlap_head(p.lambda, p.gamma) + tree_overlap_tail(p.lambda, p.gamma);
}

double limit_indep_overlap(const LimitParams& p) {
    p.validate();
    if (!(p.lambda > 0.0 && p.lambda < 1.0) || p.gamma == 0.0) return 0.0;
    const double L = -std::log(p.lambda);
    return h_func((1.0 - p.gamma) * L, p.gamma * L) * (1.0 - std::pow(p.lambda, p.gamma));
}

double limit_dag_overlap(const LimitParams& p) {
    p.validate();
    if (p.lambda == 1.0 || std::isinf(p.eta)) return p.gamma;
    return p.rho * ((1.0 - (2.0 - p.xi) * p.lambda) * p.xi + p.eta * p.gamma) / (1.0 - p.lambda + p.eta);
}

double unique_path_probability(double lambda) {
    require_unit(lambda, "lambda");
    if (lambda == 0.0) return 0.0;
    return -lambda * std::log(lambda);
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::A: return "A";
        case Regime::B: return "B";
        case Regime::C_i: return "C.i";
        case Regime::C_ii: return "C.ii";
        case Regime::C_iii: return "C.iii";
    }
    return "?";
}

Regime classify_regime(double lambda, double delta, double kappa) {
    require_unit(lambda, "lambda");
    require_unit(delta, "delta");
    if (!(kappa >= 0.0)) throw ParameterError("kappa must be nonnegative");
    if (delta == 1.0) {
        if (lambda != 0.0) throw ParameterError("delta = 1 requires lambda = 0");
        return Regime::A;
    }
    if (lambda == 1.0) {
        if (delta != 0.0) throw ParameterError("lambda = 1 requires delta = 0");
        if (std::isinf(kappa)) return Regime::C_i;
        return kappa > 1.0 ? Regime::C_ii : Regime::C_iii;
    }
    return Regime::B;
}

double free_energy_density(double lambda, double delta, double beta) {
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
    const Regime r = classify_regime(lambda, delta, kInf);
    if (r != Regime::B) return -1.0 / beta;
    if (beta >= 1.0 - delta) return -(lambda + delta) / beta;
    return (1.0 - (lambda + delta)) / (1.0 - delta) - 1.0 / beta;
}

double critical_beta(double delta, double kappa) {
    require_unit(delta, "delta");
    if (!(kappa >= 0.0)) throw ParameterError("kappa must be nonnegative");
    if (std::isinf(kappa)) return 1.0 - delta;
    if (kappa == 0.0) return -kInf;
    return 1.0 - delta - 1.0 / kappa;
}

double fpp_value(double lambda, double delta, double beta, double r1, double r2, double r) {
    require_unit(lambda, "lambda");
    require_unit(delta, "delta");
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
    if (!(0.0 <= r2 && r2 <= r1 && r1 <= 1.0)) throw ParameterError("fpp: need 0 <= r2 <= r1 <= 1");
    if (!in_unit(r)) throw ParameterError("fpp: r must lie in [0,1]");
    const double D = delta, B = beta;
    if (B >= 1.0 - D) {
        if (r >= r1 + lambda) return -r1 - lambda - D / B + (1.0 + D / B) * r;
        if (r >= r1) return -(1.0 - (1.0 - lambda - r1) * (1.0 - D)) / B + r / B;
        if (r >= r2) return -(1.0 - (1.0 - lambda) * (1.0 - D)) / B + D / B * r;
        return r2 - (1.0 - (1.0 - lambda - r2) * (1.0 - D)) / B - (1.0 - 1.0 / B) * r;
    }
    if (r >= r1) return 1.0 - r1 - lambda - 1.0 / B + r / B;
    return 1.0 - lambda - 1.0 / B + (1.0 / B - 1.0) * r;
}

std::vector<double> fpp_curve(double lambda, double delta, double beta, double r1, double r2,
                              std::span<const double> r_grid) {
    std::vector<double> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) out.push_back(fpp_value(lambda, delta, beta, r1, r2, r));
    return out;
}

std::pair<double, double> fpp_gibbs_reference(double lambda, double delta, double beta_tree) {
    require_unit(lambda, "lambda");
    require_unit(delta, "delta");
    if (beta_tree > 1.0 - delta) return {1.0 - lambda, unique_path_probability(lambda)};
    return {0.0, 0.0};
}

double fpp_two_temperature(double lambda, double delta, double beta, double beta_tree, double r) {
    const auto [r1, r2] = fpp_gibbs_reference(lambda, delta, beta_tree);
    return fpp_value(lambda, delta, beta, r1, r2, r);
}

double rate_cgf(double lambda, double t) {
    const auto w = conditional_weights(log_one_over_lambda(lambda), 2, 1e-14);
    double s = 0.0;
    for (const auto& [k, p] : w) s += p * (log_km1_plus_exp(k, t) - std::log(double(k)));
    return s;
}

double rate_zero(double lambda) {
    const auto w = conditional_weights(log_one_over_lambda(lambda), 2, 1e-14);
    double s = 0.0;
    for (const auto& [k, p] : w) s += p / static_cast<double>(k);
    return s;
}

RateValue rate_function(double lambda, double r_bar) {
    const double mu = log_one_over_lambda(lambda);
    if (!in_unit(r_bar)) throw ParameterError("rate_function: r_bar must lie in [0,1]");
    if (r_bar == 0.0 || r_bar == 1.0) return {kInf, false};
    const auto w = conditional_weights(mu, 2, 1e-14);
    auto cgf = [&w](double t) {
        double s = 0.0;
        for (const auto& [k, p] : w) s += p * (log_km1_plus_exp(k, t) - std::log(double(k)));
        return s;
    };
    auto dcgf = [&w](double t) {
        double s = 0.0;
        for (const auto& [k, p] : w) s += p / (1.0 + static_cast<double>(k - 1) * std::exp(-t));
        return s;
    };
    const auto res = legendre_sup(cgf, dcgf, r_bar);
    return {std::max(0.0, res.value), true};
}

double replica_overlap(double lambda, double beta) {
    require_unit(lambda, "lambda");
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
    if (lambda == 0.0 || lambda == 1.0 || beta < 1.0) return 0.0;
    const auto w = conditional_weights(-std::log(lambda), 1, 1e-14);
    double s = 0.0;
    for (const auto& [k, p] : w) s += p / static_cast<double>(k);
    return (1.0 - lambda) * s;
}

double kernel_rate(double lambda, double y) {
    const auto w = conditional_weights(log_one_over_lambda(lambda), 1, 1e-14);
    if (!in_unit(y)) throw ParameterError("kernel_rate: y must lie in [0,1]");
    // endpoints are the limits t -> -inf and t -> +inf
    if (y == 0.0) {
        double s = 0.0;
        for (const auto& [a, p] : w) s += p * std::log1p(double(a));
        return s;
    }
    if (y == 1.0) {
        double s = 0.0;
        for (const auto& [a, p] : w) s += p * std::log1p(1.0 / double(a));
        return s;
    }
    auto cgf = [&w](double t) {
        double s = 0.0;
        for (const auto& [a, p] : w) {
            const double A = static_cast<double>(a);
            const double v = t > 0 ? t + std::log(A) + std::log1p(std::exp(-t) / A) : std::log1p(A * std::exp(t));
            s += p * (v - std::log1p(A));
        }
        return s;
    };
    auto dcgf = [&w](double t) {
        double s = 0.0;
        for (const auto& [a, p] : w) s += p / (1.0 + std::exp(-t) / static_cast<double>(a));
        return s;
    };
    return std::max(0.0, legendre_sup(cgf, dcgf, y).value);
}

double kernel_objective(double alpha, double b, double lambda, double y) {
    if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
    if (!(y > 0.0 && y <= 1.0)) throw ParameterError("kernel_objective: y must lie in (0,1]");
    const double x = (1.0 - lambda) * y;
    const double g = (b - std::log(alpha)) * x + (1.0 - x) * std::log(x);
    return g - kernel_rate(lambda, y);
}

double critical_kernel_fraction(double alpha, double b, double lambda) {
    log_one_over_lambda(lambda);
    auto f = [&](double y) { return kernel_objective(alpha, b, lambda, y); };
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        }
    }
    const double y = 0.5 * (lo + hi);
    return f(1.0) >= f(y) ? 1.0 : y;
}

double internal_energy_density(double lambda, double r) {
    require_unit(lambda, "lambda");
    require_unit(r, "r");
    if (lambda == 1.0) return 0.0;
    return 1.0 - lambda - r;
}

double ground_state_log_count(double n, double alpha, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("ground_state_log_count: lambda must lie in (0,1)");
    if (!(n > 1.0 && alpha > 0.0)) throw ParameterError("ground_state_log_count: need n > 1 and alpha > 0");
    return n * psi0(lambda) + lambda * n * std::log(alpha * (1.0 - lambda) * std::log(n));
}

void Curve::add(std::vector<double> row) {
    if (row.size() != columns.size()) throw ParameterError("Curve::add: row width does not match the header");
    rows.push_back(std::move(row));
}

void Curve::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    const auto old = os.precision(12);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
    os.precision(old);
}

}  // namespace ogp
