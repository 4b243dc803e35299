#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "ogp/errors.hpp"
#include "ogp/theory.hpp"

using namespace ogp;

namespace {

double pois(int k, double mu) { return std::exp(k * std::log(mu) - mu - std::lgamma(k + 1.0)); }

// Oracles below sum raw pmfs until the remaining mass is under 1e-10 and share no code with the library.
int cutoff(double mu) {
    double cdf = 0;
    int k = 0;
    for (;; ++k) {
        cdf += pois(k, mu);
        if (k > mu && 1 - cdf < 1e-11) return k + 5;
    }
}

double g_oracle(double a, double b) {
    const int K = cutoff(a), Zk = cutoff(b);
    double s = 0;
    for (int z = 1; z <= Zk; ++z)
        for (int x1 = 0; x1 <= K; ++x1)
            for (int x2 = 0; x2 <= K; ++x2)
                s += pois(z, b) * pois(x1, a) * pois(x2, a) * z / double(std::max(x1, x2) + z);
    return s / (1 - std::exp(-b));
}

double h_oracle(double a, double b) {
    const int K = cutoff(a), Zk = cutoff(b);
    double s = 0;
    for (int z = 1; z <= Zk; ++z)
        for (int x1 = 0; x1 <= K; ++x1)
            for (int x2 = 0; x2 <= K; ++x2)
                s += pois(z, b) * pois(x1, a) * pois(x2, a) * z / double((x1 + z) * (x2 + z));
    return s / (1 - std::exp(-b));
}

// E[1/X | X >= kmin] for X ~ Poisson(mu).
double inv_mean(double mu, int kmin) {
    double num = 0, den = 0;
    for (int k = kmin; k <= cutoff(mu); ++k) {
        num += pois(k, mu) / k;
        den += pois(k, mu);
    }
    return num / den;
}

double cgf_oracle(double lambda, double t) {
    const double mu = -std::log(lambda);
    double num = 0, den = 0;
    for (int k = 2; k <= cutoff(mu); ++k) {
        num += pois(k, mu) * std::log(1 - 1.0 / k + std::exp(t) / k);
        den += pois(k, mu);
    }
    return num / den;
}

}  // namespace

TEST_CASE("g_func boundary branches and series oracle") {
    CHECK(g_func(0.0, 0.7) == 1.0);
    CHECK(g_func(1.3, 0.0) == 0.0);
    const double L2 = std::log(2.0);
    CHECK(g_func(L2, L2) == doctest::Approx(g_oracle(L2, L2)).epsilon(1e-9));
    CHECK(g_func(L2, L2) == doctest::Approx(0.6146657988).epsilon(1e-8));
    CHECK(g_func(2.0, 0.3) == doctest::Approx(g_oracle(2.0, 0.3)).epsilon(1e-9));
    CHECK(g_func(0.1, 5.0) == doctest::Approx(g_oracle(0.1, 5.0)).epsilon(1e-9));
    CHECK_THROWS_AS(g_func(-1, 1), ParameterError);
}

TEST_CASE("h_func series oracle") {
    // E[1/Z | Z > 0] at b = 1 is sum_k e^-1/(k k!) / (1 - e^-1)
    double series = 0;
    double fact = 1;
    for (int k = 1; k < 30; ++k) {
        fact *= k;
        series += std::exp(-1.0) / (k * fact);
    }
    series /= 1 - std::exp(-1.0);
    CHECK(h_func(0.0, 1.0) == doctest::Approx(series).epsilon(1e-10));
    CHECK(h_func(0.0, 1.0) == doctest::Approx(0.7669883541).epsilon(1e-8));
    const double a = std::log(1 / 0.3);
    CHECK(h_func(a, a) == doctest::Approx(h_oracle(a, a)).epsilon(1e-9));
    CHECK(h_func(0.5, 2.0) == doctest::Approx(h_oracle(0.5, 2.0)).epsilon(1e-9));
    // the theorem multiplies by 1 - e^-b, which vanishes as b -> 0
    CHECK(h_func(1.0, 1e-9) * (1 - std::exp(-1e-9)) < 1e-8);
    CHECK(h_func(1.0, 0.0) == 0.0);
}

TEST_CASE("tree overlap limit branches") {
    LimitParams p;
    p.lambda = 0.5;
    p.gamma = 1;
    CHECK(limit_tree_overlap(p) == 1.0);
    p.gamma = 0;
    p.rho = 0.8;
    CHECK(limit_tree_overlap(p) == doctest::Approx(0.1));
    p.rho = 1;
    for (double lam : {0.0, 1.0}) {
        p.lambda = lam;
        p.gamma = 0.7;
        CHECK(limit_tree_overlap(p) == doctest::Approx(0.7));
    }
    // middle branch against the g oracle
    p.lambda = 0.3;
    p.gamma = 0.6;
    const double L = std::log(1 / 0.3), lg = std::pow(0.3, 1.4);
    const double want = (1 - 0.6 + lg) / 0.7 * lg + g_oracle(0.4 * L, 0.6 * L) * (1 - std::pow(0.3, 0.6));
    CHECK(limit_tree_overlap(p) == doctest::Approx(want).epsilon(1e-9));
    // unified form agrees with the branch form on consistent parameters
    for (double g : {0.0, 0.2, 0.6, 1.0}) {
        p.gamma = g;
        p.rho = g == 0.0 ? 0.4 : 1.0;
        CHECK(limit_tree_overlap_unified(p) == doctest::Approx(limit_tree_overlap(p)).epsilon(1e-9));
    }
    // open interval formula tends to the gamma = 1 value
    p.rho = 1;
    p.gamma = 1 - 1e-7;
    CHECK(limit_tree_overlap(p) == doctest::Approx(1.0).epsilon(1e-5));
    // inconsistent asymptotic parameters
    p.rho = 0.9;
    p.gamma = 0.5;
    CHECK_THROWS_AS(limit_tree_overlap(p), ParameterError);
    p.finite_n = true;
    CHECK_NOTHROW(limit_tree_overlap(p));
}

TEST_CASE("independent and DAG overlap limits") {
    LimitParams p;
    p.lambda = 0.3;
    p.gamma = 1;
    const double L = std::log(1 / 0.3);
    CHECK(limit_indep_overlap(p) == doctest::Approx(inv_mean(L, 1) * 0.7).epsilon(1e-9));
    p.gamma = 0;
    p.rho = 0.5;
    CHECK(limit_indep_overlap(p) == 0.0);

    LimitParams d;
    d.lambda = 1;
    d.gamma = 0.3;
    d.rho = 1;
    d.finite_n = true;
    CHECK(limit_dag_overlap(d) == doctest::Approx(0.3));
    d = LimitParams{};
    d.lambda = 0.5;
    d.gamma = 1;
    d.eta = 0;
    d.xi = 1;
    CHECK(limit_dag_overlap(d) == doctest::Approx(1.0));
    d.gamma = 0;
    d.rho = 0;
    d.xi = 0.5;
    CHECK(limit_dag_overlap(d) == 0.0);
    d.rho = 1;
    d.gamma = 1;
    d.eta = kInf;
    CHECK(limit_dag_overlap(d) == 1.0);
}

TEST_CASE("intersection fraction and unique path") {
    CHECK(limit_intersection_fraction(std::exp(-1.0), 1.0) == doctest::Approx(1 - std::exp(-1.0)));
    CHECK(limit_intersection_fraction(0.0, 0.5) == 1.0);
    CHECK(unique_path_probability(std::exp(-1.0)) == doctest::Approx(std::exp(-1.0)));
    CHECK(unique_path_probability(1.0) == 0.0);
}

TEST_CASE("free energy density") {
    CHECK(free_energy_density(0.3, 0.0, 2.0) == doctest::Approx(-0.15));
    CHECK(free_energy_density(0.3, 0.0, 0.5) == doctest::Approx(-1.3));
    CHECK(free_energy_density(0.0, 1.0, 0.7) == doctest::Approx(-1 / 0.7));
    CHECK(free_energy_density(1.0, 0.0, 0.7) == doctest::Approx(-1 / 0.7));
    for (double D : {0.0, 0.2, 0.6}) {
        for (double lam : {0.0, 0.3, 0.9}) {
            const double b = 1 - D;
            CHECK(free_energy_density(lam, D, b) == doctest::Approx(free_energy_density(lam, D, b - 1e-12)).epsilon(1e-9));
            // continuous on a grid; -1/beta style formulas make it nondecreasing in beta
            double prev = free_energy_density(lam, D, 0.35);
            for (double beta = 0.351; beta < 4; beta += 1e-3) {
                const double f = free_energy_density(lam, D, beta);
                CHECK(std::abs(f - prev) < 1e-2);
                CHECK(f >= prev - 1e-12);
                prev = f;
            }
        }
    }
    CHECK_THROWS_AS(free_energy_density(0.3, 1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(free_energy_density(0.5, 0.5, 0.0), ParameterError);
}

TEST_CASE("critical beta and regimes") {
    CHECK(critical_beta(0.25, kInf) == doctest::Approx(0.75));
    CHECK(critical_beta(0.3, 1.0) == doctest::Approx(-0.3));
    CHECK(critical_beta(0.0, 2.0) == doctest::Approx(0.5));
    CHECK(classify_regime(0.0, 1.0, kInf) == Regime::A);
    CHECK(classify_regime(0.4, 0.0, kInf) == Regime::B);
    CHECK(classify_regime(1.0, 0.0, kInf) == Regime::C_i);
    CHECK(classify_regime(1.0, 0.0, 3.0) == Regime::C_ii);
    CHECK(classify_regime(1.0, 0.0, 0.5) == Regime::C_iii);
    CHECK_THROWS_AS(classify_regime(1.0, 0.5, 1.0), ParameterError);
}

TEST_CASE("Franz-Parisi potential") {
    const double lam = 0.3, beta = 2;
    const auto [r1, r2] = fpp_gibbs_reference(lam, 0.0, beta);
    CHECK(r1 == doctest::Approx(0.7));
    CHECK(r2 == doctest::Approx(-0.3 * std::log(0.3)));
    CHECK(fpp_value(lam, 0, beta, r1, r2, 1.0) == doctest::Approx(0.0));
    for (double r = r2; r <= r1; r += 0.01) CHECK(fpp_value(lam, 0, beta, r1, r2, r) == doctest::Approx(-lam / beta));
    // below r2 the corollary line
    const double r = 0.1;
    CHECK(fpp_value(lam, 0, beta, r1, r2, r) ==
          doctest::Approx((-lam + (beta - 1) * r2) / beta - (beta - 1) / beta * r));
    // high temperature affine
    for (double rr = 0; rr <= 1; rr += 0.05)
        CHECK(fpp_two_temperature(lam, 0, 0.5, 0.5, rr) == doctest::Approx(1 - lam - 2 + 2 * rr));
    // quasiconvex for beta > 1: nonincreasing then nondecreasing
    std::vector<double> grid;
    for (int i = 0; i <= 1000; ++i) grid.push_back(i / 1000.0);
    const auto c = fpp_curve(lam, 0, 1.7, r1, r2, grid);
    std::size_t i = 1;
    while (i < c.size() && c[i] <= c[i - 1] + 1e-12) ++i;
    for (; i < c.size(); ++i) CHECK(c[i] >= c[i - 1] - 1e-12);
    // continuity of each formula in r, and the genuine two-temperature gap at beta_c
    for (double D : {0.0, 0.3}) {
        for (double b : {0.4, 1.5}) {
            const auto [a1, a2] = fpp_gibbs_reference(lam, D, b);
            double prev = fpp_value(lam, D, b, a1, a2, 0);
            for (int k = 1; k <= 1000; ++k) {
                const double v = fpp_value(lam, D, b, a1, a2, k / 1000.0);
                CHECK(std::abs(v - prev) < 1e-2);
                prev = v;
            }
        }
    }
    const double bc = 1.0;
    const double above = fpp_two_temperature(lam, 0, bc, bc + 1e-9, 0.5);
    const double below = fpp_two_temperature(lam, 0, bc, bc - 1e-9, 0.5);
    CHECK(std::abs(above - below) > 0.1);
    CHECK_THROWS_AS(fpp_value(lam, 0, 2, r1, r2, 1.2), ParameterError);
    CHECK_THROWS_AS(fpp_value(lam, 0, 2, 0.2, 0.5, 0.3), ParameterError);
}

TEST_CASE("rate function") {
    const double lam = 0.3;
    const double rstar = rate_zero(lam);
    CHECK(rstar == doctest::Approx(inv_mean(std::log(1 / lam), 2)).epsilon(1e-12));
    CHECK(rate_function(lam, rstar).value == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(rate_function(lam, rstar).value < 1e-8);
    // grid oracle over t in [-20, 20]
    const double rb = 0.9;
    double best = -INFINITY;
    for (int i = -200000; i <= 200000; ++i) {
        const double t = i * 1e-4;
        best = std::max(best, t * rb - cgf_oracle(lam, t));
    }
    CHECK(rate_function(lam, rb).value == doctest::Approx(best).epsilon(1e-4));
    CHECK(rate_cgf(lam, 0.7) == doctest::Approx(cgf_oracle(lam, 0.7)).epsilon(1e-10));
    // convexity on random triples
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> U(0.02, 0.98);
    for (int k = 0; k < 50; ++k) {
        const double x = U(gen), y = U(gen);
        const double mid = rate_function(lam, 0.5 * (x + y)).value;
        CHECK(mid <= 0.5 * (rate_function(lam, x).value + rate_function(lam, y).value) + 1e-9);
    }
    const auto end = rate_function(lam, 1.0);
    CHECK_FALSE(end.finite);
    CHECK(std::isinf(end.value));
    CHECK_THROWS_AS(rate_function(lam, 1.5), ParameterError);
}

TEST_CASE("replica overlap") {
    CHECK(replica_overlap(0.0, 2.0) == 0.0);
    CHECK(replica_overlap(0.3, 0.5) == 0.0);
    double series = 0, fact = 1;
    for (int k = 1; k < 30; ++k) {
        fact *= k;
        series += std::exp(-1.0) / (k * fact);
    }
    CHECK(replica_overlap(std::exp(-1.0), 2.0) == doctest::Approx(series).epsilon(1e-10));
    CHECK(replica_overlap(std::exp(-1.0), 2.0) == doctest::Approx(0.4848291070).epsilon(1e-8));
}

TEST_CASE("critical kernel fraction") {
    CHECK(critical_kernel_fraction(1.0, 60.0, 0.3) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(critical_kernel_fraction(1.0, -1e7, 0.3) < 1e-6);
    CHECK(critical_kernel_fraction(1.0, -60.0, 0.3) < critical_kernel_fraction(1.0, -6.0, 0.3));
    // dense grid oracle at alpha = 1, b = 0, lambda = 1/e with A ~ ZTP(1)
    const double lam = std::exp(-1.0);
    std::vector<double> ts, cg;
    for (int i = -30000; i <= 30000; ++i) {
        const double t = i * 1e-3;
        double s = 0, den = 0;
        for (int a = 1; a <= 25; ++a) {
            const double p = pois(a, 1.0);
            s += p * std::log((a * std::exp(t) + 1) / (a + 1.0));
            den += p;
        }
        ts.push_back(t);
        cg.push_back(s / den);
    }
    double best_y = 0, best_v = -INFINITY;
    for (int j = 1; j <= 5000; ++j) {
        const double y = j / 5000.0;
        double I = -INFINITY;
        for (std::size_t i = 0; i < ts.size(); ++i) I = std::max(I, ts[i] * y - cg[i]);
        const double x = (1 - lam) * y;
        const double v = x * 0.0 + (1 - x) * std::log(x) - I;
        if (v > best_v) {
            best_v = v;
            best_y = y;
        }
    }
    CHECK(critical_kernel_fraction(1.0, 0.0, lam) == doctest::Approx(best_y).epsilon(1e-3));
    CHECK(std::abs(critical_kernel_fraction(1.0, 0.0, lam) - best_y) < 1e-3);
}

TEST_CASE("internal energy and ground state entropy") {
    CHECK(internal_energy_density(0.3, 0.7) == doctest::Approx(0.0));
    CHECK(internal_energy_density(0.3, 0.0) == doctest::Approx(0.7));
    CHECK(internal_energy_density(1.0, 0.4) == 0.0);
    CHECK(psi0(1.0) == 0.0);
    double s0 = 0, s1 = 0;
    for (int k = 2; k < 40; ++k) s0 += pois(k, 1.0) * std::log(double(k));
    s1 = s0 / (1 - std::exp(-1.0));
    CHECK(psi0(std::exp(-1.0)) == doctest::Approx(s0).epsilon(1e-12));
    CHECK(psi1(std::exp(-1.0)) == doctest::Approx(s1).epsilon(1e-12));
    const double n = 1e5, lam = std::exp(-1.0);
    CHECK(ground_state_log_count(n, 2.0, lam) ==
          doctest::Approx(n * s0 + lam * n * std::log(2 * (1 - lam) * std::log(n))).epsilon(1e-10));
}

TEST_CASE("curve CSV") {
    Curve c{{"r", "value"}, {}};
    c.add({0.5, -0.25});
    std::ostringstream os;
    c.write_csv(os);
    CHECK(os.str() == "r,value\n0.5,-0.25\n");
    CHECK_THROWS_AS(c.add({1.0}), ParameterError);
}

TEST_CASE("limit params from finite-n proxies") {
    const auto pr = proxies(1e5, 1e-4, 0.95);
    const auto lp = LimitParams::from_proxies(pr);
    CHECK(lp.finite_n);
    CHECK(lp.gamma == doctest::Approx(std::pow(0.95, 5)));
    CHECK_NOTHROW(limit_tree_overlap_unified(lp));
    const double v = limit_tree_overlap_unified(lp);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
}
