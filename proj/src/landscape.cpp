#include "ogp/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ogp/errors.hpp"
#include "ogp/numerics.hpp"

namespace ogp {

double f_multilinear(const BoxPoint4& p) {
    const auto [x, y, z, w] = p;
    return x + y - z - w + x * y + z * w + 0.75 * (x + y) * (z + w);
}

BoxPoint4 grad_f(const BoxPoint4& p) {
    const auto [x, y, z, w] = p;
    return {1 + y + 0.75 * (z + w), 1 + x + 0.75 * (z + w), -1 + w + 0.75 * (x + y), -1 + z + 0.75 * (x + y)};
}

namespace {

bool in_box(std::span<const double> p) {
    return std::all_of(p.begin(), p.end(), [](double v) { return v >= -1 && v <= 1; });
}

// Zero the velocity components pointing out of the box at active faces.
BoxPoint4 project_velocity(const BoxPoint4& p, BoxPoint4 v) {
    for (std::size_t i = 0; i < 4; ++i)
        if ((p[i] >= 1 && v[i] > 0) || (p[i] <= -1 && v[i] < 0)) v[i] = 0;
    return v;
}

}  // namespace

FlowTrajectory projected_gradient_flow(const BoxPoint4& start, double dt, double t_max, int record_every) {
    if (!in_box(start)) throw ParameterError("projected_gradient_flow: start outside [-1,1]^4");
    if (!(dt > 0) || !(t_max >= 0) || record_every < 1) throw ParameterError("projected_gradient_flow: bad step settings");
    FlowTrajectory tr;
    BoxPoint4 p = start;
    double t = 0;
    tr.times.push_back(t);
    tr.points.push_back(p);
    const auto steps = static_cast<std::int64_t>(std::ceil(t_max / dt));
    const auto on_boundary = [](const BoxPoint4& q) {
        return std::any_of(q.begin(), q.end(), [](double v) { return std::abs(v) >= 1; });
    };
    if (on_boundary(p)) {
        tr.first_contact_time = 0;
        tr.first_contact_point = p;
    }
    for (std::int64_t k = 1; k <= steps; ++k) {
        const BoxPoint4 v = project_velocity(p, grad_f(p));
        if (std::all_of(v.begin(), v.end(), [](double c) { return c == 0; })) {
            if (tr.stationary_from < 0) tr.stationary_from = t;
        } else {
            tr.stationary_from = -1;
        }
        // fraction of the step taken before the first coordinate meets the boundary
        double frac = 1;
        for (std::size_t i = 0; i < 4; ++i) {
            if (v[i] > 0 && p[i] + dt * v[i] > 1) frac = std::min(frac, (1 - p[i]) / (dt * v[i]));
            if (v[i] < 0 && p[i] + dt * v[i] < -1) frac = std::min(frac, (-1 - p[i]) / (dt * v[i]));
        }
        BoxPoint4 next;
        for (std::size_t i = 0; i < 4; ++i) next[i] = std::clamp(p[i] + dt * v[i], -1.0, 1.0);
        if (tr.first_contact_time < 0 && on_boundary(next)) {
            tr.first_contact_time = t + frac * dt;
            tr.first_contact_point = next;
        }
        p = next;
        t = static_cast<double>(k) * dt;
        if (k % record_every == 0 || k == steps) {
            tr.times.push_back(t);
            tr.points.push_back(p);
        }
    }
    const BoxPoint4 v = project_velocity(p, grad_f(p));
    if (std::any_of(v.begin(), v.end(), [](double c) { return c != 0; })) tr.stationary_from = -1;
    else if (tr.stationary_from < 0) tr.stationary_from = t;
    return tr;
}

VertexTable vertex_table(const std::function<double(std::span<const double>)>& f, int d) {
    if (d < 1 || d > 20) throw TooLargeError("vertex_table: dimension must lie in [1, 20]");
    VertexTable out(std::size_t{1} << d);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::size_t mask = 0; mask < out.size(); ++mask) {
        for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = (mask >> i & 1) ? 1.0 : -1.0;
        out[mask] = f(x);
    }
    return out;
}

namespace {

int table_dim(const VertexTable& values, std::size_t p_size) {
    const int d = static_cast<int>(p_size);
    if (d < 1 || d > 20) throw TooLargeError("Lovasz extension: dimension must lie in [1, 20]");
    if (values.size() != (std::size_t{1} << d)) throw ParameterError("Lovasz extension: table size is not 2^d");
    return d;
}

// Coordinates in decreasing order of value (ties by index), the chain order of the extension.
std::vector<std::size_t> chain_order(std::span<const double> p) {
    std::vector<std::size_t> ord(p.size());
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
    return ord;
}

}  // namespace

double lovasz_extension(const VertexTable& values, std::span<const double> p) {
    const int d = table_dim(values, p.size());
    if (!in_box(p)) throw ParameterError("lovasz_extension: point outside the box");
    const auto ord = chain_order(p);
    // t in (p_(k+1), p_(k)] switches on exactly the first k coordinates of the chain
    std::size_t mask = 0;
    double acc = 0, upper = 1;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(d); ++k) {
        const double lo = k < static_cast<std::size_t>(d) ? p[ord[k]] : -1.0;
        acc += values[mask] * (upper - lo);
        upper = lo;
        if (k < static_cast<std::size_t>(d)) mask |= std::size_t{1} << ord[k];
    }
    return acc / 2;
}

std::vector<double> lovasz_supergradient(const VertexTable& values, std::span<const double> p) {
    const int d = table_dim(values, p.size());
    const auto ord = chain_order(p);
    std::vector<double> g(static_cast<std::size_t>(d));
    std::size_t mask = 0;
    for (std::size_t k = 0; k < static_cast<std::size_t>(d); ++k) {
        const std::size_t next = mask | (std::size_t{1} << ord[k]);
        g[ord[k]] = (values[next] - values[mask]) / 2;
        mask = next;
    }
    return g;
}

AscentResult lovasz_subgrad_ascent(const VertexTable& values, std::span<const double> p0, double step, int iters) {
    table_dim(values, p0.size());
    if (!in_box(p0)) throw ParameterError("lovasz_subgrad_ascent: start outside the box");
    if (!(step > 0) || iters < 0) throw ParameterError("lovasz_subgrad_ascent: bad step settings");
    std::vector<double> x(p0.begin(), p0.end());
    AscentResult r;
    r.point = x;
    r.value = lovasz_extension(values, x);
    const auto offer = [&](const std::vector<double>& p) {
        const double v = lovasz_extension(values, p);
        if (v > r.value) {
            r.value = v;
            r.point = p;
        }
    };
    for (int k = 1; k <= iters; ++k) {
        const auto g = lovasz_supergradient(values, x);
        const double eta = step / std::sqrt(double(k));
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i] + eta * g[i], -1.0, 1.0);
        offer(x);
        r.iterations = k;
    }
    return r;
}

double f_m_highdim(std::span<const double> x) {
    if (x.empty() || x.size() % 4 != 0) throw ParameterError("f_m_highdim: length must be a positive multiple of 4");
    const std::size_t m = x.size() / 4;
    BoxPoint4 means{};
    for (std::size_t b = 0; b < 4; ++b)
        means[b] = std::accumulate(x.begin() + static_cast<std::ptrdiff_t>(b * m), x.begin() + static_cast<std::ptrdiff_t>((b + 1) * m), 0.0) / double(m);
    return f_multilinear(means);
}

double f_infinity(double r) {
    if (r < -1 || r > 1) throw DomainError("f_infinity: r must lie in [-1,1]");
    return -(4 * r * r - 2 * std::abs(r) + 3);
}

double constrained_max_bruteforce(double r, int grid, int rounds) {
    if (r < -1 || r > 1) throw DomainError("constrained_max_bruteforce: r must lie in [-1,1]");
    if (grid < 3 || rounds < 1) throw ParameterError("constrained_max_bruteforce: bad grid");
    std::array<double, 3> lo{-1, -1, -1}, hi{1, 1, 1};
    double best = -std::numeric_limits<double>::infinity();
    std::array<double, 3> arg{0, 0, 0};
    for (int round = 0; round < rounds; ++round) {
        std::array<double, 3> h;
        for (std::size_t i = 0; i < 3; ++i) h[i] = (hi[i] - lo[i]) / (grid - 1);
        for (int a = 0; a < grid; ++a)
            for (int b = 0; b < grid; ++b)
                for (int c = 0; c < grid; ++c) {
                    const double x = lo[0] + a * h[0], y = lo[1] + b * h[1], z = lo[2] + c * h[2];
                    const double w = 4 * r - x - y - z;
                    if (w < -1 - 1e-12 || w > 1 + 1e-12) continue;
                    const double v = f_multilinear({x, y, z, std::clamp(w, -1.0, 1.0)});
                    if (v > best) {
                        best = v;
                        arg = {x, y, z};
                    }
                }
        // zoom in around the best point, keeping a few cells of margin
        for (std::size_t i = 0; i < 3; ++i) {
            const double half = 2 * h[i];
            lo[i] = std::max(-1.0, arg[i] - half);
            hi[i] = std::min(1.0, arg[i] + half);
        }
    }
    return best;
}

std::vector<IsingFppPoint> ising_fpp(int m, double beta, std::span<const double> r_grid) {
    if (m < 1 || m > 2000) throw ParameterError("ising_fpp: need 1 <= m <= 2000");
    if (!(beta > 0)) throw ParameterError("ising_fpp: beta must be > 0");
    const double bm = beta * m;
    std::vector<double> logc(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) logc[static_cast<std::size_t>(k)] = log_binomial(m, k);
    const auto mean = [m](int k) { return double(2 * k - m) / m; };
    // pair sums: P_xy(S) = log sum_{k1+k2=S} C(m,k1) C(m,k2) exp(beta m xbar ybar), same for (z,w)
    std::vector<double> pair(static_cast<std::size_t>(2 * m) + 1, -std::numeric_limits<double>::infinity());
    for (int k1 = 0; k1 <= m; ++k1)
        for (int k2 = 0; k2 <= m; ++k2) {
            const double v = logc[static_cast<std::size_t>(k1)] + logc[static_cast<std::size_t>(k2)] + bm * mean(k1) * mean(k2);
            auto& slot = pair[static_cast<std::size_t>(k1 + k2)];
            slot = log_add(slot, v);
        }
    std::vector<IsingFppPoint> out;
    for (double r : r_grid) {
        if (r < -1 || r > 1) throw DomainError("ising_fpp: r must lie in [-1,1]");
        // overlap with the all-ones state is (2K - 4m) / (4m) for K plus-spins in total
        const int K = static_cast<int>(std::lround((r + 1) * 2 * m));
        double z = -std::numeric_limits<double>::infinity();
        for (int S = std::max(0, K - 2 * m); S <= std::min(2 * m, K); ++S) {
            const int T = K - S;
            const double u = double(2 * S - 2 * m) / m;  // xbar + ybar
            const double v = double(2 * T - 2 * m) / m;  // zbar + wbar
            z = log_add(z, pair[static_cast<std::size_t>(S)] + pair[static_cast<std::size_t>(T)] + bm * (u - v + 0.75 * u * v));
        }
        out.push_back({r, double(2 * K - 4 * m) / (4.0 * m), -z / bm});
    }
    return out;
}

std::vector<std::size_t> local_minima(std::span<const double> values) {
    // a minimum is a maximal run of equal values lying strictly below both neighbors of the run
    std::vector<std::size_t> out;
    const std::size_t n = values.size();
    if (n < 2) return out;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[j + 1] == values[i]) ++j;
        const bool left = i == 0 || values[i] < values[i - 1];
        const bool right = j + 1 == n || values[i] < values[j + 1];
        if (left && right && !(i == 0 && j + 1 == n)) out.push_back(i);
        i = j + 1;
    }
    return out;
}

}  // namespace ogp
