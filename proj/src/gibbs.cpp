#include "ogp/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "ogp/errors.hpp"
#include "ogp/theory.hpp"

namespace ogp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline std::size_t ix(Vertex v) { return static_cast<std::size_t>(v); }

double loglog(double n) {
    if (!(n > std::exp(1.0))) throw ParameterError("log log n needs n > e");
    return std::log(std::log(n));
}

// Multi-source BFS from `sources` restricted to vertices with dist >= d_star.
std::vector<int> residual_bfs(const Graph& g, const LayerDecomposition& L, int d_star, std::span<const Vertex> sources) {
    std::vector<int> d(ix(g.n()), kInfDist);
    std::deque<Vertex> queue;
    for (Vertex a : sources) {
        d[ix(a)] = 0;
        queue.push_back(a);
    }
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        for (Vertex u : g.neighbors(v)) {
            if (!L.reachable(u) || L.dist[ix(u)] < d_star || d[ix(u)] != kInfDist) continue;
            d[ix(u)] = d[ix(v)] + 1;
            queue.push_back(u);
        }
    }
    return d;
}

void check_kernel_subset(std::span<const Vertex> A, const LayerDecomposition& L, int d_star) {
    for (Vertex a : A)
        if (a < 0 || a >= L.n() || L.dist[ix(a)] != d_star)
            throw StructuralError("kernel vertex " + std::to_string(a) + " is not in the critical layer");
}

}  // namespace

GibbsConfig GibbsConfig::make(double beta, double n, Vertex root) {
    if (!(beta >= 0)) throw ParameterError("beta must be >= 0");
    GibbsConfig c;
    c.beta = beta;
    c.beta_bar = beta * loglog(n);
    c.root = root;
    return c;
}

// ---------------------------------------------------------------------------
// Stats and kernels

std::vector<int> residual_components(const Graph& g, const LayerDecomposition& L, int d_star, int* count) {
    std::vector<int> comp(ix(g.n()), -1);
    int c = 0;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < g.n(); ++s) {
        if (!L.reachable(s) || L.dist[ix(s)] < d_star || comp[ix(s)] >= 0) continue;
        comp[ix(s)] = c;
        stack.push_back(s);
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            for (Vertex u : g.neighbors(v)) {
                if (L.dist[ix(u)] < d_star || comp[ix(u)] >= 0) continue;  // unreachable u never neighbors a reachable v
                comp[ix(u)] = c;
                stack.push_back(u);
            }
        }
        ++c;
    }
    if (count) *count = c;
    return comp;
}

GraphStats graph_stats(const Graph& g, const LayerDecomposition& L, double q, int d_star) {
    if (d_star < 1) throw ParameterError("d_star must be >= 1");
    GraphStats s;
    s.n = L.reachable_count();
    s.n_total = g.n();
    s.loglogn = g.n() > std::exp(1.0) ? std::log(std::log(double(g.n()))) : 0.0;
    s.q = q;
    s.d_star = d_star;
    s.N_dstar = L.size_at(d_star);
    s.N_dstar1 = L.size_at(d_star + 1);
    if (d_star < static_cast<int>(L.layers.size())) {
        s.critical_layer = L.layers[static_cast<std::size_t>(d_star)];
        std::sort(s.critical_layer.begin(), s.critical_layer.end());
    }
    for (Vertex v : s.critical_layer) s.parent_counts.push_back(static_cast<int>(L.parents(v).size()));
    int m0 = 0;
    residual_components(g, L, d_star, &m0);
    s.m0 = m0;
    if (s.loglogn > 0)
        s.m_ell = std::max<std::int64_t>(s.m0, static_cast<std::int64_t>(std::ceil(s.n_total / (3 * s.loglogn * s.loglogn))));
    try {
        s.proxies = proxies(g.n(), q);
    } catch (const std::exception&) {
        // tiny graphs: the proxies are undefined and stay default
    }
    return s;
}

GraphStats graph_stats(const Graph& g, const LayerDecomposition& L, double q) {
    const auto p = proxies(g.n(), q);
    auto s = graph_stats(g, L, q, p.d_star);
    s.proxies = p;
    return s;
}

Kernel kernel_of(const ParentMap& t, const LayerDecomposition& L, int d_star) {
    Kernel k;
    if (d_star >= static_cast<int>(L.layers.size())) return k;
    for (Vertex v : L.layers[static_cast<std::size_t>(d_star)]) {
        const Vertex p = t.parent[ix(v)];
        if (p >= 0 && L.dist[ix(p)] == d_star - 1) k.push_back(v);
    }
    std::sort(k.begin(), k.end());
    return k;
}

bool kernel_valid(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star) {
    for (Vertex a : A)
        if (a < 0 || a >= L.n() || L.dist[ix(a)] != d_star) return false;
    int count = 0;
    const auto comp = residual_components(g, L, d_star, &count);
    std::vector<char> hit(static_cast<std::size_t>(count), 0);
    for (Vertex a : A) hit[static_cast<std::size_t>(comp[ix(a)])] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char h) { return h != 0; });
}

std::vector<Vertex> forced_kernel_vertices(const Graph& g, const LayerDecomposition& L, int d_star) {
    int count = 0;
    const auto comp = residual_components(g, L, d_star, &count);
    std::vector<int> crit(static_cast<std::size_t>(count), 0);
    std::vector<Vertex> last(static_cast<std::size_t>(count), -1);
    if (d_star < static_cast<int>(L.layers.size()))
        for (Vertex v : L.layers[static_cast<std::size_t>(d_star)]) {
            ++crit[static_cast<std::size_t>(comp[ix(v)])];
            last[static_cast<std::size_t>(comp[ix(v)])] = v;
        }
    std::vector<Vertex> forced;
    for (int c = 0; c < count; ++c)
        if (crit[static_cast<std::size_t>(c)] == 1) forced.push_back(last[static_cast<std::size_t>(c)]);
    std::sort(forced.begin(), forced.end());
    return forced;
}

std::vector<int> kernel_distances(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star) {
    check_kernel_subset(A, L, d_star);
    const auto res = residual_bfs(g, L, d_star, A);
    std::vector<int> d(ix(g.n()), kInfDist);
    for (Vertex v = 0; v < g.n(); ++v) {
        if (!L.reachable(v)) continue;
        if (L.dist[ix(v)] < d_star) {
            d[ix(v)] = L.dist[ix(v)];
        } else {
            if (res[ix(v)] == kInfDist)
                throw StructuralError("invalid kernel: vertex " + std::to_string(v) + " cannot reach it in the residual graph");
            d[ix(v)] = d_star + res[ix(v)];
        }
    }
    return d;
}

ParentMap sample_cond_ground(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star,
                             Rng& rng) {
    check_kernel_subset(A, L, d_star);
    const auto res = residual_bfs(g, L, d_star, A);
    std::vector<Vertex> parent(ix(g.n()), -1);
    std::vector<Vertex> options;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (!L.reachable(v) || v == L.root) continue;
        if (L.dist[ix(v)] < d_star || res[ix(v)] == 0) {
            const auto par = L.parents(v);
            parent[ix(v)] = par[rng.below(par.size())];
            continue;
        }
        if (res[ix(v)] == kInfDist)
            throw StructuralError("invalid kernel: vertex " + std::to_string(v) + " cannot reach it in the residual graph");
        // A path toward A that leaves the residual graph would re-enter Gamma_{<= d*-1}, which
        // the tree cannot do without passing through a kernel vertex, so residual distance is the right one.
        options.clear();
        for (Vertex u : g.neighbors(v))
            if (L.dist[ix(u)] >= d_star && res[ix(u)] == res[ix(v)] - 1) options.push_back(u);
        parent[ix(v)] = options[rng.below(options.size())];
    }
    return make_parent_map(L.root, std::move(parent));
}

ParentMap sample_cond_ground(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star,
                             std::uint64_t seed) {
    Rng rng(seed, 0x636f6e64);
    return sample_cond_ground(A, L, g, d_star, rng);
}

double cond_ground_log_count(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star) {
    check_kernel_subset(A, L, d_star);
    const auto res = residual_bfs(g, L, d_star, A);
    double lc = 0;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (!L.reachable(v) || v == L.root) continue;
        if (L.dist[ix(v)] < d_star || res[ix(v)] == 0) {
            lc += std::log(double(L.parents(v).size()));
            continue;
        }
        if (res[ix(v)] == kInfDist) throw StructuralError("invalid kernel");
        int k = 0;
        for (Vertex u : g.neighbors(v)) k += L.dist[ix(u)] >= d_star && res[ix(u)] == res[ix(v)] - 1;
        lc += std::log(double(k));
    }
    return lc;
}

Kernel tau_sample(std::int64_t m, std::span<const Vertex> layer, std::span<const int> weights, Rng& rng,
                  const std::function<bool(const Kernel&)>& valid, TauDiagnostics* diag, std::span<const Vertex> forced) {
    const auto N = static_cast<std::int64_t>(layer.size());
    if (weights.size() != layer.size()) throw ParameterError("tau_sample: weights and layer differ in size");
    if (m < std::max<std::int64_t>(1, static_cast<std::int64_t>(forced.size())) || m > N)
        throw ParameterError("tau_sample: m = " + std::to_string(m) + " outside [max(1, forced), " + std::to_string(N) + "]");
    for (int w : weights)
        if (w <= 0) throw ParameterError("tau_sample: weights must be positive");

    std::vector<char> is_forced(layer.size(), 0);
    for (Vertex f : forced) {
        const auto it = std::find(layer.begin(), layer.end(), f);
        if (it == layer.end()) throw ParameterError("tau_sample: forced vertex not in the layer");
        is_forced[static_cast<std::size_t>(it - layer.begin())] = 1;
    }
    std::vector<std::size_t> free_idx;
    std::vector<double> logw;
    for (std::size_t i = 0; i < layer.size(); ++i)
        if (!is_forced[i]) {
            free_idx.push_back(i);
            logw.push_back(std::log(double(weights[i])));
        }
    const int k = static_cast<int>(m - static_cast<std::int64_t>(forced.size()));
    std::optional<WeightedSubsetDP> dp;
    if (k > 0) dp.emplace(logw, k);

    TauDiagnostics local;
    TauDiagnostics& d = diag ? *diag : local;
    for (;;) {
        Kernel A(forced.begin(), forced.end());
        if (dp)
            for (int j : dp->sample(rng)) A.push_back(layer[free_idx[static_cast<std::size_t>(j)]]);
        std::sort(A.begin(), A.end());
        ++d.attempts;
        if (!valid || valid(A)) return A;
        ++d.rejected;
        if (d.attempts >= 100 && d.rejection_rate() > 0.01)
            throw StructuralError("tau_sample: invalid-kernel rejection rate " + std::to_string(d.rejection_rate()) +
                                  " over " + std::to_string(d.attempts) + " attempts at m = " + std::to_string(m));
    }
}

Kernel tau_sample(std::int64_t m, std::span<const Vertex> layer, std::span<const int> weights, std::uint64_t seed) {
    Rng rng(seed, 0x746175);
    return tau_sample(m, layer, weights, rng);
}

// ---------------------------------------------------------------------------
// Psi and Phi~

PsiEstimate psi_estimate(std::int64_t m, std::int64_t N, double lambda, int samples, std::uint64_t seed) {
    if (N < 1 || m < 1 || m > N) throw ParameterError("psi_estimate: need 1 <= m <= N");
    if (!(lambda > 0 && lambda < 1)) throw ParameterError("psi_estimate: lambda must lie in (0,1)");
    if (samples < 2) throw ParameterError("psi_estimate: need at least 2 samples");
    if (double(N) * double(m) > kPsiDpBudget)
        throw TooLargeError("psi_estimate: N*m = " + std::to_string(double(N) * double(m)) +
                            " exceeds the DP budget; use psi_bounds");
    const double mu = std::log(1 / lambda);
    Rng rng(seed, 0x707369);
    std::vector<double> xs(static_cast<std::size_t>(N));
    double sum = 0, sum2 = 0;
    for (int s = 0; s < samples; ++s) {
        for (auto& x : xs) x = std::log(double(ztp_sample(mu, rng)));
        const double v = lse_m(xs, static_cast<int>(m));
        sum += v;
        sum2 += v * v;
    }
    PsiEstimate r;
    r.samples = samples;
    r.mean = sum / samples;
    const double var = std::max(0.0, (sum2 - samples * r.mean * r.mean) / (samples - 1));
    r.se = std::sqrt(var / samples);
    return r;
}

std::vector<double> psi_curve(std::int64_t N, double lambda, int samples, std::uint64_t seed) {
    if (N < 1) throw ParameterError("psi_curve: N must be >= 1");
    if (!(lambda > 0 && lambda < 1)) throw ParameterError("psi_curve: lambda must lie in (0,1)");
    if (samples < 1) throw ParameterError("psi_curve: need at least one sample");
    if (double(N) * double(N) > kPsiDpBudget)
        throw TooLargeError("psi_curve: N^2 exceeds the DP budget; use psi_bounds");
    const double mu = std::log(1 / lambda);
    Rng rng(seed, 0x707369);
    std::vector<double> xs(static_cast<std::size_t>(N));
    std::vector<double> acc(static_cast<std::size_t>(N) + 1, 0.0);
    for (int s = 0; s < samples; ++s) {
        for (auto& x : xs) x = std::log(double(ztp_sample(mu, rng)));
        // rolling row of log e_j, j = 0..N
        std::vector<double> row(static_cast<std::size_t>(N) + 1, kNegInf);
        row[0] = 0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = i + 1; j >= 1; --j) row[j] = log_add(row[j], row[j - 1] + xs[i]);
        for (std::size_t j = 0; j < row.size(); ++j) acc[j] += row[j] / samples;
    }
    return acc;
}

PsiBounds psi_bounds(std::int64_t m, std::int64_t N, double lambda) {
    if (N < 1 || m < 0 || m > N) throw ParameterError("psi_bounds: need 0 <= m <= N");
    const double p1 = psi1(lambda);
    const double x = double(m) / double(N);
    const double H = (x <= 0 || x >= 1) ? 0.0 : -(x * std::log(x) + (1 - x) * std::log1p(-x));
    return {double(m) * p1, double(N) * H + double(m) * p1};
}

double phi_tilde(const GraphStats& s, double beta, std::int64_t m, double psi_m) {
    if (m <= 0) return kNegInf;
    const double bb = beta * s.loglogn;
    const double n = double(s.n);
    return psi_m + (n - double(m)) * std::log(double(m) * s.q) + bb * double(m) - bb * (s.d_star + 1) * n;
}

PhiOpt phi_tilde_opt(const GraphStats& s, double beta, PsiPolicy policy, int psi_samples, std::uint64_t seed) {
    if (s.N_dstar < 1) throw DomainError("phi_tilde_opt: empty critical layer");
    if (!(beta >= 0)) throw ParameterError("phi_tilde_opt: beta must be >= 0");
    const double lambda = s.proxies.lambda;
    PhiOpt r;
    const std::int64_t N = s.N_dstar;
    if (policy == PsiPolicy::Auto)
        policy = double(N) * double(N) <= kPsiDpBudget ? PsiPolicy::Exact : PsiPolicy::LowerBound;
    r.policy_used = policy;
    std::vector<double> psi;
    if (policy == PsiPolicy::Exact) {
        psi = psi_curve(N, lambda, psi_samples, seed);
    } else {
        const double p1 = psi1(lambda);
        psi.resize(static_cast<std::size_t>(N) + 1);
        for (std::int64_t m = 0; m <= N; ++m) psi[static_cast<std::size_t>(m)] = double(m) * p1;
    }
    r.curve.assign(static_cast<std::size_t>(N) + 1, kNegInf);
    const std::int64_t lo = std::max<std::int64_t>(1, s.m0);
    r.value = kNegInf;
    for (std::int64_t m = lo; m <= N; ++m) {
        const double v = phi_tilde(s, beta, m, psi[static_cast<std::size_t>(m)]);
        r.curve[static_cast<std::size_t>(m)] = v;
        if (v > r.value) {
            r.value = v;
            r.m_star_numeric = m;
        }
    }
    const double bc = critical_beta(s.proxies.delta, s.proxies.kappa);
    r.low_temperature = beta > bc;
    r.near_critical = std::abs(beta - bc) < 0.05;
    if (r.low_temperature) {
        r.m_star_formula = N;
    } else {
        const double denom = (1 - s.proxies.delta - beta) * s.proxies.kappa;
        r.m_star_formula = std::min<std::int64_t>(N, static_cast<std::int64_t>(std::floor(double(N) / denom)));
    }
    return r;
}

LogZFormula log_z_formula(const GraphStats& s, double beta) {
    const auto& p = s.proxies;
    if (!(p.lambda > 0) || p.loglogn <= 0) throw DomainError("log_z_formula: proxies undefined for this graph");
    LogZFormula r;
    const double n = p.n;
    const double bb = beta * p.loglogn;
    const double bc = critical_beta(p.delta, p.kappa);
    r.low_temperature = beta > bc;
    r.near_critical = std::abs(beta - bc) < 0.05;
    r.asymptotic_only = p.loglogn < 1.5;
    const double logn = std::log(n);
    if (r.low_temperature) {
        r.value = n * psi0(p.lambda) + p.lambda * n * std::log(p.alpha * (1 - p.lambda) * logn) -
                  bb * (p.d_star + p.lambda) * n;
    } else {
        r.value = n * std::log(p.alpha * logn / ((1 - p.delta - beta) * p.loglogn)) - n - bb * (p.d_star + 1) * n;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Energies and sampling

std::int64_t ground_energy(const LayerDecomposition& L) {
    std::int64_t e = 0;
    for (std::size_t d = 0; d < L.sizes.size(); ++d) e += static_cast<std::int64_t>(d) * L.sizes[d];
    return e;
}

std::int64_t energy(const ParentMap& t) { return tree_energy(t); }

std::size_t gumbel_max_sample(std::span<const double> log_weights, Rng& rng) {
    if (log_weights.empty()) throw ParameterError("gumbel_max_sample: empty weights");
    std::size_t best = 0;
    double best_v = kNegInf;
    for (std::size_t i = 0; i < log_weights.size(); ++i) {
        double u = rng.uniform();
        while (u <= 0) u = rng.uniform();
        const double v = log_weights[i] - std::log(-std::log(u));
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    return best;
}

std::size_t gumbel_max_sample(std::span<const double> log_weights, std::uint64_t seed) {
    Rng rng(seed, 0x67756d);
    return gumbel_max_sample(log_weights, rng);
}

GlauberChain::GlauberChain(const Graph& g, Vertex root, double beta_bar, std::uint64_t seed)
    : g_(&g), root_(root), beta_bar_(beta_bar), rng_(seed, 0x676c61) {
    const auto L = bfs_layers(g, root);
    std::vector<Vertex> parent(ix(g.n()), -1);
    for (Vertex v = 0; v < g.n(); ++v)
        if (L.reachable(v) && v != root) parent[ix(v)] = L.parents(v)[0];
    init_from(make_parent_map(root, std::move(parent)));
}

GlauberChain::GlauberChain(const Graph& g, const ParentMap& init, double beta_bar, std::uint64_t seed)
    : g_(&g), root_(init.root), beta_bar_(beta_bar), rng_(seed, 0x676c61) {
    if (!is_spanning_tree_of(init, g)) throw StructuralError("GlauberChain: initial state is not a spanning tree");
    init_from(init);
}

void GlauberChain::init_from(const ParentMap& t) {
    if (!(beta_bar_ >= 0)) throw ParameterError("GlauberChain: beta_bar must be >= 0");
    parent_ = t.parent;
    depth_ = t.dist_T;
    children_ = children_of(t);
    movable_.clear();
    for (Vertex v = 0; v < t.n(); ++v)
        if (t.contains(v) && v != root_) movable_.push_back(v);
    energy_ = tree_energy(t);
}

void GlauberChain::collect_subtree(Vertex v, std::vector<Vertex>& out) const {
    out.clear();
    out.push_back(v);
    for (std::size_t i = 0; i < out.size(); ++i)
        for (Vertex c : children_[ix(out[i])]) out.push_back(c);
}

GlauberChain::Move GlauberChain::proposal(Vertex v) const {
    Move mv;
    mv.v = v;
    mv.from = parent_[ix(v)];
    std::vector<Vertex> sub;
    collect_subtree(v, sub);
    std::vector<char> in_sub(parent_.size(), 0);
    for (Vertex x : sub) in_sub[ix(x)] = 1;
    std::vector<double> logw;
    for (Vertex u : g_->neighbors(v)) {
        if (in_sub[ix(u)]) continue;
        mv.candidates.push_back(u);
        const double delta = double(depth_[ix(u)] + 1 - depth_[ix(v)]);
        logw.push_back(-beta_bar_ * double(sub.size()) * delta);
    }
    const double z = log_sum_exp(logw);
    for (double w : logw) mv.probs.push_back(std::exp(w - z));
    return mv;
}

GlauberChain::Move GlauberChain::step() {
    if (movable_.empty()) return {};
    const Vertex v = movable_[rng_.below(movable_.size())];
    Move mv = proposal(v);
    double u = rng_.uniform();
    std::size_t k = 0;
    for (; k + 1 < mv.probs.size(); ++k) {
        u -= mv.probs[k];
        if (u < 0) break;
    }
    mv.to = mv.candidates[k];
    if (mv.to != mv.from) {
        auto& sib = children_[ix(mv.from)];
        sib.erase(std::find(sib.begin(), sib.end(), v));
        auto& nc = children_[ix(mv.to)];
        nc.insert(std::lower_bound(nc.begin(), nc.end(), v), v);
        parent_[ix(v)] = mv.to;
        const int delta = depth_[ix(mv.to)] + 1 - depth_[ix(v)];
        std::vector<Vertex> sub;
        collect_subtree(v, sub);
        for (Vertex x : sub) depth_[ix(x)] += delta;
        energy_ += static_cast<std::int64_t>(delta) * static_cast<std::int64_t>(sub.size());
    }
    return mv;
}

void GlauberChain::run(std::int64_t steps) {
    for (std::int64_t i = 0; i < steps; ++i) step();
}

ParentMap GlauberChain::tree() const { return make_parent_map(root_, parent_); }

std::int64_t GlauberChain::recompute_energy() const { return tree_energy(tree()); }

std::vector<ParentMap> glauber_run(const Graph& g, Vertex root, double beta_bar, std::int64_t steps,
                                   std::uint64_t seed, std::int64_t burn_in, std::int64_t thin) {
    if (thin < 1 || burn_in < 0 || steps < 0) throw ParameterError("glauber_run: bad step counts");
    GlauberChain chain(g, root, beta_bar, seed);
    chain.run(burn_in);
    std::vector<ParentMap> out;
    for (std::int64_t i = 1; i <= steps; ++i) {
        chain.step();
        if (i % thin == 0) out.push_back(chain.tree());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Witness

double witness_statistic(const ParentMap& t, const LayerDecomposition& L, int d_star) {
    const std::int64_t Nd = L.size_at(d_star);
    if (Nd == 0) throw DomainError("witness_statistic: empty critical layer");
    const double ratio = double(L.size_at(d_star + 1)) / double(Nd);
    std::vector<int> nch(ix(t.n()), 0);
    for (Vertex v = 0; v < t.n(); ++v)
        if (t.contains(v) && v != t.root) ++nch[ix(t.parent[ix(v)])];
    double f = 0;
    for (Vertex v : L.layers[static_cast<std::size_t>(d_star)]) f += std::abs(nch[ix(v)] - ratio);
    return f;
}

double witness_uniform_bound(std::int64_t n, std::int64_t N_dstar) {
    return std::sqrt(2.0 * double(N_dstar) * double(n - N_dstar));
}

double witness_kernel_bound(std::span<const Vertex> A, const LayerDecomposition& L, const Graph& g, int d_star) {
    check_kernel_subset(A, L, d_star);
    std::vector<char> inA(ix(g.n()), 0);
    for (Vertex a : A) inA[ix(a)] = 1;
    std::int64_t NA = 0;
    if (d_star + 1 < static_cast<int>(L.layers.size()))
        for (Vertex v : L.layers[static_cast<std::size_t>(d_star + 1)]) {
            const auto par = L.parents(v);
            NA += std::any_of(par.begin(), par.end(), [&](Vertex u) { return inA[ix(u)] != 0; });
        }
    const double ratio = double(L.size_at(d_star + 1)) / double(L.size_at(d_star));
    return std::abs(double(NA) - double(A.size()) * ratio);
}

ParentMap ht_sample(const GraphStats& s, const LayerDecomposition& L, const Graph& g, double beta, Rng& rng,
                    Kernel* kernel_out, TauDiagnostics* diag) {
    const double bc = critical_beta(s.proxies.delta, s.proxies.kappa);
    std::int64_t m = s.N_dstar;
    if (beta <= bc) {
        const double denom = (1 - s.proxies.delta - beta) * s.proxies.kappa;
        m = static_cast<std::int64_t>(std::floor(double(s.N_dstar) / denom));
    }
    const auto forced = forced_kernel_vertices(g, L, s.d_star);
    m = std::clamp<std::int64_t>(m, std::max<std::int64_t>({1, s.m0, static_cast<std::int64_t>(forced.size())}), s.N_dstar);
    const auto valid = [&](const Kernel& A) { return kernel_valid(A, L, g, s.d_star); };
    const Kernel A = tau_sample(m, s.critical_layer, s.parent_counts, rng, valid, diag, forced);
    if (kernel_out) *kernel_out = A;
    return sample_cond_ground(A, L, g, s.d_star, rng);
}

// ---------------------------------------------------------------------------
// Path Gibbs

std::vector<std::vector<double>> log_walk_counts(const Graph& g, Vertex s, int max_len) {
    if (max_len < 0) throw ParameterError("log_walk_counts: max_len must be >= 0");
    std::vector<std::vector<double>> a(static_cast<std::size_t>(max_len) + 1,
                                       std::vector<double>(ix(g.n()), kNegInf));
    a[0][ix(s)] = 0;
    for (int l = 0; l < max_len; ++l) {
        const auto& cur = a[static_cast<std::size_t>(l)];
        auto& next = a[static_cast<std::size_t>(l) + 1];
        for (Vertex v = 0; v < g.n(); ++v) {
            double acc = kNegInf;
            for (Vertex u : g.neighbors(v)) acc = log_add(acc, cur[ix(u)]);
            next[ix(v)] = acc;
        }
    }
    return a;
}

namespace {

void check_path_args(const Graph& g, Vertex s, Vertex t, int max_len) {
    if (s < 0 || s >= g.n() || t < 0 || t >= g.n()) throw ParameterError("path Gibbs: endpoint out of range");
    if (max_len < 0 || max_len > g.n() - 1) throw ParameterError("path Gibbs: need 0 <= max_len <= n-1");
}

}  // namespace

PathGibbsSampler::PathGibbsSampler(const Graph& g, Vertex s, Vertex t, double beta, int max_len)
    : g_(&g), s_(s), t_(t) {
    check_path_args(g, s, t, max_len);
    a_ = log_walk_counts(g, s, max_len);
    const double c = beta * std::log(std::log(double(std::max(g.n(), 3))));
    for (int l = 0; l <= max_len; ++l) len_logw_.push_back(a_[static_cast<std::size_t>(l)][ix(t)] - c * l);
    log_z_ = log_sum_exp(len_logw_);
}

std::vector<Vertex> PathGibbsSampler::sample(Rng& rng) const {
    if (log_z_ == kNegInf) throw DomainError("path Gibbs: target unreachable within max_len");
    const auto len = gumbel_max_sample(len_logw_, rng);
    std::vector<Vertex> walk(len + 1);
    walk[len] = t_;
    std::vector<Vertex> cand;
    std::vector<double> lw;
    for (std::size_t k = len; k >= 1; --k) {
        cand.clear();
        lw.clear();
        for (Vertex u : g_->neighbors(walk[k])) {
            const double w = a_[k - 1][ix(u)];
            if (w == kNegInf) continue;
            cand.push_back(u);
            lw.push_back(w);
        }
        walk[k - 1] = cand[gumbel_max_sample(lw, rng)];
    }
    return walk;
}

double path_partition_function(const Graph& g, Vertex s, Vertex t, double beta, int max_len) {
    return PathGibbsSampler(g, s, t, beta, max_len).log_z();
}

std::vector<Vertex> path_gibbs_sample(const Graph& g, Vertex s, Vertex t, double beta, int max_len, std::uint64_t seed) {
    Rng rng(seed, 0x706174);
    return PathGibbsSampler(g, s, t, beta, max_len).sample(rng);
}

}  // namespace ogp
