#include "ogp/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ogp/errors.hpp"

namespace ogp {

namespace {

void check_compatible(const ProductTreeMeasure& a, const ProductTreeMeasure& b) {
    if (a.n() != b.n()) throw ParameterError("overlap: vertex counts differ");
    if (a.root != b.root) throw ParameterError("overlap: roots differ");
}

// Visits every common support element: f(k1, k2) with positions in each support.
template <class F>
void for_common(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2, Vertex v, F&& f) {
    auto s1 = m1.support_of(v), s2 = m2.support_of(v);
    std::size_t i = 0, j = 0;
    while (i < s1.size() && j < s2.size()) {
        if (s1[i] < s2[j])
            ++i;
        else if (s2[j] < s1[i])
            ++j;
        else
            f(i++, j++);
    }
}

std::size_t draw_index(const ProductTreeMeasure& m, Vertex v, Rng& rng) {
    const auto sz = m.support_of(v).size();
    if (m.uniform()) return static_cast<std::size_t>(rng.below(sz));
    double u = rng.uniform();
    for (std::size_t k = 0; k + 1 < sz; ++k) {
        double p = m.prob(v, k);
        if (u < p) return k;
        u -= p;
    }
    return sz - 1;
}

}  // namespace

double vertex_agreement_optimal(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2, Vertex v) {
    if (!m1.covers(v) || !m2.covers(v) || v == m1.root) return 0.0;
    if (m1.uniform() && m2.uniform()) {
        std::size_t common = 0;
        for_common(m1, m2, v, [&](std::size_t, std::size_t) { ++common; });
        const auto mx = std::max(m1.support_of(v).size(), m2.support_of(v).size());
        return static_cast<double>(common) / static_cast<double>(mx);
    }
    double s = 0.0;
    for_common(m1, m2, v, [&](std::size_t i, std::size_t j) { s += std::min(m1.prob(v, i), m2.prob(v, j)); });
    return s;
}

double vertex_agreement_independent(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2, Vertex v) {
    if (!m1.covers(v) || !m2.covers(v) || v == m1.root) return 0.0;
    double s = 0.0;
    for_common(m1, m2, v, [&](std::size_t i, std::size_t j) { s += m1.prob(v, i) * m2.prob(v, j); });
    return s;
}

double tree_overlap_optimal(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2) {
    check_compatible(m1, m2);
    double s = 0.0;
    for (Vertex v = 0; v < m1.n(); ++v) s += vertex_agreement_optimal(m1, m2, v);
    return s / m1.n();
}

double tree_overlap_independent(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2) {
    check_compatible(m1, m2);
    if (m1.n() < 2) throw DomainError("tree_overlap_independent: need n >= 2");
    double s = 0.0;
    for (Vertex v = 0; v < m1.n(); ++v) s += vertex_agreement_independent(m1, m2, v);
    return s / (m1.n() - 1);
}

double dag_overlap(const ProductTreeMeasure& d1, const ProductTreeMeasure& d2) {
    check_compatible(d1, d2);
    std::int64_t common = 0;
    for (Vertex v = 0; v < d1.n(); ++v)
        if (d1.covers(v) && d2.covers(v)) for_common(d1, d2, v, [&](std::size_t, std::size_t) { ++common; });
    const auto e1 = static_cast<double>(d1.support.size()), e2 = static_cast<double>(d2.support.size());
    if (e1 == 0 || e2 == 0) throw DomainError("dag_overlap: empty DAG");
    return static_cast<double>(common) / std::sqrt(e1 * e2);
}

std::pair<Vertex, Vertex> coupled_parent(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2, Vertex v, Rng& rng) {
    const bool c1 = m1.covers(v) && v != m1.root, c2 = m2.covers(v) && v != m2.root;
    if (!c1 || !c2) {
        Vertex a = c1 ? m1.support_of(v)[draw_index(m1, v, rng)] : (v == m1.root ? v : -1);
        Vertex b = c2 ? m2.support_of(v)[draw_index(m2, v, rng)] : (v == m2.root ? v : -1);
        return {a, b};
    }
    auto s1 = m1.support_of(v), s2 = m2.support_of(v);
    // overlap mass min(p1, p2) on common elements
    std::vector<std::pair<Vertex, double>> common;
    double agree = 0.0;
    for_common(m1, m2, v, [&](std::size_t i, std::size_t j) {
        double w = std::min(m1.prob(v, i), m2.prob(v, j));
        common.emplace_back(s1[i], w);
        agree += w;
    });
    double u = rng.uniform();
    if (u < agree) {
        for (const auto& [x, w] : common) {
            if (u < w) return {x, x};
            u -= w;
        }
        return {common.back().first, common.back().first};
    }
    // residual laws (p - min(p1,p2))_+ are disjoint, drawn independently
    auto residual = [&](const ProductTreeMeasure& a, const ProductTreeMeasure& b, std::span<const Vertex> sa) {
        std::vector<double> w(sa.size());
        double tot = 0.0;
        auto sb = b.support_of(v);
        for (std::size_t i = 0; i < sa.size(); ++i) {
            double pb = 0.0;
            auto it = std::lower_bound(sb.begin(), sb.end(), sa[i]);
            if (it != sb.end() && *it == sa[i]) pb = b.prob(v, static_cast<std::size_t>(it - sb.begin()));
            w[i] = std::max(0.0, a.prob(v, i) - pb);
            tot += w[i];
        }
        double r = rng.uniform() * tot;
        for (std::size_t i = 0; i < sa.size(); ++i) {
            if (r < w[i]) return sa[i];
            r -= w[i];
        }
        for (std::size_t i = sa.size(); i-- > 0;)
            if (w[i] > 0) return sa[i];
        return sa.back();
    };
    Vertex a = residual(m1, m2, s1);
    Vertex b = residual(m2, m1, s2);
    return {a, b};
}

CoupledSample coupled_spt_sample(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2, Rng& rng) {
    check_compatible(m1, m2);
    const int n = m1.n();
    std::vector<Vertex> p1(static_cast<std::size_t>(n), -1), p2(static_cast<std::size_t>(n), -1);
    CoupledSample out;
    for (Vertex v = 0; v < n; ++v) {
        auto [a, b] = coupled_parent(m1, m2, v, rng);
        p1[static_cast<std::size_t>(v)] = a;
        p2[static_cast<std::size_t>(v)] = b;
        if (v != m1.root && a >= 0 && a == b) ++out.common_edges;
    }
    out.t1 = make_parent_map(m1.root, std::move(p1));
    out.t2 = make_parent_map(m2.root, std::move(p2));
    return out;
}

CoupledSample coupled_spt_sample(const ProductTreeMeasure& m1, const ProductTreeMeasure& m2, std::uint64_t seed) {
    Rng rng(seed, 0x43504c);
    return coupled_spt_sample(m1, m2, rng);
}

std::vector<double> count_shortest_paths(const LayerDecomposition& L) {
    std::vector<double> c(static_cast<std::size_t>(L.n()), 0.0);
    c[static_cast<std::size_t>(L.root)] = 1.0;
    for (std::size_t d = 1; d < L.layers.size(); ++d)
        for (Vertex v : L.layers[d]) {
            double s = 0.0;
            for (Vertex p : L.parents(v)) s += c[static_cast<std::size_t>(p)];
            c[static_cast<std::size_t>(v)] = s;
        }
    return c;
}

double path_overlap(const std::vector<Vertex>& p1, const std::vector<Vertex>& p2) {
    auto edges = [](const std::vector<Vertex>& p) {
        std::vector<Edge> e;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) e.emplace_back(std::min(p[i], p[i + 1]), std::max(p[i], p[i + 1]));
        std::sort(e.begin(), e.end());
        return e;
    };
    auto e1 = edges(p1), e2 = edges(p2);
    if (e1.empty() && e2.empty()) return 1.0;
    if (e1.empty() || e2.empty()) return 0.0;
    std::vector<Edge> common;
    std::set_intersection(e1.begin(), e1.end(), e2.begin(), e2.end(), std::back_inserter(common));
    return static_cast<double>(common.size()) / std::sqrt(static_cast<double>(e1.size()) * static_cast<double>(e2.size()));
}

PathOverlapTrial path_overlap_trial(const LayerDecomposition& l1, const LayerDecomposition& l2, Vertex t, Rng& rng) {
    if (l1.root != l2.root || l1.n() != l2.n()) throw ParameterError("path_overlap_trial: incompatible decompositions");
    if (t < 0 || t >= l1.n() || !l1.reachable(t) || !l2.reachable(t))
        throw DomainError("path_overlap_trial: target unreachable in one of the graphs");
    const auto m1 = shortest_path_dag(l1);
    const auto m2 = shortest_path_dag(l2);
    std::unordered_map<Vertex, std::pair<Vertex, Vertex>> memo;
    auto draw = [&](Vertex v) {
        auto it = memo.find(v);
        if (it != memo.end()) return it->second;
        auto pr = coupled_parent(m1, m2, v, rng);
        memo.emplace(v, pr);
        return pr;
    };
    PathOverlapTrial out;
    auto walk = [&](int which) {
        std::vector<Vertex> path{t};
        Vertex x = t;
        while (x != l1.root) {
            auto pr = draw(x);
            x = which == 0 ? pr.first : pr.second;
            path.push_back(x);
        }
        std::reverse(path.begin(), path.end());
        return path;
    };
    out.path1 = walk(0);
    out.path2 = walk(1);
    out.len1 = static_cast<int>(out.path1.size()) - 1;
    out.len2 = static_cast<int>(out.path2.size()) - 1;
    out.overlap = path_overlap(out.path1, out.path2);
    auto c1 = count_shortest_paths(l1), c2 = count_shortest_paths(l2);
    out.unique1 = c1[static_cast<std::size_t>(t)] == 1.0;
    out.unique2 = c2[static_cast<std::size_t>(t)] == 1.0;
    return out;
}

PathOverlapTrial path_overlap_trial(const Graph& g1, const Graph& g2, Vertex s, Vertex t, Rng& rng) {
    if (g1.n() != g2.n()) throw ParameterError("path_overlap_trial: vertex counts differ");
    return path_overlap_trial(bfs_layers(g1, s), bfs_layers(g2, s), t, rng);
}

double path_overlap_experiment(const CorrelatedPair& pair, Vertex s, Vertex t, std::uint64_t seed) {
    Rng rng(seed, 0x50415448);
    return path_overlap_trial(pair.g1, pair.g2, s, t, rng).overlap;
}

OverlapReport overlap_report(const LayerDecomposition& l1, const LayerDecomposition& l2, int d_star) {
    const auto m1 = shortest_path_dag(l1);
    const auto m2 = shortest_path_dag(l2);
    OverlapReport r;
    r.r_tilde = tree_overlap_optimal(m1, m2);
    r.q_indep = tree_overlap_independent(m1, m2);
    r.s_dag = dag_overlap(m1, m2);
    auto I = layer_intersection(l1, l2);
    r.same_dist_frac = I.same_distance_fraction;
    r.n_d_star_I_frac = static_cast<double>(I.at(d_star)) / l1.n();
    return r;
}

}  // namespace ogp
