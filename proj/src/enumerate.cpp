#include "ogp/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "ogp/errors.hpp"
#include "ogp/numerics.hpp"

namespace ogp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline std::size_t ix(Vertex v) { return static_cast<std::size_t>(v); }

// Sum of tree depths of a complete parent map restricted to the component.
std::int64_t depth_sum(const std::vector<Vertex>& parent, Vertex root) {
    const int n = static_cast<int>(parent.size());
    std::vector<int> depth(ix(n), -1);
    depth[ix(root)] = 0;
    std::int64_t s = 0;
    Vertex stack[64];
    for (Vertex v = 0; v < n; ++v) {
        if (parent[ix(v)] < 0) continue;
        int top = 0;
        Vertex x = v;
        while (depth[ix(x)] < 0) {
            stack[top++] = x;
            x = parent[ix(x)];
        }
        while (top > 0) {
            const Vertex y = stack[--top];
            depth[ix(y)] = depth[ix(parent[ix(y)])] + 1;
        }
        s += depth[ix(v)];
    }
    return s;
}

}  // namespace

void for_each_spanning_tree(const Graph& g, Vertex root, const std::function<void(const std::vector<Vertex>&)>& fn,
                            const ParentFilter& allow) {
    if (root < 0 || root >= g.n()) throw ParameterError("for_each_spanning_tree: root out of range");
    const auto L = bfs_layers(g, root);
    if (L.reachable_count() > kMaxEnumerate)
        throw TooLargeError("spanning-tree enumeration: component has " + std::to_string(L.reachable_count()) +
                            " vertices, limit is " + std::to_string(kMaxEnumerate));
    std::vector<Vertex> order;
    for (const auto& layer : L.layers)
        for (Vertex v : layer)
            if (v != root) order.push_back(v);
    std::vector<Vertex> parent(ix(g.n()), -1);
    parent[ix(root)] = root;
    // assigned[v]: v already has a parent pointer (root counts as assigned)
    std::vector<char> assigned(ix(g.n()), 0);
    assigned[ix(root)] = 1;
    const std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == order.size()) {
            fn(parent);
            return;
        }
        const Vertex v = order[k];
        for (Vertex u : g.neighbors(v)) {
            if (allow && !allow(v, u)) continue;
            // attaching v under u closes a cycle iff u's pointer chain returns to v
            Vertex x = u;
            bool cycle = false;
            while (x != root && assigned[ix(x)]) {
                if (x == v) {
                    cycle = true;
                    break;
                }
                x = parent[ix(x)];
            }
            if (cycle || x == v) continue;
            parent[ix(v)] = u;
            assigned[ix(v)] = 1;
            rec(k + 1);
            assigned[ix(v)] = 0;
            parent[ix(v)] = -1;
        }
    };
    rec(0);
}

std::int64_t count_spanning_trees(const Graph& g, Vertex root) {
    std::int64_t c = 0;
    for_each_spanning_tree(g, root, [&](const std::vector<Vertex>&) { ++c; });
    return c;
}

ExactGibbsLaw exact_gibbs_law(const Graph& g, Vertex root, double beta_bar) {
    if (!(beta_bar >= 0)) throw ParameterError("exact_gibbs_law: beta_bar must be >= 0");
    ExactGibbsLaw law;
    std::vector<double> logw;
    for_each_spanning_tree(g, root, [&](const std::vector<Vertex>& parent) {
        const std::int64_t e = depth_sum(parent, root);
        law.trees.push_back(make_parent_map(root, parent));
        law.energies.push_back(e);
        logw.push_back(-beta_bar * double(e));
    });
    law.log_z = log_sum_exp(logw);
    for (double w : logw) law.probs.push_back(std::exp(w - law.log_z));
    return law;
}

EnergySpectrum energy_spectrum(const Graph& g, Vertex root) {
    EnergySpectrum spectrum;
    for_each_spanning_tree(g, root, [&](const std::vector<Vertex>& parent) { ++spectrum[depth_sum(parent, root)]; });
    return spectrum;
}

double exact_z_bruteforce(const Graph& g, Vertex root, double beta_bar) {
    if (!(beta_bar >= 0)) throw ParameterError("exact_z_bruteforce: beta_bar must be >= 0");
    double z = kNegInf;
    for (auto [e, c] : energy_spectrum(g, root)) z = log_add(z, std::log(double(c)) - beta_bar * double(e));
    return z;
}

KernelSpectrum kernel_spectrum(const Graph& g, Vertex root, int d_star) {
    if (d_star < 1) throw ParameterError("kernel_spectrum: d_star must be >= 1");
    const auto L = bfs_layers(g, root);
    KernelSpectrum s;
    s.d_star = d_star;
    s.N_dstar = L.size_at(d_star);
    if (s.N_dstar > 20) throw TooLargeError("kernel_spectrum: critical layer too large for subset enumeration");
    s.by_size.resize(static_cast<std::size_t>(s.N_dstar) + 1);
    if (d_star < static_cast<int>(L.layers.size())) s.layer = L.layers[static_cast<std::size_t>(d_star)];
    std::sort(s.layer.begin(), s.layer.end());
    std::vector<char> inA(ix(g.n()), 0);
    const ParentFilter allow = [&](Vertex v, Vertex u) {
        if (L.dist[ix(v)] != d_star) return true;
        // kernel vertices take a parent one layer up, the others must not
        return (L.dist[ix(u)] == d_star - 1) == (inA[ix(v)] != 0);
    };
    for (std::uint32_t mask = 0; mask < (1u << s.layer.size()); ++mask) {
        std::vector<Vertex> A;
        for (std::size_t i = 0; i < s.layer.size(); ++i) {
            inA[ix(s.layer[i])] = (mask >> i) & 1;
            if (inA[ix(s.layer[i])]) A.push_back(s.layer[i]);
        }
        EnergySpectrum spec;
        for_each_spanning_tree(g, root, [&](const std::vector<Vertex>& parent) { ++spec[depth_sum(parent, root)]; }, allow);
        if (spec.empty()) continue;
        for (auto [e, c] : spec) {
            s.by_size[A.size()][e] += c;
            s.total[e] += c;
        }
        s.by_kernel.emplace(std::move(A), std::move(spec));
    }
    return s;
}

std::vector<double> KernelSpectrum::log_z_by_size(double beta_bar) const {
    std::vector<double> out;
    for (const auto& spec : by_size) {
        double z = kNegInf;
        for (auto [e, c] : spec) z = log_add(z, std::log(double(c)) - beta_bar * double(e));
        out.push_back(z);
    }
    return out;
}

double KernelSpectrum::log_z(double beta_bar) const {
    double z = kNegInf;
    for (auto [e, c] : total) z = log_add(z, std::log(double(c)) - beta_bar * double(e));
    return z;
}

double tree_overlap_R(const ParentMap& a, const ParentMap& b) {
    if (a.n() != b.n() || a.root != b.root) throw ParameterError("tree_overlap_R: trees differ in size or root");
    std::set<std::pair<Vertex, Vertex>> ea;
    int edges = 0;
    for (Vertex v = 0; v < a.n(); ++v) {
        if (v == a.root || !a.contains(v)) continue;
        ea.insert(std::minmax(v, a.parent[ix(v)]));
        ++edges;
    }
    if (edges == 0) throw DomainError("tree_overlap_R: trees without edges");
    int common = 0;
    for (Vertex v = 0; v < b.n(); ++v) {
        if (v == b.root || !b.contains(v)) continue;
        common += ea.count(std::minmax(v, b.parent[ix(v)])) > 0;
    }
    return double(common) / double(edges);
}

FppWindow fpp_empirical(const Graph& g, Vertex root, double beta_bar, const ParentMap& center, double r, double eps) {
    if (!(eps > 0)) throw ParameterError("fpp_empirical: eps must be > 0");
    if (!is_spanning_tree_of(center, g) || center.root != root)
        throw ParameterError("fpp_empirical: center is not a spanning tree of the root component");
    constexpr double tol = 1e-12;
    FppWindow w;
    w.log_z = kNegInf;
    for_each_spanning_tree(g, root, [&](const std::vector<Vertex>& parent) {
        const auto t = make_parent_map(root, parent);
        const double R = tree_overlap_R(center, t);
        const bool inside = (R >= r - eps - tol && R < r + eps - tol) || (R == 1.0 && r + eps >= 1.0 - tol);
        if (!inside) return;
        ++w.trees;
        w.log_z = log_add(w.log_z, -beta_bar * double(tree_energy(t)));
    });
    w.empty = w.trees == 0;
    return w;
}

// ---------------------------------------------------------------------------
// Graph enumeration up to isomorphism

namespace {

// Bit of pair (a, b), a < b, in a lexicographic pair order; earlier pairs are more significant.
int pair_bit(int n, int a, int b) {
    const int idx = a * n - a * (a + 1) / 2 + (b - a - 1);
    const int total = n * (n - 1) / 2;
    return total - 1 - idx;
}

// Isomorphism-invariant color refinement starting from degrees.
std::vector<int> refine_colors(const Graph& g) {
    const int n = g.n();
    std::vector<int> color(ix(n));
    for (Vertex v = 0; v < n; ++v) color[ix(v)] = g.degree(v);
    int classes = -1;
    for (;;) {
        std::vector<std::pair<std::vector<int>, Vertex>> sig;
        for (Vertex v = 0; v < n; ++v) {
            std::vector<int> s{color[ix(v)]};
            std::vector<int> nb;
            for (Vertex u : g.neighbors(v)) nb.push_back(color[ix(u)]);
            std::sort(nb.begin(), nb.end());
            s.insert(s.end(), nb.begin(), nb.end());
            sig.emplace_back(std::move(s), v);
        }
        std::vector<std::vector<int>> keys;
        for (auto& p : sig) keys.push_back(p.first);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (auto& [s, v] : sig)
            color[ix(v)] = static_cast<int>(std::lower_bound(keys.begin(), keys.end(), s) - keys.begin());
        const int now = static_cast<int>(keys.size());
        if (now == classes) return color;
        classes = now;
    }
}

}  // namespace

std::uint64_t canonical_code(const Graph& g) {
    const int n = g.n();
    if (n > 11) throw TooLargeError("canonical_code: at most 11 vertices");
    const auto color = refine_colors(g);
    // cells in color order; positions are filled cell by cell
    std::vector<std::vector<Vertex>> cells(ix(*std::max_element(color.begin(), color.end()) + 1));
    for (Vertex v = 0; v < n; ++v) cells[ix(color[ix(v)])].push_back(v);
    std::vector<Vertex> order;
    for (auto& c : cells) order.insert(order.end(), c.begin(), c.end());
    std::vector<std::size_t> starts;
    std::size_t pos = 0;
    for (auto& c : cells) {
        starts.push_back(pos);
        pos += c.size();
    }
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    // iterate over the product of permutations within cells (odometer over next_permutation)
    for (auto& c : cells) std::sort(c.begin(), c.end());
    for (;;) {
        std::size_t p = 0;
        for (auto& c : cells)
            for (Vertex v : c) order[p++] = v;
        std::uint64_t code = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (g.has_edge(order[ix(a)], order[ix(b)])) code |= std::uint64_t{1} << pair_bit(n, a, b);
        best = std::min(best, code);
        std::size_t k = 0;
        while (k < cells.size() && !std::next_permutation(cells[k].begin(), cells[k].end())) ++k;
        if (k == cells.size()) break;
    }
    return best;
}

Graph graph_from_code(int n, std::uint64_t code) {
    std::vector<Edge> e;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (code >> pair_bit(n, a, b) & 1) e.emplace_back(a, b);
    return Graph(n, e);
}

std::vector<Graph> connected_graphs(int n) {
    if (n < 1 || n > 8) throw ParameterError("connected_graphs: need 1 <= n <= 8");
    std::set<std::uint64_t> level{0};  // the single vertex
    for (int k = 2; k <= n; ++k) {
        std::set<std::uint64_t> next;
        for (std::uint64_t code : level) {
            const Graph base = graph_from_code(k - 1, code);
            auto edges = base.edges();
            // every connected graph has a non-cut vertex, so adding a vertex with a nonempty
            // neighborhood to every connected (k-1)-graph reaches all connected k-graphs
            for (std::uint32_t mask = 1; mask < (1u << (k - 1)); ++mask) {
                auto e = edges;
                for (int u = 0; u < k - 1; ++u)
                    if (mask >> u & 1) e.emplace_back(u, k - 1);
                next.insert(canonical_code(Graph(k, e)));
            }
        }
        level = std::move(next);
    }
    std::vector<Graph> out;
    for (std::uint64_t code : level) out.push_back(graph_from_code(n, code));
    return out;
}

}  // namespace ogp
