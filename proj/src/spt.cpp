#include "ogp/spt.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>

#include "ogp/errors.hpp"

namespace ogp {

double ProductTreeMeasure::prob(Vertex v, std::size_t k) const {
    auto s = support_of(v);
    if (weights.empty()) return 1.0 / static_cast<double>(s.size());
    const auto off = static_cast<std::size_t>(offsets[static_cast<std::size_t>(v)]);
    double total = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) total += weights[off + i];
    return weights[off + k] / total;
}

void ProductTreeMeasure::validate() const {
    if (static_cast<int>(offsets.size()) != n() + 1) throw StructuralError("measure: offsets size mismatch");
    if (!weights.empty() && weights.size() != support.size()) throw StructuralError("measure: weights size mismatch");
    if (root < 0 || root >= n() || level[static_cast<std::size_t>(root)] != 0) throw StructuralError("measure: bad root");
    for (Vertex v = 0; v < n(); ++v) {
        if (!covers(v) || v == root) continue;
        auto s = support_of(v);
        if (s.empty()) throw StructuralError("measure: empty support at vertex " + std::to_string(v));
        for (Vertex u : s)
            if (u < 0 || u >= n() || level[static_cast<std::size_t>(u)] != level[static_cast<std::size_t>(v)] - 1)
                throw StructuralError("measure: support of " + std::to_string(v) + " is not one level closer");
        if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
            throw StructuralError("measure: support of " + std::to_string(v) + " is not strictly increasing");
    }
}

ParentMap make_parent_map(Vertex root, std::vector<Vertex> parent) {
    const int n = static_cast<int>(parent.size());
    if (root < 0 || root >= n) throw StructuralError("parent map: root out of range");
    parent[static_cast<std::size_t>(root)] = root;
    ParentMap t;
    t.root = root;
    t.dist_T.assign(static_cast<std::size_t>(n), kInfDist);
    t.dist_T[static_cast<std::size_t>(root)] = 0;
    // resolve depths iteratively, detecting cycles with a visiting mark
    std::vector<char> state(static_cast<std::size_t>(n), 0);  // 0 new, 1 on stack, 2 done
    state[static_cast<std::size_t>(root)] = 2;
    std::vector<Vertex> stack;
    for (Vertex v = 0; v < n; ++v) {
        if (parent[static_cast<std::size_t>(v)] < 0 || state[static_cast<std::size_t>(v)] == 2) continue;
        Vertex x = v;
        while (state[static_cast<std::size_t>(x)] == 0) {
            Vertex p = parent[static_cast<std::size_t>(x)];
            if (p < 0 || p >= n) throw StructuralError("parent map: vertex " + std::to_string(x) + " points outside the tree");
            state[static_cast<std::size_t>(x)] = 1;
            stack.push_back(x);
            x = p;
        }
        if (state[static_cast<std::size_t>(x)] == 1) throw StructuralError("parent map: cycle through vertex " + std::to_string(x));
        int d = t.dist_T[static_cast<std::size_t>(x)];
        while (!stack.empty()) {
            Vertex y = stack.back();
            stack.pop_back();
            t.dist_T[static_cast<std::size_t>(y)] = ++d;
            state[static_cast<std::size_t>(y)] = 2;
        }
    }
    t.parent = std::move(parent);
    return t;
}

bool is_spanning_tree_of(const ParentMap& t, const Graph& g) {
    if (t.n() != g.n()) return false;
    auto dist = bfs_distances(g, t.root);
    for (Vertex v = 0; v < g.n(); ++v) {
        const bool in_comp = dist[static_cast<std::size_t>(v)] != kInfDist;
        if (in_comp != t.contains(v)) return false;
        if (in_comp && v != t.root) {
            Vertex p = t.parent[static_cast<std::size_t>(v)];
            if (!g.has_edge(v, p)) return false;
            if (t.dist_T[static_cast<std::size_t>(v)] != t.dist_T[static_cast<std::size_t>(p)] + 1) return false;
        }
    }
    return true;
}

std::int64_t tree_energy(const ParentMap& t) {
    std::int64_t s = 0;
    for (int d : t.dist_T)
        if (d != kInfDist) s += d;
    return s;
}

std::vector<std::vector<Vertex>> children_of(const ParentMap& t) {
    std::vector<std::vector<Vertex>> ch(static_cast<std::size_t>(t.n()));
    for (Vertex v = 0; v < t.n(); ++v)
        if (v != t.root && t.contains(v)) ch[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(v)])].push_back(v);
    return ch;
}

ProductTreeMeasure shortest_path_dag(const LayerDecomposition& L) {
    ProductTreeMeasure m;
    m.root = L.root;
    m.level = L.dist;
    m.offsets = L.parent_offsets;
    m.support = L.parent_list;
    return m;
}

ParentMap uniform_spt_sample(const ProductTreeMeasure& m, Rng& rng) {
    const int n = m.n();
    std::vector<Vertex> parent(static_cast<std::size_t>(n), -1);
    ParentMap t;
    t.root = m.root;
    t.dist_T.assign(static_cast<std::size_t>(n), kInfDist);
    for (Vertex v = 0; v < n; ++v) {
        if (!m.covers(v)) continue;
        t.dist_T[static_cast<std::size_t>(v)] = m.level[static_cast<std::size_t>(v)];
        if (v == m.root) {
            parent[static_cast<std::size_t>(v)] = v;
            continue;
        }
        auto s = m.support_of(v);
        if (s.empty()) throw StructuralError("uniform_spt_sample: empty support at vertex " + std::to_string(v));
        std::size_t k;
        if (m.uniform()) {
            k = static_cast<std::size_t>(rng.below(s.size()));
        } else {
            double u = rng.uniform();
            k = 0;
            while (k + 1 < s.size()) {
                double p = m.prob(v, k);
                if (u < p) break;
                u -= p;
                ++k;
            }
        }
        parent[static_cast<std::size_t>(v)] = s[k];
    }
    t.parent = std::move(parent);
    return t;
}

ParentMap uniform_spt_sample(const ProductTreeMeasure& m, std::uint64_t seed) {
    Rng rng(seed, 0x535054);
    return uniform_spt_sample(m, rng);
}

double log_spt_count(const ProductTreeMeasure& m) {
    double s = 0.0;
    for (Vertex v = 0; v < m.n(); ++v)
        if (m.covers(v) && v != m.root) s += std::log(static_cast<double>(m.support_of(v).size()));
    return s;
}

std::vector<Edge> project_path(const ParentMap& t, Vertex u, Vertex v) {
    if (u < 0 || v < 0 || u >= t.n() || v >= t.n() || !t.contains(u) || !t.contains(v))
        throw DomainError("project_path: endpoint outside the tree");
    std::vector<Edge> front, back;
    Vertex a = u, b = v;
    while (a != b) {
        if (t.dist_T[static_cast<std::size_t>(a)] >= t.dist_T[static_cast<std::size_t>(b)]) {
            Vertex p = t.parent[static_cast<std::size_t>(a)];
            front.emplace_back(a, p);
            a = p;
        } else {
            Vertex p = t.parent[static_cast<std::size_t>(b)];
            back.emplace_back(p, b);
            b = p;
        }
    }
    front.insert(front.end(), back.rbegin(), back.rend());
    return front;
}

LocalSearchResult local_search_p2(const Graph& g, Vertex root, const ParentMap& init, PivotRule rule) {
    if (init.root != root || !is_spanning_tree_of(init, g))
        throw StructuralError("local_search_p2: initial tree does not span the root component");
    const int n = g.n();
    LocalSearchResult res;
    std::vector<Vertex> parent = init.parent;
    std::vector<int> depth = init.dist_T;
    auto children = children_of(init);
    std::int64_t objective = tree_energy(init);
    res.objective_trace.push_back(objective);

    // shallowest neighbor of v (smallest ID on ties)
    auto best_neighbor = [&](Vertex v) {
        Vertex best = -1;
        for (Vertex u : g.neighbors(v))
            if (best < 0 || depth[static_cast<std::size_t>(u)] < depth[static_cast<std::size_t>(best)]) best = u;
        return best;
    };
    std::vector<Vertex> stack;
    auto subtree_size = [&](Vertex v) {
        std::int64_t s = 0;
        stack.assign(1, v);
        while (!stack.empty()) {
            Vertex x = stack.back();
            stack.pop_back();
            ++s;
            for (Vertex c : children[static_cast<std::size_t>(x)]) stack.push_back(c);
        }
        return s;
    };
    auto apply_move = [&](Vertex v, Vertex u) {
        auto& old = children[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
        old.erase(std::find(old.begin(), old.end(), v));
        auto& fresh = children[static_cast<std::size_t>(u)];
        fresh.insert(std::lower_bound(fresh.begin(), fresh.end(), v), v);
        parent[static_cast<std::size_t>(v)] = u;
        const int shift = depth[static_cast<std::size_t>(u)] + 1 - depth[static_cast<std::size_t>(v)];
        std::int64_t count = 0;
        stack.assign(1, v);
        while (!stack.empty()) {
            Vertex x = stack.back();
            stack.pop_back();
            depth[static_cast<std::size_t>(x)] += shift;
            ++count;
            for (Vertex c : children[static_cast<std::size_t>(x)]) stack.push_back(c);
        }
        objective += count * shift;
        ++res.swaps;
        res.objective_trace.push_back(objective);
    };
    auto improving = [&](Vertex v) -> Vertex {
        if (v == root || parent[static_cast<std::size_t>(v)] < 0) return -1;
        Vertex u = best_neighbor(v);
        // d_T(u) + 1 < d_T(v) also guarantees u is not inside v's subtree
        if (u >= 0 && depth[static_cast<std::size_t>(u)] + 1 < depth[static_cast<std::size_t>(v)]) return u;
        return -1;
    };

    if (rule == PivotRule::FirstImproving) {
        int idle = 0;
        Vertex cur = 0;
        while (idle < n) {
            Vertex u = improving(cur);
            if (u >= 0) {
                apply_move(cur, u);
                idle = 0;
            } else {
                ++idle;
            }
            cur = (cur + 1) % n;
        }
    } else {
        for (;;) {
            std::int64_t best_gain = 0;
            Vertex bv = -1, bu = -1;
            for (Vertex v = 0; v < n; ++v) {
                Vertex u = improving(v);
                if (u < 0) continue;
                std::int64_t gain = subtree_size(v) * (depth[static_cast<std::size_t>(v)] - depth[static_cast<std::size_t>(u)] - 1);
                if (gain > best_gain) {
                    best_gain = gain;
                    bv = v;
                    bu = u;
                }
            }
            if (bv < 0) break;
            apply_move(bv, bu);
        }
    }
    res.tree = make_parent_map(root, parent);
    return res;
}

// ---------------------------------------------------------------------------
// belief propagation

namespace {

using Msg = std::vector<std::pair<int, double>>;  // (distance value, probability), kInfDist allowed

Msg point_mass(int d) { return Msg{{d, 1.0}}; }

// Exact expectation of the softmin mixture over independent inputs; `inputs` hold D_w laws.
Msg softmin_update(const std::vector<const Msg*>& inputs, double beta_bar, int cap, double prune) {
    std::vector<int> levels;
    for (const Msg* m : inputs)
        for (const auto& [d, p] : *m)
            if (d != kInfDist && d + 1 <= cap) levels.push_back(d + 1);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.empty()) return point_mass(kInfDist);
    const int L = static_cast<int>(levels.size());
    const auto radix = static_cast<std::uint64_t>(inputs.size() + 1);
    std::vector<std::uint64_t> place(static_cast<std::size_t>(L));
    std::uint64_t acc = 1;
    for (int i = 0; i < L; ++i) {
        place[static_cast<std::size_t>(i)] = acc;
        if (acc > (std::uint64_t{1} << 62) / radix) throw TooLargeError("bp_dijkstra: count-state code overflow");
        acc *= radix;
    }
    std::unordered_map<std::uint64_t, double> states{{0, 1.0}}, next;
    for (const Msg* m : inputs) {
        next.clear();
        for (const auto& [code, p] : states) {
            for (const auto& [d, pd] : *m) {
                double w = p * pd;
                if (w < prune * 1e-3) continue;
                std::uint64_t c = code;
                if (d != kInfDist && d + 1 <= cap) {
                    auto it = std::lower_bound(levels.begin(), levels.end(), d + 1);
                    c += place[static_cast<std::size_t>(it - levels.begin())];
                }
                next[c] += w;
            }
        }
        states.swap(next);
    }
    std::vector<double> x(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i) x[static_cast<std::size_t>(i)] = std::exp(-beta_bar * (levels[static_cast<std::size_t>(i)] - levels[0]));
    std::vector<double> out(static_cast<std::size_t>(L) + 1, 0.0);  // last slot = infinity
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(L));
    for (const auto& [code, p] : states) {
        std::uint64_t c = code;
        double S = 0.0;
        for (int i = 0; i < L; ++i) {
            counts[static_cast<std::size_t>(i)] = c % radix;
            c /= radix;
            S += static_cast<double>(counts[static_cast<std::size_t>(i)]) * x[static_cast<std::size_t>(i)];
        }
        if (S <= 0.0) {
            out.back() += p;
            continue;
        }
        for (int i = 0; i < L; ++i)
            if (counts[static_cast<std::size_t>(i)] > 0)
                out[static_cast<std::size_t>(i)] += p * static_cast<double>(counts[static_cast<std::size_t>(i)]) * x[static_cast<std::size_t>(i)] / S;
    }
    Msg res;
    double total = 0.0;
    for (int i = 0; i <= L; ++i) {
        double p = out[static_cast<std::size_t>(i)];
        if (p < prune) continue;
        res.emplace_back(i < L ? levels[static_cast<std::size_t>(i)] : kInfDist, p);
        total += p;
    }
    if (res.empty()) return point_mass(kInfDist);
    for (auto& e : res) e.second /= total;
    return res;
}

bool same_msg(const Msg& a, const Msg& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || std::abs(a[i].second - b[i].second) > 1e-12) return false;
    return true;
}

}  // namespace

BpResult bp_dijkstra(const Graph& g, Vertex root, double beta_bar, int rounds, double prune) {
    const int n = g.n();
    if (root < 0 || root >= n) throw ParameterError("bp_dijkstra: root out of range");
    if (!(beta_bar >= 0.0)) throw ParameterError("bp_dijkstra: beta_bar must be nonnegative");
    const bool zero_temp = std::isinf(beta_bar);
    const int cap = n - 1;
    std::vector<std::int64_t> off(static_cast<std::size_t>(n) + 1, 0);
    for (Vertex v = 0; v < n; ++v) off[static_cast<std::size_t>(v) + 1] = off[static_cast<std::size_t>(v)] + g.degree(v);
    // rev[pos(u->w)] = pos(w->u)
    std::vector<std::int64_t> rev(static_cast<std::size_t>(off.back()));
    for (Vertex u = 0; u < n; ++u) {
        auto nb = g.neighbors(u);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            Vertex w = nb[i];
            auto nw = g.neighbors(w);
            auto j = static_cast<std::int64_t>(std::lower_bound(nw.begin(), nw.end(), u) - nw.begin());
            rev[static_cast<std::size_t>(off[static_cast<std::size_t>(u)]) + i] = off[static_cast<std::size_t>(w)] + j;
        }
    }
    // msg[pos(u->w)] is the law of D_u as sent to w
    std::vector<Msg> msg(static_cast<std::size_t>(off.back()), point_mass(kInfDist));
    for (std::int64_t p = off[static_cast<std::size_t>(root)]; p < off[static_cast<std::size_t>(root) + 1]; ++p)
        msg[static_cast<std::size_t>(p)] = point_mass(0);

    BpResult res;
    std::vector<Msg> next = msg;
    std::vector<const Msg*> inputs;
    for (int r = 0; r < rounds; ++r) {
        bool changed = false;
        for (Vertex u = 0; u < n; ++u) {
            if (u == root) continue;
            auto nb = g.neighbors(u);
            for (std::size_t j = 0; j < nb.size(); ++j) {
                Msg out;
                if (zero_temp) {
                    int best = kInfDist;
                    for (std::size_t i = 0; i < nb.size(); ++i) {
                        if (i == j) continue;
                        int d = msg[static_cast<std::size_t>(rev[static_cast<std::size_t>(off[static_cast<std::size_t>(u)]) + i])][0].first;
                        if (d != kInfDist && d + 1 <= cap) best = std::min(best, d + 1);
                    }
                    out = point_mass(best);
                } else {
                    inputs.clear();
                    for (std::size_t i = 0; i < nb.size(); ++i)
                        if (i != j) inputs.push_back(&msg[static_cast<std::size_t>(rev[static_cast<std::size_t>(off[static_cast<std::size_t>(u)]) + i])]);
                    out = softmin_update(inputs, beta_bar, cap, prune);
                }
                auto pos = static_cast<std::size_t>(off[static_cast<std::size_t>(u)]) + j;
                if (!same_msg(out, msg[pos])) changed = true;
                next[pos] = std::move(out);
            }
        }
        msg.swap(next);
        res.rounds_run = r + 1;
        if (!changed) {
            res.converged = true;
            break;
        }
    }
    // beliefs: same update using every neighbor
    res.beliefs.resize(static_cast<std::size_t>(n));
    for (Vertex u = 0; u < n; ++u) {
        Msg b;
        if (u == root) {
            b = point_mass(0);
        } else {
            auto nb = g.neighbors(u);
            if (zero_temp) {
                int best = kInfDist;
                for (std::size_t i = 0; i < nb.size(); ++i) {
                    int d = msg[static_cast<std::size_t>(rev[static_cast<std::size_t>(off[static_cast<std::size_t>(u)]) + i])][0].first;
                    if (d != kInfDist && d + 1 <= cap) best = std::min(best, d + 1);
                }
                b = point_mass(best);
            } else {
                inputs.clear();
                for (std::size_t i = 0; i < nb.size(); ++i)
                    inputs.push_back(&msg[static_cast<std::size_t>(rev[static_cast<std::size_t>(off[static_cast<std::size_t>(u)]) + i])]);
                b = softmin_update(inputs, beta_bar, cap, prune);
            }
        }
        DiscreteDist dd;
        for (const auto& [d, p] : b) {
            dd.values.push_back(d == kInfDist ? std::numeric_limits<double>::infinity() : static_cast<double>(d));
            dd.probs.push_back(p);
        }
        res.beliefs[static_cast<std::size_t>(u)] = std::move(dd);
    }
    return res;
}

std::vector<int> bp_modes(const BpResult& r) {
    std::vector<int> out;
    out.reserve(r.beliefs.size());
    for (const auto& b : r.beliefs) {
        double m = b.mode();
        out.push_back(std::isinf(m) ? kInfDist : static_cast<int>(m));
    }
    return out;
}

void write_parent_map(std::ostream& os, const ParentMap& t) {
    os << t.n() << ' ' << t.root << '\n';
    for (Vertex v = 0; v < t.n(); ++v) os << v << ' ' << t.parent[static_cast<std::size_t>(v)] << '\n';
}

ParentMap read_parent_map(std::istream& is) {
    int n = 0, root = 0;
    if (!(is >> n >> root) || n <= 0) throw ParameterError("read_parent_map: bad header");
    std::vector<Vertex> parent(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        int v, p;
        if (!(is >> v >> p) || v < 0 || v >= n) throw ParameterError("read_parent_map: bad line");
        parent[static_cast<std::size_t>(v)] = p;
    }
    return make_parent_map(root, std::move(parent));
}

void write_measure(std::ostream& os, const ProductTreeMeasure& m) {
    os << m.n() << ' ' << m.root << '\n';
    for (Vertex v = 0; v < m.n(); ++v) {
        if (!m.covers(v)) continue;
        os << v << ' ' << m.level[static_cast<std::size_t>(v)] << ':';
        auto s = m.support_of(v);
        for (std::size_t k = 0; k < s.size(); ++k) {
            os << ' ' << s[k];
            if (!m.uniform()) os << '/' << m.prob(v, k);
        }
        os << '\n';
    }
}

}  // namespace ogp
