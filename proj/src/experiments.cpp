#include "ogp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ogp/gibbs.hpp"
#include "ogp/graph.hpp"
#include "ogp/landscape.hpp"
#include "ogp/overlap.hpp"
#include "ogp/spt.hpp"
#include "ogp/theory.hpp"

namespace ogp {

using nlohmann::ordered_json;

std::string version() { return "0.3.0"; }

// ---------------------------------------------------------------------------
// config text form

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + v + "'", {key});
    }
    if (pos != v.size()) throw ConfigError(key + ": not a number: '" + v + "'", {key});
    return x;
}

long long parse_integer(const std::string& key, const std::string& v) {
    const double x = parse_number(key, v);
    if (x != std::floor(x) || std::abs(x) > 9.0e15) throw ConfigError(key + ": expected an integer, got '" + v + "'", {key});
    return static_cast<long long>(x);
}

std::vector<double> parse_array(const std::string& key, const std::string& v) {
    std::vector<double> out;
    if (v.rfind("linspace(", 0) == 0 && v.back() == ')') {
        std::vector<std::string> parts;
        std::stringstream ss(v.substr(9, v.size() - 10));
        for (std::string p; std::getline(ss, p, ',');) parts.push_back(trim(p));
        if (parts.size() != 3) throw ConfigError(key + ": linspace takes (start, stop, count)", {key});
        const double a = parse_number(key, parts[0]), b = parse_number(key, parts[1]);
        const long long k = parse_integer(key, parts[2]);
        if (k < 0 || k > 1000000) throw ConfigError(key + ": linspace count out of range", {key});
        for (long long i = 0; i < k; ++i) out.push_back(k == 1 ? a : a + (b - a) * double(i) / double(k - 1));
        return out;
    }
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') throw ConfigError(key + ": expected [a, b, ...] or linspace(a, b, k)", {key});
    const std::string body = trim(std::string_view(v).substr(1, v.size() - 2));
    if (body.empty()) return out;
    std::stringstream ss(body);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_number(key, trim(p)));
    return out;
}

void assign(ExperimentConfig& c, const std::string& key, const std::string& v) {
    if (key == "experiment") c.experiment = v;
    else if (key == "n") {
        const long long x = parse_integer(key, v);
        if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) throw ConfigError("n: out of range", {key});
        c.n = static_cast<int>(x);
    } else if (key == "q") c.q = parse_number(key, v);
    else if (key == "seed") {
        const long long x = parse_integer(key, v);
        if (x < 0) throw ConfigError("seed: must be nonnegative", {key});
        c.seed = static_cast<std::uint64_t>(x);
    } else if (key == "trials") c.trials = static_cast<int>(std::clamp<long long>(parse_integer(key, v), -1, 100000000));
    else if (key == "m") c.m = static_cast<int>(std::clamp<long long>(parse_integer(key, v), -1, 100000000));
    else if (key == "rho_grid") c.rho_grid = parse_array(key, v);
    else if (key == "time_grid") {
        c.rho_grid = parse_array(key, v);
        for (auto& x : c.rho_grid) x = 1.0 - x;
    } else if (key == "beta_grid") c.beta_grid = parse_array(key, v);
    else if (key == "lambda_grid") c.lambda_grid = parse_array(key, v);
    else if (key == "gamma_grid") c.gamma_grid = parse_array(key, v);
    else if (key == "delta_grid") c.delta_grid = parse_array(key, v);
    else if (key == "r_grid") c.r_grid = parse_array(key, v);
    else if (key == "out") c.out_dir = v;
    else throw ConfigError("unknown key '" + key + "'", {key});
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string fmt_array(const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
    return s + "]";
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig c;
    std::stringstream ss{std::string(text)};
    int lineno = 0;
    for (std::string line; std::getline(ss, line);) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value", {});
        assign(c, trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw OutputError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "experiment = " << c.experiment << '\n'
       << "n = " << c.n << '\n'
       << "q = " << fmt(c.q) << '\n'
       << "seed = " << c.seed << '\n'
       << "trials = " << c.trials << '\n'
       << "m = " << c.m << '\n'
       << "rho_grid = " << fmt_array(c.rho_grid) << '\n'
       << "beta_grid = " << fmt_array(c.beta_grid) << '\n'
       << "lambda_grid = " << fmt_array(c.lambda_grid) << '\n'
       << "gamma_grid = " << fmt_array(c.gamma_grid) << '\n'
       << "delta_grid = " << fmt_array(c.delta_grid) << '\n'
       << "r_grid = " << fmt_array(c.r_grid) << '\n'
       << "out = " << c.out_dir << '\n';
    return os.str();
}

void apply_override(ExperimentConfig& c, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override must be key=value", {});
    assign(c, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string ValidationReport::text() const {
    if (ok()) return "ok";
    std::string s;
    for (std::size_t i = 0; i < messages.size(); ++i) s += (i ? "\n" : "") + messages[i];
    return s;
}

// ---------------------------------------------------------------------------
// experiments and presets

namespace {

enum Need : unsigned {
    kGraph = 1,
    kRho = 2,
    kBeta = 4,
    kLambda = 8,
    kGamma = 16,
    kDelta = 32,
    kR = 64,
    kTrials = 128,
    kM = 256,
};

struct Spec {
    const char* name;
    unsigned needs;
    bool preset;
};

const std::vector<Spec>& specs() {
    static const std::vector<Spec> s{
        {"fig1-overlap", kGraph | kRho | kTrials, true},
        {"heatmap-gamma", kLambda | kGamma, true},
        {"heatmap-rho", kLambda | kRho, true},
        {"phase-diagram", kLambda | kDelta | kBeta, true},
        {"fpp-curves", kLambda | kDelta | kBeta | kR, true},
        {"replica", kGraph | kTrials, true},
        {"appendixF", kBeta | kR | kM, true},
        {"gibbs", kGraph | kBeta | kTrials, false},
    };
    return s;
}

const Spec* find_spec(std::string_view name) {
    for (const auto& s : specs())
        if (name == s.name) return &s;
    return nullptr;
}

}  // namespace

std::vector<std::string> experiment_names() {
    std::vector<std::string> out;
    for (const auto& s : specs()) out.emplace_back(s.name);
    return out;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& s : specs())
        if (s.preset) out.emplace_back(s.name);
    return out;
}

ValidationReport validate_config(const ExperimentConfig& c) {
    ValidationReport r;
    const auto bad = [&](const std::string& field, const std::string& msg) {
        if (std::find(r.fields.begin(), r.fields.end(), field) == r.fields.end()) r.fields.push_back(field);
        r.messages.push_back(field + ": " + msg);
    };
    const Spec* spec = find_spec(c.experiment);
    if (!spec) {
        bad("experiment", "unknown experiment '" + c.experiment + "'");
        return r;
    }
    const auto grid = [&](unsigned flag, const char* field, const std::vector<double>& xs, double lo, double hi) {
        if (!(spec->needs & flag)) return;
        if (xs.empty()) {
            bad(field, "grid is empty");
            return;
        }
        for (double x : xs)
            if (!(x >= lo && x <= hi)) {
                bad(field, "value " + fmt(x) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
                return;
            }
    };
    if (spec->needs & kGraph) {
        if (c.n < 2) bad("n", "must be at least 2");
        if (!(c.q > 0 && c.q <= 1)) bad("q", "must lie in (0, 1]");
        if (c.n >= 2 && c.q > 0 && !(double(c.n) * c.q > 1)) bad("q", "n q must exceed 1");
    }
    if ((spec->needs & kTrials) && c.trials < 1) bad("trials", "trial grid is empty (trials must be >= 1)");
    if ((spec->needs & kM) && (c.m < 1 || c.m > 2000)) bad("m", "must lie in [1, 2000]");
    grid(kRho, "rho_grid", c.rho_grid, 0, 1);
    grid(kBeta, "beta_grid", c.beta_grid, std::numeric_limits<double>::min(), 1e6);
    grid(kLambda, "lambda_grid", c.lambda_grid, 0, 1);
    grid(kGamma, "gamma_grid", c.gamma_grid, 0, 1);
    grid(kDelta, "delta_grid", c.delta_grid, 0, 1);
    grid(kR, "r_grid", c.r_grid, c.experiment == "appendixF" ? -1.0 : 0.0, 1);
    if (c.out_dir.empty()) bad("out", "output directory is empty");
    return r;
}

ExperimentConfig preset_config(std::string_view name) {
    const Spec* spec = find_spec(name);
    if (!spec || !spec->preset) throw UnknownExperimentError("unknown preset '" + std::string(name) + "'");
    ExperimentConfig c;
    c.experiment = spec->name;
    const auto lin = [](double a, double b, int k) {
        std::vector<double> v;
        for (int i = 0; i < k; ++i) v.push_back(a + (b - a) * i / (k - 1));
        return v;
    };
    if (name == "fig1-overlap") {
        c.n = 100000;
        c.q = 1e-4;
        c.trials = 3;
        // gamma = rho^{d*} evenly spaced over (0,1), with d* = 5 at these (n, q)
        const int d_star = proxies(c.n, c.q).d_star;
        for (int i = 0; i < 25; ++i) c.rho_grid.push_back(std::pow(0.02 + 0.04 * i, 1.0 / d_star));
        c.rho_grid.push_back(1.0);
    } else if (name == "heatmap-gamma") {
        c.lambda_grid = lin(0, 1, 21);
        c.gamma_grid = lin(0, 1, 21);
    } else if (name == "heatmap-rho") {
        c.lambda_grid = lin(0, 1, 21);
        c.rho_grid = lin(0, 1, 21);
    } else if (name == "phase-diagram") {
        c.lambda_grid = lin(0, 1, 11);
        c.delta_grid = lin(0, 1, 11);
        c.beta_grid = lin(0.05, 2.0, 40);
    } else if (name == "fpp-curves") {
        c.lambda_grid = {0.2, 1.0 / std::exp(1.0), 0.6};
        c.delta_grid = {0.0};
        c.beta_grid = {0.5, 2.0};
        c.r_grid = lin(0, 1, 101);
    } else if (name == "replica") {
        c.n = 100000;
        c.q = std::pow(1e5, 0.5) / 1e5;
        c.trials = 20;
    } else if (name == "appendixF") {
        c.beta_grid = {5.0, 20.0};
        c.m = 500;
        c.r_grid = lin(-1, 1, 201);
    }
    return c;
}

// ---------------------------------------------------------------------------
// parallel runner

int threads_from_env() {
    if (const char* s = std::getenv("OGP_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    const auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

namespace {

/// CSV table with a fixed header; cells are preformatted so output is byte-stable.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    static std::string cell(double x) {
        if (std::isnan(x)) return "nan";
        std::ostringstream os;
        os.precision(12);
        os << x;
        return os.str();
    }
    static std::string cell(std::int64_t x) { return std::to_string(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(std::uint64_t x) { return std::to_string(x); }
    static std::string cell(const char* s) { return s; }
    static std::string cell(const std::string& s) { return s; }

    template <class... T>
    void add(const T&... xs) {
        rows.push_back({cell(xs)...});
        if (rows.back().size() != columns.size()) throw std::logic_error("Table: row width mismatch in " + name);
    }
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// JSON number, with null for NaN and infinities.
ordered_json num(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

double mean_of(const std::vector<double>& xs) {
    double s = 0;
    std::size_t k = 0;
    for (double x : xs)
        if (!std::isnan(x)) s += x, ++k;
    return k ? s / double(k) : kNaN;
}

ordered_json config_json(const ExperimentConfig& c) {
    return ordered_json{{"experiment", c.experiment}, {"n", c.n}, {"q", c.q}, {"seed", c.seed}, {"trials", c.trials}, {"m", c.m},
                        {"rho_grid", c.rho_grid}, {"beta_grid", c.beta_grid}, {"lambda_grid", c.lambda_grid},
                        {"gamma_grid", c.gamma_grid}, {"delta_grid", c.delta_grid}, {"r_grid", c.r_grid}, {"out", c.out_dir}};
}

/// Seed of trial i, independent of scheduling.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t i) { return Rng(seed, 0x7269616cULL).split(i).key(); }

struct Outputs {
    std::vector<Table> tables;
    ordered_json results = ordered_json::object();
};

// ----- fig1-overlap: tree and path overlap along a resampling trajectory

Outputs run_fig1(const ExperimentConfig& c, int threads) {
    // the trajectory wants strictly increasing times; grid points map onto the sorted unique set
    std::vector<double> times;
    for (double rho : c.rho_grid) times.push_back(1.0 - rho);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::vector<std::size_t> snap_index;
    for (double rho : c.rho_grid)
        snap_index.push_back(static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), 1.0 - rho) - times.begin()));
    struct Row {
        double rho, gamma, lambda, r_tilde, r_theory, q_indep, s_dag, path;
    };
    std::vector<std::vector<Row>> per_trial(static_cast<std::size_t>(c.trials));
    parallel_for(per_trial.size(), threads, [&](std::size_t i) {
        const std::uint64_t s = trial_seed(c.seed, i);
        Rng rng(s, 1);
        const Graph base = gen_er(c.n, c.q, rng());
        const ResampleTrajectory traj(base, c.q, times, rng());
        const auto L1 = bfs_layers(base, 0);
        // one fixed target per trial, so the path column traces a single pair through time
        std::vector<Vertex> reach;
        for (Vertex v = 1; v < c.n; ++v)
            if (L1.reachable(v)) reach.push_back(v);
        const Vertex target = reach.empty() ? -1 : reach[rng.below(reach.size())];
        for (std::size_t k = 0; k < c.rho_grid.size(); ++k) {
            const double rho = c.rho_grid[k];
            const auto L2 = bfs_layers(traj.snapshot_at(snap_index[k]), 0);
            const Proxies p = proxies(c.n, c.q, rho);
            const auto rep = overlap_report(L1, L2, p.d_star);
            double path = kNaN;
            if (target >= 0 && L2.reachable(target)) {
                Rng prng(s, 100 + k);
                path = path_overlap_trial(L1, L2, target, prng).overlap;
            }
            double theory = kNaN;
            try {
                theory = limit_tree_overlap(LimitParams::from_proxies(p));
            } catch (const ParameterError&) {
            }
            per_trial[i].push_back({rho, p.gamma, p.lambda, rep.r_tilde, theory, rep.q_indep, rep.s_dag, path});
        }
    });
    Outputs out;
    Table t{"fig1-overlap", {"seed", "rho", "gamma", "lambda", "r_tilde", "r_theory", "q_indep", "s_dag", "path_overlap"}, {}};
    ordered_json curve = ordered_json::array();
    double mad = 0;
    std::size_t mad_count = 0;
    for (std::size_t k = 0; k < c.rho_grid.size(); ++k) {
        std::vector<double> r, path;
        for (std::size_t i = 0; i < per_trial.size(); ++i) {
            const Row& row = per_trial[i][k];
            r.push_back(row.r_tilde);
            path.push_back(row.path);
            if (!std::isnan(row.r_theory)) mad += std::abs(row.r_tilde - row.r_theory), ++mad_count;
        }
        const Row& r0 = per_trial[0][k];
        curve.push_back({{"rho", r0.rho}, {"gamma", r0.gamma}, {"r_tilde_mean", mean_of(r)}, {"r_theory", num(r0.r_theory)},
                         {"path_overlap_mean", num(mean_of(path))}});
    }
    for (std::size_t i = 0; i < per_trial.size(); ++i)
        for (const Row& row : per_trial[i])
            t.add(trial_seed(c.seed, i), row.rho, row.gamma, row.lambda, row.r_tilde, row.r_theory, row.q_indep, row.s_dag, row.path);
    out.tables.push_back(std::move(t));
    const Proxies p = proxies(c.n, c.q);
    out.results = {{"lambda", p.lambda}, {"d_star", p.d_star}, {"ell_star", p.ell_star},
                   {"mad_r_tilde_vs_theory", num(mad_count ? mad / double(mad_count) : kNaN)}, {"curve", curve}};
    return out;
}

// ----- heatmaps of the limiting tree overlap

double overlap_limit_or_nan(double lambda, double gamma, double rho) {
    LimitParams p;
    p.lambda = lambda;
    p.gamma = gamma;
    p.rho = rho;
    p.delta = 0;
    try {
        return limit_tree_overlap(p);
    } catch (const ParameterError&) {
        return kNaN;
    }
}

Outputs run_heatmap(const ExperimentConfig& c, bool gamma_axis) {
    Outputs out;
    Table t{c.experiment, {"lambda", "gamma", "rho", "r_theory"}, {}};
    const auto& ys = gamma_axis ? c.gamma_grid : c.rho_grid;
    for (double lam : c.lambda_grid)
        for (double y : ys) {
            const double rho = gamma_axis ? 1.0 : y, gamma = gamma_axis ? y : 0.0;
            t.add(lam, gamma, rho, overlap_limit_or_nan(lam, gamma, rho));
        }
    out.results = {{"rows", t.rows.size()},
                   {"boundary", gamma_axis ? "gamma = 0 row equals the rho = 1 row of heatmap-rho"
                                           : "rho = 1 row equals the gamma = 0 row of heatmap-gamma"}};
    out.tables.push_back(std::move(t));
    return out;
}

// ----- phase diagram of the limiting free energy

Outputs run_phase(const ExperimentConfig& c) {
    Outputs out;
    Table t{"phase-diagram", {"lambda", "delta", "beta", "beta_c", "free_energy", "low_temperature", "regime"}, {}};
    // The limit admits lambda in [0,1] with delta = 0, and delta in (0,1] with lambda = 0.
    std::vector<std::pair<double, double>> points;
    for (double lam : c.lambda_grid) points.emplace_back(lam, 0.0);
    for (double d : c.delta_grid)
        if (d > 0) points.emplace_back(0.0, d);
    for (auto [lam, d] : points)
        for (double beta : c.beta_grid) {
            const double bc = critical_beta(d, kInf);
            const Regime reg = classify_regime(lam, d, kInf);
            t.add(lam, d, beta, bc, free_energy_density(lam, d, beta), beta >= bc ? 1 : 0, regime_name(reg));
        }
    out.results = {{"points", points.size()}, {"rows", t.rows.size()}};
    out.tables.push_back(std::move(t));
    return out;
}

// ----- Franz-Parisi curves

Outputs run_fpp(const ExperimentConfig& c) {
    Outputs out;
    Table t{"fpp-curves", {"lambda", "delta", "beta", "r1", "r2", "r", "value"}, {}};
    ordered_json curves = ordered_json::array();
    for (double lam : c.lambda_grid)
        for (double d : c.delta_grid)
            for (double beta : c.beta_grid) {
                double r1 = kNaN, r2 = kNaN;
                std::vector<double> vals(c.r_grid.size(), kNaN);
                try {
                    std::tie(r1, r2) = fpp_gibbs_reference(lam, d, beta);
                    vals = fpp_curve(lam, d, beta, r1, r2, c.r_grid);
                } catch (const ParameterError&) {
                }
                for (std::size_t i = 0; i < c.r_grid.size(); ++i) t.add(lam, d, beta, r1, r2, c.r_grid[i], vals[i]);
                const auto mins = local_minima(vals);
                curves.push_back({{"lambda", lam}, {"delta", d}, {"beta", beta}, {"r1", num(r1)}, {"r2", num(r2)},
                                  {"local_minima", mins.size()}});
            }
    out.tables.push_back(std::move(t));
    out.results = {{"curves", curves}};
    return out;
}

// ----- replica overlap of independent uniform shortest-path trees

Outputs run_replica(const ExperimentConfig& c, int threads) {
    struct Row {
        std::int64_t n_comp;
        double sampled, expected;
    };
    std::vector<Row> rows(static_cast<std::size_t>(c.trials));
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        Rng rng(trial_seed(c.seed, i), 2);
        const Graph g = gen_er(c.n, c.q, rng());
        const auto L = bfs_layers(g, 0);
        const auto dag = shortest_path_dag(L);
        Rng r1 = rng.split(1), r2 = rng.split(2);
        const auto t1 = uniform_spt_sample(dag, r1);
        const auto t2 = uniform_spt_sample(dag, r2);
        std::int64_t common = 0;
        for (Vertex v = 0; v < c.n; ++v)
            if (v != L.root && t1.contains(v) && t1.parent[static_cast<std::size_t>(v)] == t2.parent[static_cast<std::size_t>(v)]) ++common;
        double expected = 0;
        for (Vertex v = 0; v < c.n; ++v)
            if (v != L.root && L.reachable(v)) expected += 1.0 / double(L.parents(v).size());
        rows[i] = {L.reachable_count(), double(common) / c.n, expected / c.n};
    });
    const Proxies p = proxies(c.n, c.q);
    const double theory = (p.lambda > 0 && p.lambda < 1) ? replica_overlap(p.lambda, kInf) : kNaN;
    Outputs out;
    Table t{"replica", {"seed", "n", "q", "lambda", "component_size", "overlap_sampled", "overlap_expected", "r_theory"}, {}};
    std::vector<double> s;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        t.add(trial_seed(c.seed, i), c.n, c.q, p.lambda, rows[i].n_comp, rows[i].sampled, rows[i].expected, theory);
        s.push_back(rows[i].sampled);
    }
    out.tables.push_back(std::move(t));
    out.results = {{"lambda", p.lambda}, {"d_star", p.d_star}, {"overlap_mean", mean_of(s)}, {"r_theory", num(theory)}};
    return out;
}

// ----- Appendix F landscape

Outputs run_appendix_f(const ExperimentConfig& c) {
    Outputs out;
    const auto flow = projected_gradient_flow({0, 0, 0, 0}, 1e-4, 3.0, 100);
    Table tf{"appendixF_flow", {"t", "x", "y", "z", "w", "f"}, {}};
    for (std::size_t k = 0; k < flow.times.size(); ++k) {
        const auto& p = flow.points[k];
        tf.add(flow.times[k], p[0], p[1], p[2], p[3], f_multilinear(p));
    }
    const auto table = vertex_table([](std::span<const double> x) { return f_multilinear({x[0], x[1], x[2], x[3]}); }, 4);
    const std::vector<double> zero(4, 0.0);
    ordered_json vertices = ordered_json::array();
    for (std::size_t mask = 0; mask < table.size(); ++mask) {
        std::string label;
        for (int i = 0; i < 4; ++i) label += (mask >> i & 1) ? '+' : '-';
        vertices.push_back({{"vertex", label}, {"f", table[mask]}});
    }
    Table tinf{"appendixF_finf", {"r", "f_inf", "neg_constrained_max", "abs_err"}, {}};
    std::vector<double> finf;
    double worst = 0;
    for (double r : c.r_grid) {
        const double fi = f_infinity(r), cm = -constrained_max_bruteforce(r);
        finf.push_back(fi);
        worst = std::max(worst, std::abs(fi - cm));
        tinf.add(r, fi, cm, std::abs(fi - cm));
    }
    ordered_json minima = ordered_json::array();
    for (auto i : local_minima(finf)) minima.push_back(c.r_grid[i]);
    Table tis{"appendixF_ising", {"beta", "m", "r", "r_sector", "value", "f_inf"}, {}};
    ordered_json ising = ordered_json::array();
    for (double beta : c.beta_grid) {
        const auto pts = ising_fpp(c.m, beta, c.r_grid);
        double sup = 0;
        for (const auto& p : pts) {
            tis.add(beta, c.m, p.r, p.r_sector, p.value, f_infinity(p.r));
            sup = std::max(sup, std::abs(p.value - f_infinity(p.r)));
        }
        ising.push_back({{"beta", beta}, {"m", c.m}, {"sup_abs_diff_to_f_inf", sup}});
    }
    out.results = {{"t_star", flow.first_contact_time},
                   {"contact_point", flow.first_contact_point},
                   {"stationary_from", flow.stationary_from},
                   {"f_at_contact", f_multilinear(flow.first_contact_point)},
                   {"vertex_values", vertices},
                   {"lovasz_at_zero", lovasz_extension(table, zero)},
                   {"f_inf_minima", minima},
                   {"f_inf_max_abs_err", worst},
                   {"ising", ising}};
    out.tables.push_back(std::move(tf));
    out.tables.push_back(std::move(tinf));
    out.tables.push_back(std::move(tis));
    return out;
}

// ----- Gibbs summaries

Outputs run_gibbs(const ExperimentConfig& c, int threads) {
    Rng rng(c.seed, 3);
    const Graph g = gen_er(c.n, c.q, rng());
    const auto L = bfs_layers(g, 0);
    const GraphStats s = graph_stats(g, L, c.q);
    const double ground = double(ground_energy(L));
    Outputs out;
    Table t{"gibbs", {"beta", "trial", "seed", "kernel_size", "energy", "energy_excess", "witness"}, {}};
    ordered_json summaries = ordered_json::array();
    for (std::size_t b = 0; b < c.beta_grid.size(); ++b) {
        const double beta = c.beta_grid[b];
        struct Row {
            std::size_t kernel;
            double energy, witness;
        };
        std::vector<Row> rows(static_cast<std::size_t>(c.trials));
        parallel_for(rows.size(), threads, [&](std::size_t i) {
            Rng r(trial_seed(c.seed, i), 1000 + b);
            Kernel A;
            const auto tree = ht_sample(s, L, g, beta, r, &A);
            rows[i] = {A.size(), double(energy(tree)), witness_statistic(tree, L, s.d_star)};
        });
        std::vector<double> es, ws;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            t.add(beta, static_cast<int>(i), trial_seed(c.seed, i), static_cast<std::int64_t>(rows[i].kernel), rows[i].energy,
                  (rows[i].energy - ground) / double(s.n), rows[i].witness);
            es.push_back(rows[i].energy);
            ws.push_back(rows[i].witness);
        }
        ordered_json entry{{"beta", beta}, {"beta_bar", GibbsConfig::make(beta, s.n_total).beta_bar}};
        try {
            const auto opt = phi_tilde_opt(s, beta);
            entry["m_star_numeric"] = opt.m_star_numeric;
            entry["m_star_formula"] = opt.m_star_formula;
        } catch (const ParameterError&) {
            entry["m_star_numeric"] = nullptr;
            entry["m_star_formula"] = nullptr;
        }
        try {
            entry["logZ_formula"] = num(log_z_formula(s, beta).value);
        } catch (const std::exception&) {
            entry["logZ_formula"] = nullptr;
        }
        entry["energy_mean"] = mean_of(es);
        entry["witness_mean"] = mean_of(ws);
        std::string regime = "undefined";
        try {
            const auto& p = s.proxies;
            const double bc = critical_beta(p.delta, p.kappa);
            regime = std::string(regime_name(classify_regime(p.lambda, p.delta, p.kappa))) +
                     (beta > bc ? "/low-temperature" : "/high-temperature");
        } catch (const ParameterError&) {
        }
        entry["regime"] = regime;
        summaries.push_back(entry);
    }
    out.tables.push_back(std::move(t));
    out.results = {{"component_size", s.n}, {"d_star", s.d_star}, {"N_dstar", s.N_dstar}, {"ground_energy", ground},
                   {"summaries", summaries}};
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw OutputError("cannot write " + path.string());
    os << content;
    os.close();
    if (!os) throw OutputError("write failed for " + path.string());
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& c, int threads) {
    const auto report = validate_config(c);
    if (!report.ok()) throw ConfigError(report.text(), report.fields);
    // fail on an unusable output directory before any computation
    const std::filesystem::path dir(c.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw OutputError("cannot create output directory " + dir.string());
    Outputs o;
    if (c.experiment == "fig1-overlap") o = run_fig1(c, threads);
    else if (c.experiment == "heatmap-gamma") o = run_heatmap(c, true);
    else if (c.experiment == "heatmap-rho") o = run_heatmap(c, false);
    else if (c.experiment == "phase-diagram") o = run_phase(c);
    else if (c.experiment == "fpp-curves") o = run_fpp(c);
    else if (c.experiment == "replica") o = run_replica(c, threads);
    else if (c.experiment == "appendixF") o = run_appendix_f(c);
    else if (c.experiment == "gibbs") o = run_gibbs(c, threads);
    else throw UnknownExperimentError("unknown experiment '" + c.experiment + "'");

    RunOutput result;
    ordered_json files = ordered_json::array();
    for (const auto& t : o.tables) {
        std::string csv;
        for (std::size_t i = 0; i < t.columns.size(); ++i) csv += (i ? "," : "") + t.columns[i];
        csv += '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) csv += (i ? "," : "") + row[i];
            csv += '\n';
        }
        const auto path = dir / (t.name + ".csv");
        write_file(path, csv);
        result.files.push_back(path);
        files.push_back(path.filename().string());
    }
    const ordered_json summary{{"experiment", c.experiment}, {"version", version()}, {"config", config_json(c)},
                               {"csv_files", files}, {"results", o.results}};
    result.summary = summary.dump(2) + "\n";
    const auto path = dir / (c.experiment + "_summary.json");
    write_file(path, result.summary);
    result.files.push_back(path);
    return result;
}

}  // namespace ogp
