#include "sgcurv/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "sgcurv/bounds.hpp"
#include "sgcurv/corpus.hpp"
#include "sgcurv/curvature.hpp"
#include "sgcurv/errors.hpp"
#include "sgcurv/repelling.hpp"
#include "sgcurv/transport.hpp"

namespace sgcurv {

namespace {

using Index = Eigen::Index;
using Clock = std::chrono::steady_clock;

constexpr double kTableTol = 2e-3;
constexpr double kZeroTol = 5e-3;
constexpr double kIndexTol = 1e-3;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

class Recorder {
public:
    Recorder(VerifyResult& result, std::string block) : result_(result), block_(std::move(block)) {}

    void near(const std::string& label, double expected, double computed, double tol) {
        push({block_, label, expected, computed, tol,
              std::isfinite(computed) && std::abs(computed - expected) <= tol});
    }
    void at_most(const std::string& label, double computed, double tol) {
        push({block_, label, std::nullopt, computed, tol, std::isfinite(computed) && computed <= tol});
    }
    void count(const std::string& label, std::size_t failures) {
        at_most(label, static_cast<double>(failures), 0.0);
    }

private:
    void push(Check c) { result_.checks.push_back(std::move(c)); }

    VerifyResult& result_;
    std::string block_;
};

// Table entry: kind 't' = tau(a), 'l' = Lambda(a,b), 'h' = theta(a,b); labels 1-based.
struct Entry {
    char kind;
    int a;
    int b;
    double value;
    double tol = kTableTol;
};

struct Row {
    double eps;
    std::vector<Entry> entries;
};

struct Table {
    std::string name;
    SignedGraph graph;
    double eps0;
    std::vector<Row> rows;
};

std::string entry_label(double eps, const Entry& e) {
    std::string name = e.kind == 't' ? "tau(" + std::to_string(e.a) + ")"
                       : e.kind == 'l' ? "Lambda(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")"
                                       : "theta(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")";
    return "eps=" + fmt(eps) + " " + name;
}

void run_table(Recorder& rec, const Table& t) {
    const auto index = consensus_index(t.graph);
    rec.near(t.name + " eps0", t.eps0, index.value.value_or(INFINITY), kIndexTol);
    for (const Row& row : t.rows) {
        try {
            const RepellingAnalysis a = repelling_cost_matrix(t.graph, row.eps);
            const CurvatureReport c = curvature_report(a, false);
            for (const Entry& e : row.entries) {
                double value = NAN;
                if (e.kind == 't') {
                    value = c.node.tau(e.a - 1);
                } else if (const auto* ec = c.find(static_cast<Vertex>(e.a - 1),
                                                   static_cast<Vertex>(e.b - 1))) {
                    value = e.kind == 'l' ? ec->lambda : ec->theta;
                }
                rec.near(t.name + " " + entry_label(row.eps, e), e.value, value, e.tol);
            }
        } catch (const Error& ex) {
            rec.near(t.name + " eps=" + fmt(row.eps) + " analysis (" + ex.what() + ")", 0.0, NAN,
                     0.0);
        }
    }
}

std::vector<Entry> symmetric_thetas(const std::vector<std::pair<int, int>>& edges, double v,
                                    char kind = 'h') {
    std::vector<Entry> out;
    for (const auto& [a, b] : edges) out.push_back({kind, a, b, v});
    return out;
}

std::vector<Entry> concat(std::initializer_list<std::vector<Entry>> parts) {
    std::vector<Entry> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

SignedGraph k4_with_negatives(const std::vector<std::pair<int, int>>& negatives) {
    std::vector<std::array<int, 3>> edges;
    for (int a = 1; a <= 4; ++a) {
        for (int b = a + 1; b <= 4; ++b) {
            const bool neg = std::find(negatives.begin(), negatives.end(), std::pair{a, b}) !=
                             negatives.end();
            edges.push_back({a, b, neg ? -1 : 1});
        }
    }
    return graph_from_labels(4, edges);
}

// Lazily shared random corpus and its curvature reports.
struct Context {
    std::uint64_t seed;
    std::size_t size;
    std::optional<std::vector<CorpusInstance>> instances;
    std::optional<std::vector<CurvatureReport>> curvatures;

    const std::vector<CorpusInstance>& corpus_instances() {
        if (!instances) instances = corpus(seed, size);
        return *instances;
    }
    const std::vector<CurvatureReport>& corpus_curvatures() {
        if (!curvatures) {
            std::vector<CurvatureReport> out;
            AnalysisOptions opts;
            opts.with_simplex = false;
            for (const auto& inst : corpus_instances())
                out.push_back(curvature_report(repelling_cost_matrix(inst.graph, inst.epsilon, opts)));
            curvatures = std::move(out);
        }
        return *curvatures;
    }
};

struct HeatSample {
    std::size_t instance;
    Edge edge;
    HeatLimitEstimate estimate;
};

// t_scale shrinks the time sequence while keeping the same 20 edges.
std::vector<HeatSample> heat_samples(Context& ctx, double t_scale = 1.0) {
    const auto& inst = ctx.corpus_instances();
    auto rng = instance_rng(ctx.seed, 7777);
    std::uniform_int_distribution<std::size_t> pick_instance(0, inst.size() - 1);
    const std::vector<double> ts{0.02 * t_scale, 0.01 * t_scale, 0.005 * t_scale};
    std::vector<HeatSample> out;
    AnalysisOptions opts;
    opts.with_simplex = false;
    for (int s = 0; s < 20; ++s) {
        const std::size_t k = pick_instance(rng);
        const SignedGraph& g = inst[k].graph;
        std::uniform_int_distribution<std::size_t> pick_edge(0, g.num_edges() - 1);
        const Edge e = g.edge(pick_edge(rng));
        const auto a = repelling_cost_matrix(g, inst[k].epsilon, opts);
        out.push_back({k, e, heat_limit_estimate(a, e.u, e.v, ts)});
    }
    return out;
}

// ---- blocks ---------------------------------------------------------------

void block_example(Recorder& rec) {
    const SignedGraph g = graph_from_labels(3, {{1, 2, 1}, {1, 3, 1}, {2, 3, -1}});
    const auto start = Clock::now();
    const RepellingAnalysis a = repelling_cost_matrix(g, 0.25);
    const double elapsed = seconds_since(start);
    const double printed[3][3] = {
        {0.222, -0.111, -0.111}, {-0.111, 1.055, -0.944}, {-0.111, -0.944, 1.055}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            rec.near("pinv(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                     printed[i][j], a.pseudoinverse(i, j), kTableTol);
    double worst = 0.0;
    const Matrix& s = a.simplex->vertex_matrix;
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j)
            worst = std::max(worst, std::abs((s.row(i) - s.row(j)).squaredNorm() -
                                             a.omega(static_cast<std::size_t>(i),
                                                     static_cast<std::size_t>(j))));
    rec.at_most("max |simplex distance^2 - Omega|", worst, 1e-8);
    rec.at_most("runtime seconds", elapsed, 0.1);
}

Table c3_table(double weight_factor) {
    SignedGraph g = graph_from_labels(3, {{1, 2, 1}, {2, 3, 1}, {1, 3, -1}});
    if (weight_factor != 1.0) {
        std::vector<Edge> edges(g.edges().begin(), g.edges().end());
        for (auto& e : edges)
            if (e.u == 0 && e.v == 1) e.weight *= weight_factor;
        g = SignedGraph(3, std::move(edges));
    }
    const std::vector<Entry> lambdas{{'l', 1, 2, 0.0}, {'l', 2, 3, 0.0}, {'l', 1, 3, 2.0}};
    return {"C3",
            g,
            0.5,
            {{0.2, concat({{{'t', 2, 0, -0.5625}, {'t', 1, 0, 1.125}, {'t', 3, 0, 1.125},
                            {'h', 1, 2, 0.844}, {'h', 2, 3, 0.844}, {'h', 1, 3, 3.7501}},
                           lambdas})},
             {0.3, concat({{{'t', 2, 0, -0.7347}, {'t', 1, 0, 0.8571}, {'t', 3, 0, 0.8571},
                            {'h', 1, 2, 0.1399}, {'h', 2, 3, 0.1399}, {'h', 1, 3, 3.2857}},
                           lambdas})},
             {0.4999, concat({{{'t', 2, 0, -0.0012}, {'t', 1, 0, 0.0006}, {'t', 3, 0, 0.0006},
                               {'h', 1, 2, 0.0, kZeroTol}, {'h', 2, 3, 0.0, kZeroTol},
                               {'h', 1, 3, 2.9998}},
                              lambdas})}}};
}

Table c4_table() {
    const SignedGraph g = graph_from_labels(4, {{1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {1, 4, -1}});
    const std::vector<Entry> lambdas{{'l', 2, 3, 0.0}, {'l', 1, 4, 2.0}};
    auto row = [&](double eps, double t23, double t14, double h12, double h23, double h14,
                   double h23_tol) {
        return Row{eps, concat({{{'t', 2, 0, t23}, {'t', 3, 0, t23}, {'t', 1, 0, t14},
                                 {'t', 4, 0, t14}, {'h', 1, 2, h12}, {'h', 3, 4, h12},
                                 {'h', 2, 3, h23, h23_tol}, {'h', 1, 4, h14}},
                                lambdas})};
    };
    return {"C4",
            g,
            0.33329,
            {row(0.1, -0.2569, 1.156, 0.1985, -0.8991, 3.2789, kTableTol),
             row(0.2, -0.4211, 0.8421, -1.4387, -1.1229, 2.8491, kTableTol),
             row(0.3332, -0.0012, 0.0012, -3.9964, 0.0, 2.6664, kZeroTol)}};
}

std::vector<Table> k4_tables() {
    std::vector<Table> out;
    out.push_back(
        {"K4 one negative edge",
         k4_with_negatives({{1, 4}}),
         0.9999,
         {{0.5, concat({{{'t', 1, 0, 2.4242}, {'t', 4, 0, 2.4242}, {'t', 2, 0, -0.4848},
                         {'t', 3, 0, -0.4848}},
                        symmetric_thetas({{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}}, 0.0, 'l'),
                        {{'l', 1, 4, 2.0}},
                        symmetric_thetas({{1, 2}, {3, 4}, {2, 4}, {1, 3}}, 4.4329),
                        {{'h', 2, 3, -3.8784}, {'h', 1, 4, 7.8484}}})}}});
    out.push_back(
        {"K4 two opposite negative edges",
         k4_with_negatives({{1, 3}, {2, 4}}),
         1.0,
         {{0.5, concat({symmetric_thetas({{1, 0}, {2, 0}, {3, 0}, {4, 0}}, 0.8889, 't'),
                        symmetric_thetas({{1, 3}, {2, 4}}, 2.0, 'l'),
                        symmetric_thetas({{1, 2}, {1, 4}, {2, 3}, {3, 4}}, 0.0, 'l'),
                        symmetric_thetas({{1, 2}, {1, 4}, {2, 3}, {3, 4}}, 2.8445),
                        symmetric_thetas({{1, 3}, {2, 4}}, 4.7778)})}}});
    out.push_back({"K4 two adjacent negative edges",
                   k4_with_negatives({{1, 3}, {1, 4}}),
                   0.333,
                   {{0.1, {{'t', 1, 0, 1.7436}, {'t', 2, 0, -1.1454}, {'t', 3, 0, 1.1819},
                           {'t', 4, 0, 1.1819}, {'l', 1, 3, 2.7021}, {'l', 1, 4, 2.7021},
                           {'l', 2, 3, -0.7286}, {'l', 2, 4, -0.7286}, {'l', 1, 2, 0.843},
                           {'l', 3, 4, -4.7139}, {'h', 1, 3, 5.4994}, {'h', 1, 4, 5.4994},
                           {'h', 2, 3, -0.7033}, {'h', 2, 4, -0.7033}, {'h', 1, 2, 1.8578},
                           {'h', 3, 4, 1.6693}}}}});
    out.push_back(
        {"K4 negative triangle",
         k4_with_negatives({{2, 3}, {2, 4}, {3, 4}}),
         0.3333,
         {{0.1, concat({{{'t', 1, 0, -1.4979}, {'t', 2, 0, 1.037}, {'t', 3, 0, 1.037},
                         {'t', 4, 0, 1.037}},
                        symmetric_thetas({{1, 2}, {1, 3}, {1, 4}}, 0.0, 'l'),
                        symmetric_thetas({{2, 3}, {2, 4}, {3, 4}}, 2.0, 'l'),
                        symmetric_thetas({{1, 2}, {1, 3}, {1, 4}}, -0.717),
                        symmetric_thetas({{2, 3}, {2, 4}, {3, 4}}, 3.6518)})}}});
    return out;
}

Table k4_path_table() {
    return {"K4 negative path",
            k4_with_negatives({{1, 3}, {1, 4}, {2, 3}}),
            0.1715,
            {{0.1, {{'t', 1, 0, 0.8344}, {'t', 3, 0, 0.8344}, {'t', 2, 0, -0.3457},
                    {'t', 4, 0, -0.3457}, {'l', 1, 2, -6.1347}, {'l', 3, 4, -6.1347},
                    {'l', 1, 4, 2.6556}, {'l', 2, 3, 2.6556}, {'l', 1, 3, 3.9994},
                    {'l', 2, 4, 0.3492}, {'h', 1, 2, -6.0546}, {'h', 3, 4, -6.0546},
                    {'h', 1, 4, 3.16}, {'h', 2, 3, 3.16}, {'h', 1, 3, 4.8712},
                    {'h', 2, 4, -0.4258}}}}};
}

void block_identities(Recorder& rec, Context& ctx) {
    const auto start = Clock::now();
    const auto& inst = ctx.corpus_instances();
    double trace = 0.0;
    double spectral = 0.0;
    double block = 0.0;
    std::size_t lower = 0;
    std::size_t upper = 0;
    std::size_t errors = 0;
    for (const auto& c : inst) {
        try {
            const RepellingAnalysis a = repelling_cost_matrix(c.graph, c.epsilon);
            const ResistanceReport r = graph_resistance(a);
            trace = std::max(trace, trace_identity_residual(a));
            spectral = std::max(spectral, std::abs(r.w - r.spectral_w) / std::max(1.0, std::abs(r.w)));
            block = std::max(block, a.simplex->block_identity_error);
            if (!r.lower_strict) ++lower;
            if (!r.upper_ok) ++upper;
        } catch (const Error&) {
            ++errors;
        }
    }
    rec.count("instances raising errors", errors);
    rec.at_most("max trace identity residual", trace, 1e-8);
    rec.at_most("max relative W spectral identity residual", spectral, 1e-8);
    rec.at_most("max block identity error", block, 1e-7);
    rec.count("instances with |V|/lambda_2 >= W", lower);
    rec.count("instances with W > |V|(|V|-1)/lambda_2", upper);
    rec.at_most("runtime seconds", seconds_since(start), 60.0);
}

void block_inequalities(Recorder& rec, Context& ctx) {
    const auto& inst = ctx.corpus_instances();
    const auto& curv = ctx.corpus_curvatures();
    std::size_t mono = 0;
    std::size_t metric = 0;
    std::size_t above_lly = 0;
    std::size_t edges = 0;
    std::size_t mixing = 0;
    std::size_t errors = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> bound_counts;  // applicable, failed
    for (const std::string name : {"eigdeg", "main2", "main4", "main5"}) bound_counts[name] = {0, 0};
    std::normal_distribution<double> gauss;
    for (std::size_t k = 0; k < inst.size(); ++k) {
        const auto& c = inst[k];
        try {
            std::vector<double> grid;
            for (int s = 0; s < 10; ++s)
                grid.push_back(-1.0 + (0.95 * c.consensus_index + 1.0) * s / 9.0);
            if (!monotonicity_check(c.graph, grid).monotone()) ++mono;

            AnalysisOptions opts;
            opts.with_simplex = false;
            const RepellingAnalysis a = repelling_cost_matrix(c.graph, c.epsilon, opts);
            if (!sqrt_cost_metric_check(a.omega).sqrt_is_metric()) ++metric;

            for (const auto& e : curv[k].edges) {
                ++edges;
                if (e.theta > e.lly->kappa + 1e-7) ++above_lly;
            }
            for (const auto& b : check_all(c.graph, c.epsilon)) {
                const auto it = bound_counts.find(b.name);
                if (it == bound_counts.end() || b.applicability != Applicability::ok) continue;
                ++it->second.first;
                if (!*b.holds) ++it->second.second;
            }
            auto rng = instance_rng(ctx.seed, 50000 + k);
            const auto total = degrees(c.graph).total();
            const double t = 0.45 / *std::max_element(total.begin(), total.end());
            for (int f = 0; f < 20; ++f) {
                Vector x(static_cast<Index>(c.graph.num_vertices()));
                for (Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
                if (!mixing_rate_check(c.graph, t, x, 20).holds) ++mixing;
            }
        } catch (const Error&) {
            ++errors;
        }
    }
    rec.count("instances raising errors", errors);
    rec.count("instances with an Omega decrease on the grid", mono);
    rec.count("instances violating the sqrt(Omega) triangle inequality", metric);
    rec.count("edges with theta > kappa_LLY + 1e-7 (of " + std::to_string(edges) + ")", above_lly);
    for (const auto& [name, counts] : bound_counts)
        rec.count(name + " violations (applicable on " + std::to_string(counts.first) + ")",
                  counts.second);
    rec.count("mixing-rate violations (20 f per instance)", mixing);
}

void block_heat(Recorder& rec, Context& ctx) {
    std::size_t ratio_bad = 0;
    std::size_t limit_bad = 0;
    double worst = 0.0;
    for (const auto& s : heat_samples(ctx)) {
        for (const double r : s.estimate.theta_ratios)
            if (!(r >= 1.5 && r <= 2.5)) {
                ++ratio_bad;
                break;
            }
        const double gap = std::abs(s.estimate.estimate - s.estimate.theta);
        worst = std::max(worst, gap);
        if (!(gap <= 1e-4)) ++limit_bad;
    }
    rec.count("edges with a |q(t)-theta| halving ratio outside [1.5, 2.5] (of 20)", ratio_bad);
    rec.count("edges with |extrapolated - theta| > 1e-4 (of 20)", limit_bad);
    rec.at_most("max |extrapolated - theta|", worst, 1e-4);
}

void block_ot(Recorder& rec, Context& ctx) {
    const auto& inst = ctx.corpus_instances();
    double exact_diff = 0.0;
    double gap = 0.0;
    double infeasible = 0.0;
    double marginal = 0.0;
    std::size_t compared = 0;
    std::size_t solved = 0;
    auto record = [&](const Matrix& cost, const Vector& mu, const Vector& nu) {
        const TransportPlan p = w1_exact(cost, mu, nu);
        ++solved;
        gap = std::max(gap, std::abs(p.duality_gap));
        infeasible = std::max(infeasible, p.dual_infeasibility);
        marginal = std::max(marginal, (p.plan.rowwise().sum() - mu).cwiseAbs().maxCoeff());
        marginal = std::max(marginal, (p.plan.colwise().sum().transpose() - nu).cwiseAbs().maxCoeff());
        const auto small = [](const Vector& v) { return (v.array() > 0.0).count() <= 4; };
        if (small(mu) && small(nu)) {
            ++compared;
            exact_diff = std::max(exact_diff, std::abs(p.value - w1_vertex_enumeration(cost, mu, nu)));
        }
    };
    AnalysisOptions opts;
    opts.with_simplex = false;
    for (const auto& c : inst) {
        const RepellingAnalysis a = repelling_cost_matrix(c.graph, c.epsilon, opts);
        const auto total = degrees(c.graph).total();
        const double alpha = 0.5 / *std::max_element(total.begin(), total.end());
        for (const auto& e : c.graph.edges())
            record(a.omega.matrix(), lazy_walk(a, e.u, alpha), lazy_walk(a, e.v, alpha));
    }
    auto rng = instance_rng(ctx.seed, 8888);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> support(1, 4);
    for (int s = 0; s < 300; ++s) {
        const Index n = 6;
        Matrix cost(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) cost(i, j) = 5.0 * unit(rng);
        auto draw = [&] {
            std::vector<Index> ids(static_cast<std::size_t>(n));
            std::iota(ids.begin(), ids.end(), Index{0});
            std::shuffle(ids.begin(), ids.end(), rng);
            Vector p = Vector::Zero(n);
            const int k = support(rng);
            for (int t = 0; t < k; ++t) p(ids[static_cast<std::size_t>(t)]) = 0.05 + unit(rng);
            return Vector(p / p.sum());
        };
        record(cost, draw(), draw());
    }
    rec.at_most("max |simplex - vertex enumeration| (" + std::to_string(compared) + " problems)",
                exact_diff, 1e-10);
    rec.at_most("max |duality gap| (" + std::to_string(solved) + " problems)", gap, 1e-8);
    rec.at_most("max dual infeasibility", infeasible, 1e-10);
    rec.at_most("max marginal error", marginal, 1e-10);
}

void block_consensus_bound(Recorder& rec, Context& ctx, std::size_t count) {
    std::size_t violations = 0;
    double worst = -INFINITY;
    for (std::size_t k = 0; k < count; ++k) {
        auto rng = instance_rng(ctx.seed, 100000 + k);
        const SignedGraph g = random_no_negative_cycle_graph(rng);
        const double eps0 = *consensus_index(g).value;
        const double bound = *consensus_upper_bound(g).bound;
        worst = std::max(worst, eps0 - bound);
        if (eps0 > bound + 1e-6) ++violations;
    }
    rec.count("graphs with eps0 > min 1/(w r) + 1e-6 (of " + std::to_string(count) + ")",
              violations);
    rec.at_most("max eps0 - bound", worst, 1e-6);
    const std::pair<const char*, std::pair<SignedGraph, double>> series[] = {
        {"C3", {graph_from_labels(3, {{1, 2, 1}, {2, 3, 1}, {1, 3, -1}}), 0.5}},
        {"C4", {graph_from_labels(4, {{1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {1, 4, -1}}), 0.33329}}};
    for (const auto& [name, data] : series) {
        const double bound = *consensus_upper_bound(data.first).bound;
        rec.near(std::string(name) + " bound vs bisected eps0", *consensus_index(data.first).value,
                 bound, kIndexTol);
        rec.near(std::string(name) + " bound vs printed eps0", data.second, bound, kIndexTol);
    }
}

void block_heat_rate(Recorder& rec, Context& ctx) {
    const auto& inst = ctx.corpus_instances();
    const auto& curv = ctx.corpus_curvatures();
    std::size_t above_lly = 0;
    std::size_t edges = 0;
    std::size_t unstable = 0;
    std::size_t main5 = 0;
    std::size_t main5_applicable = 0;
    for (std::size_t k = 0; k < inst.size(); ++k) {
        for (const auto& e : curv[k].edges) {
            ++edges;
            if (e.heat_rate > e.lly->kappa + 1e-7) ++above_lly;
            if (!e.lly->stabilized) ++unstable;
        }
        const BoundReport b = check_lichnerowicz_edge_heat_rate(inst[k].graph, inst[k].epsilon);
        if (b.applicability == Applicability::ok) {
            ++main5_applicable;
            if (!*b.holds) ++main5;
        }
    }
    rec.count("edges with heat rate > kappa_LLY + 1e-7 (of " + std::to_string(edges) + ")", above_lly);
    rec.count("main5 violations with the heat rate (applicable on " +
                  std::to_string(main5_applicable) + ")",
              main5);
    rec.count("LLY evaluations without stabilization", unstable);
    std::size_t ratio_bad = 0;
    double worst = 0.0;
    for (const auto& s : heat_samples(ctx)) {
        for (const double r : s.estimate.heat_rate_ratios)
            if (!(r >= 1.5 && r <= 2.5)) {
                ++ratio_bad;
                break;
            }
        worst = std::max(worst, std::abs(s.estimate.estimate - s.estimate.heat_rate));
    }
    rec.count("edges with a |q(t)-heat rate| halving ratio outside [1.5, 2.5] (of 20)", ratio_bad);
    rec.at_most("max |extrapolated - heat rate|", worst, 1e-4);
    // The three-point remainder scales like t^3; a tenfold smaller sequence separates it
    // from a wrong limit.
    double fine = 0.0;
    for (const auto& s : heat_samples(ctx, 0.1))
        fine = std::max(fine, std::abs(s.estimate.estimate - s.estimate.heat_rate));
    rec.at_most("max |extrapolated - heat rate| with t/10", fine, 1e-4);
}

struct BlockSpec {
    std::string tag;
    int id;
    std::string title;
};

const std::vector<BlockSpec>& block_specs() {
    static const std::vector<BlockSpec> specs{
        {"example", 1, "worked 3-cycle example: pseudoinverse and simplex"},
        {"c3", 2, "C3 table: consensus index, tau, theta"},
        {"c4", 3, "C4 table: consensus index, tau, theta"},
        {"k4", 4, "K4 signature cases: consensus index, tau, Lambda, theta"},
        {"identities", 5, "identity suite on the random corpus"},
        {"inequalities", 6, "inequality suite on the random corpus"},
        {"heat", 7, "heat-limit convergence to theta"},
        {"ot", 8, "optimal transport exactness"},
        {"consensus-bound", 9, "consensus index upper bound 1/(w r)"},
        {"k4-path", 0, "K4 negative path case (extra)"},
        {"heat-rate", 0, "heat-rate curvature diagnostics (extra)"},
    };
    return specs;
}

}  // namespace

SignedGraph graph_from_labels(std::size_t n, const std::vector<std::array<int, 3>>& edges) {
    std::vector<Edge> out;
    for (const auto& [a, b, s] : edges)
        out.push_back({static_cast<Vertex>(a - 1), static_cast<Vertex>(b - 1), 1.0,
                       s < 0 ? Sign::negative : Sign::positive});
    return SignedGraph(n, std::move(out));
}

bool VerifyResult::all_pass() const {
    return std::all_of(criteria.begin(), criteria.end(),
                       [](const CriterionResult& c) { return c.id == 0 || c.pass; });
}

const std::vector<std::string>& verify_tags() {
    static const std::vector<std::string> tags = [] {
        std::vector<std::string> out;
        for (const auto& s : block_specs()) out.push_back(s.tag);
        return out;
    }();
    return tags;
}

VerifyResult run_verify(const VerifyOptions& options) {
    for (const auto& tag : options.only)
        if (std::find(verify_tags().begin(), verify_tags().end(), tag) == verify_tags().end())
            throw PreconditionError("unknown verify tag '" + tag + "'");
    VerifyResult result;
    Context ctx{options.seed.value_or(corpus_seed()), options.corpus_size, {}, {}};
    const std::map<std::string, std::function<void(Recorder&)>> runners{
        {"example", [&](Recorder& r) { block_example(r); }},
        {"c3", [&](Recorder& r) { run_table(r, c3_table(options.c3_weight_factor)); }},
        {"c4", [&](Recorder& r) { run_table(r, c4_table()); }},
        {"k4",
         [&](Recorder& r) {
             for (const auto& t : k4_tables()) run_table(r, t);
         }},
        {"identities", [&](Recorder& r) { block_identities(r, ctx); }},
        {"inequalities", [&](Recorder& r) { block_inequalities(r, ctx); }},
        {"heat", [&](Recorder& r) { block_heat(r, ctx); }},
        {"ot", [&](Recorder& r) { block_ot(r, ctx); }},
        {"consensus-bound",
         [&](Recorder& r) { block_consensus_bound(r, ctx, options.bound_corpus_size); }},
        {"k4-path", [&](Recorder& r) { run_table(r, k4_path_table()); }},
        {"heat-rate", [&](Recorder& r) { block_heat_rate(r, ctx); }},
    };
    for (const auto& spec : block_specs()) {
        if (!options.only.empty() && !options.only.count(spec.tag)) continue;
        const std::size_t first = result.checks.size();
        Recorder rec(result, spec.tag);
        const auto start = Clock::now();
        try {
            runners.at(spec.tag)(rec);
        } catch (const std::exception& ex) {
            rec.at_most(std::string("block aborted: ") + ex.what(), 1.0, 0.0);
        }
        CriterionResult c;
        c.tag = spec.tag;
        c.id = spec.id;
        c.title = spec.title;
        c.seconds = seconds_since(start);
        c.checks = result.checks.size() - first;
        for (std::size_t k = first; k < result.checks.size(); ++k)
            if (!result.checks[k].pass) ++c.failed;
        c.pass = c.checks > 0 && c.failed == 0;
        result.criteria.push_back(c);
    }
    return result;
}

}  // namespace sgcurv
