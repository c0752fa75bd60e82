#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "sgcurv/bounds.hpp"
#include "sgcurv/corpus.hpp"
#include "sgcurv/curvature.hpp"
#include "sgcurv/errors.hpp"
#include "sgcurv/report.hpp"
#include "sgcurv/repelling.hpp"
#include "sgcurv/verify.hpp"

namespace fs = std::filesystem;
using namespace sgcurv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitHypothesis = 2;

struct Options {
    std::string input;
    double epsilon = 0.0;
    bool has_epsilon = false;
    double tol = 1e-8;
    std::string out;
    std::string format = "json";
    bool force = false;
    std::vector<std::string> only;
    double from = 0.0;
    double to = 0.0;
    int steps = 1;
    double alpha = 0.1;
    double beta = 0.0;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::size_t corpus_size = 500;
    double perturb = 1.0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw Error("cannot write '" + o.out + "'");
    out << text;
}

std::string fmt12(double x) {
    const Json j = number(x);
    return j.is_string() ? j.get<std::string>() : j.dump();
}

struct Input {
    std::string bytes;
    SignedGraph graph;
};

Input load(const std::string& path) {
    Input in;
    in.bytes = read_file(path);
    in.graph = parse_edge_list(in.bytes);
    return in;
}

void require_admissible(const ConsensusIndex& index, double eps) {
    if (!index.admits(eps))
        throw PreconditionError("epsilon exceeds consensus index " + fmt12(*index.value));
}

std::string envelope(const Input& in, const std::string& command, Json payload) {
    ReportEnvelope e;
    e.input_digest = input_digest(in.bytes);
    e.command = command;
    e.payload = std::move(payload);
    return dump(to_json(e));
}

std::string curvature_csv(const CurvatureReport& c, const RepellingAnalysis& a) {
    std::ostringstream os;
    os << "u,v,sign,weight,omega,lambda,theta,heat_rate,kappa_lly\n";
    for (const auto& e : c.edges) {
        os << e.edge.u << ',' << e.edge.v << ',' << to_int(e.edge.sign) << ','
           << fmt12(e.edge.weight) << ',' << fmt12(a.omega(e.edge.u, e.edge.v)) << ','
           << fmt12(e.lambda) << ',' << fmt12(e.theta) << ',' << fmt12(e.heat_rate) << ','
           << (e.lly ? fmt12(e.lly->kappa) : "") << '\n';
    }
    return os.str();
}

int cmd_analyze(const Options& o) {
    const Input in = load(o.input);
    const ConsensusIndex index = consensus_index(in.graph, o.tol);
    if (!o.force) require_admissible(index, o.epsilon);
    AnalysisOptions opts;
    opts.require_consensus = !o.force;
    const RepellingAnalysis a = repelling_cost_matrix(in.graph, o.epsilon, opts);
    std::optional<CurvatureReport> curvature;
    std::string curvature_error;
    try {
        curvature = curvature_report(a);
    } catch (const Error& ex) {
        curvature_error = ex.what();
    }
    if (o.format == "csv") {
        if (!curvature) throw NumericalError(curvature_error);
        emit(o, curvature_csv(*curvature, a));
        return kExitOk;
    }
    Json payload;
    payload["graph"] = to_json(in.graph);
    payload["consensus_index"] = to_json(index);
    payload["analysis"] = to_json(a);
    payload["resistance"] = [&] {
        const ResistanceReport r = graph_resistance(a);
        return Json{{"W", number(r.w)},         {"spectral_W", number(r.spectral_w)},
                    {"lower", number(r.lower)}, {"upper", number(r.upper)},
                    {"identity_ok", r.identity_ok}};
    }();
    payload["curvature"] = curvature ? to_json(*curvature) : Json(curvature_error);
    emit(o, envelope(in, "analyze", std::move(payload)));
    return kExitOk;
}

int cmd_sweep(const Options& o) {
    const Input in = load(o.input);
    if (o.steps < 1) throw PreconditionError("--steps must be at least 1");
    if (o.to < o.from) throw PreconditionError("--to must not be below --from");
    const ConsensusIndex index = consensus_index(in.graph, o.tol);
    require_admissible(index, o.to);
    std::vector<double> grid;
    for (int s = 0; s < o.steps; ++s)
        grid.push_back(o.steps == 1 ? o.from : o.from + (o.to - o.from) * s / (o.steps - 1));

    struct Row {
        double eps, lambda2, w, tau_min, tau_max, theta_min, theta_max;
    };
    std::vector<Row> rows;
    AnalysisOptions opts;
    opts.with_simplex = false;
    for (const double eps : grid) {
        const RepellingAnalysis a = repelling_cost_matrix(in.graph, eps, opts);
        const CurvatureReport c = curvature_report(a, false);
        Row r{eps, a.spectrum.eigenvalues(1), a.resistance_sum, c.node.tau.minCoeff(),
              c.node.tau.maxCoeff(), INFINITY, -INFINITY};
        for (const auto& e : c.edges) {
            r.theta_min = std::min(r.theta_min, e.theta);
            r.theta_max = std::max(r.theta_max, e.theta);
        }
        rows.push_back(r);
    }
    const MonotonicityReport mono = monotonicity_check(in.graph, grid);

    if (o.format == "json") {
        Json table = Json::array();
        for (const auto& r : rows)
            table.push_back(Json{{"epsilon", number(r.eps)},
                                 {"lambda2", number(r.lambda2)},
                                 {"W", number(r.w)},
                                 {"tau_min", number(r.tau_min)},
                                 {"tau_max", number(r.tau_max)},
                                 {"theta_min", number(r.theta_min)},
                                 {"theta_max", number(r.theta_max)}});
        Json payload{{"rows", std::move(table)},
                     {"monotone", mono.monotone()},
                     {"min_slack", number(mono.min_slack)}};
        emit(o, envelope(in, "sweep", std::move(payload)));
        return kExitOk;
    }
    std::ostringstream os;
    os << "epsilon,lambda2,W,tau_min,tau_max,theta_min,theta_max\n";
    for (const auto& r : rows)
        os << fmt12(r.eps) << ',' << fmt12(r.lambda2) << ',' << fmt12(r.w) << ','
           << fmt12(r.tau_min) << ',' << fmt12(r.tau_max) << ',' << fmt12(r.theta_min) << ','
           << fmt12(r.theta_max) << '\n';
    os << "# monotone," << (mono.monotone() ? "true" : "false") << '\n';
    emit(o, os.str());
    return kExitOk;
}

int cmd_consensus(const Options& o) {
    const Input in = load(o.input);
    Json payload;
    payload["consensus_index"] = to_json(consensus_index(in.graph, o.tol));
    if (satisfies_no_negative_cycle(in.graph) && in.graph.has_negative_edges()) {
        const ConsensusUpperBound b = consensus_upper_bound(in.graph);
        Json per = Json::array();
        for (const auto& e : b.per_edge)
            per.push_back(Json{{"u", e.edge.u},
                               {"v", e.edge.v},
                               {"resistance", number(e.resistance)},
                               {"bound", number(e.bound)}});
        payload["upper_bound"] = Json{{"bound", number(*b.bound)}, {"per_edge", std::move(per)}};
    } else {
        payload["upper_bound"] = nullptr;
    }
    emit(o, envelope(in, "consensus", std::move(payload)));
    return kExitOk;
}

int cmd_curvature(const Options& o) {
    const Input in = load(o.input);
    require_admissible(consensus_index(in.graph, o.tol), o.epsilon);
    AnalysisOptions opts;
    opts.with_simplex = false;
    const RepellingAnalysis a = repelling_cost_matrix(in.graph, o.epsilon, opts);
    const CurvatureReport c = curvature_report(a);
    if (o.format == "csv") {
        emit(o, curvature_csv(c, a));
        return kExitOk;
    }
    emit(o, envelope(in, "curvature", to_json(c)));
    return kExitOk;
}

int cmd_bounds(const Options& o) {
    std::vector<fs::path> files;
    if (fs::is_directory(o.input)) {
        for (const auto& entry : fs::directory_iterator(o.input))
            if (entry.is_regular_file()) files.push_back(entry.path());
        std::sort(files.begin(), files.end());
    } else {
        files.emplace_back(o.input);
    }
    Json all = Json::array();
    std::string digests;
    int code = kExitOk;
    for (const auto& file : files) {
        Json item;
        item["file"] = file.filename().string();
        try {
            const Input in = load(file.string());
            digests += input_digest(in.bytes);
            const ConsensusIndex index = consensus_index(in.graph, o.tol);
            const double eps = o.has_epsilon ? o.epsilon
                                             : (index.value ? 0.5 * *index.value : 1.0);
            require_admissible(index, eps);
            item["epsilon"] = number(eps);
            Json reports = Json::array();
            for (const auto& b : check_all(in.graph, eps)) reports.push_back(to_json(b));
            item["reports"] = std::move(reports);
        } catch (const PreconditionError& ex) {
            item["error"] = ex.what();
            code = std::max(code, kExitHypothesis);
        } catch (const Error& ex) {
            item["error"] = ex.what();
            code = kExitError;
        }
        all.push_back(std::move(item));
    }
    ReportEnvelope e;
    e.input_digest = input_digest(digests);
    e.command = "bounds";
    e.payload = std::move(all);
    emit(o, dump(to_json(e)));
    return code;
}

int cmd_dynamics(const Options& o) {
    const Input in = load(o.input);
    auto rng = instance_rng(o.has_seed ? o.seed : corpus_seed(), 0);
    std::normal_distribution<double> gauss;
    Vector x0(static_cast<Eigen::Index>(in.graph.num_vertices()));
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = gauss(rng);
    const DynamicsReport d = simulate_repelling_dynamics(in.graph, o.alpha, o.beta, x0, o.steps);
    emit(o, envelope(in, "dynamics", to_json(d)));
    return kExitOk;
}

int cmd_verify(const Options& o) {
    VerifyOptions v;
    v.only.insert(o.only.begin(), o.only.end());
    if (o.has_seed) v.seed = o.seed;
    v.corpus_size = o.corpus_size;
    v.c3_weight_factor = o.perturb;
    const VerifyResult r = run_verify(v);
    if (o.format == "json") {
        Json checks = Json::array();
        for (const auto& c : r.checks)
            checks.push_back(Json{{"block", c.block},
                                  {"label", c.label},
                                  {"expected", c.expected ? number(*c.expected) : Json(nullptr)},
                                  {"computed", number(c.computed)},
                                  {"tol", number(c.tol)},
                                  {"pass", c.pass}});
        Json criteria = Json::array();
        for (const auto& c : r.criteria)
            criteria.push_back(Json{{"tag", c.tag},
                                    {"id", c.id},
                                    {"title", c.title},
                                    {"pass", c.pass},
                                    {"failed", c.failed},
                                    {"checks", c.checks}});
        emit(o, dump(Json{{"criteria", criteria}, {"checks", checks}, {"pass", r.all_pass()}}));
        return r.all_pass() ? kExitOk : kExitError;
    }
    std::ostringstream os;
    os << std::left << std::setw(16) << "block" << std::setw(72) << "check" << std::setw(20)
       << "expected" << std::setw(20) << "computed" << std::setw(10) << "tol"
       << "verdict\n";
    for (const auto& c : r.checks) {
        os << std::setw(16) << c.block << std::setw(72) << c.label << std::setw(20)
           << (c.expected ? fmt12(*c.expected) : "<= tol") << std::setw(20) << fmt12(c.computed)
           << std::setw(10) << fmt12(c.tol) << (c.pass ? "PASS" : "FAIL") << '\n';
    }
    os << '\n';
    for (const auto& c : r.criteria) {
        os << (c.pass ? "[PASS] " : "[FAIL] ")
           << (c.id > 0 ? "criterion " + std::to_string(c.id) : std::string("extra")) << "  "
           << c.title << "  (" << c.checks - c.failed << "/" << c.checks << " checks, "
           << fmt12(c.seconds) << " s)\n";
    }
    emit(o, os.str());
    return r.all_pass() ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Signed-graph repelling Laplacian analysis"};
    app.require_subcommand(1);
    Options o;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", o.input, "edge-list file")->required();
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tol", o.tol, "consensus index bisection tolerance");
        sub->add_option("--out", o.out, "write the report here instead of stdout");
    };
    auto* analyze = app.add_subcommand("analyze", "repelling analysis and curvature at one epsilon");
    add_input(analyze);
    add_common(analyze);
    analyze->add_option("--epsilon", o.epsilon)->required();
    analyze->add_flag("--force", o.force, "allow epsilon at or above the consensus index");
    analyze->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

    auto* sweep = app.add_subcommand("sweep", "tabulate lambda_2, W, tau, theta over an epsilon grid");
    add_input(sweep);
    add_common(sweep);
    sweep->add_option("--from", o.from)->required();
    sweep->add_option("--to", o.to)->required();
    sweep->add_option("--steps", o.steps, "number of grid points")->required();
    sweep->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

    auto* consensus = app.add_subcommand("consensus", "consensus index and its resistance bound");
    add_input(consensus);
    add_common(consensus);

    auto* curvature = app.add_subcommand("curvature", "node, edge and LLY curvatures");
    add_input(curvature);
    add_common(curvature);
    curvature->add_option("--epsilon", o.epsilon)->required();
    curvature->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

    auto* bounds = app.add_subcommand("bounds", "inequality checks for a file or a directory");
    bounds->add_option("--input", o.input, "edge-list file or directory")->required();
    add_common(bounds);
    bounds->add_option("--epsilon", o.epsilon, "default: half the consensus index")
        ->each([&](const std::string&) { o.has_epsilon = true; });

    auto* dynamics = app.add_subcommand("dynamics", "simulate X(t+1) = (I - alpha L+ + beta L-) X(t)");
    add_input(dynamics);
    add_common(dynamics);
    dynamics->add_option("--alpha", o.alpha);
    dynamics->add_option("--beta", o.beta);
    dynamics->add_option("--steps", o.steps);
    dynamics->add_option("--seed", o.seed)->each([&](const std::string&) { o.has_seed = true; });

    auto* verify = app.add_subcommand("verify-paper", "reproduce the reference tables and suites");
    verify->add_option("--only", o.only, "block tags to run")->check(CLI::IsMember(verify_tags()));
    verify->add_option("--seed", o.seed, "corpus seed (default SGCURV_SEED)")
        ->each([&](const std::string&) { o.has_seed = true; });
    verify->add_option("--corpus-size", o.corpus_size);
    verify->add_option("--perturb-weight", o.perturb, "scale the C3 edge (1,2) weight");
    verify->add_option("--out", o.out);
    verify->add_option("--format", o.format)->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (dynamics->parsed() && o.steps == 1) o.steps = 200;
    if (verify->parsed() && o.format == "json" && !verify->count("--format")) o.format = "text";
    if (sweep->parsed() && !sweep->count("--format")) o.format = "csv";

    try {
        if (analyze->parsed()) return cmd_analyze(o);
        if (sweep->parsed()) return cmd_sweep(o);
        if (consensus->parsed()) return cmd_consensus(o);
        if (curvature->parsed()) return cmd_curvature(o);
        if (bounds->parsed()) return cmd_bounds(o);
        if (dynamics->parsed()) return cmd_dynamics(o);
        if (verify->parsed()) return cmd_verify(o);
    } catch (const PreconditionError& e) {
        std::cerr << "sgcurv: " << e.what() << '\n';
        return kExitHypothesis;
    } catch (const std::exception& e) {
        std::cerr << "sgcurv: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
