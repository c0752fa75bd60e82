#include "sgcurv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgcurv/errors.hpp"

namespace sgcurv {

namespace {

using Index = Eigen::Index;

BoundReport verdict(std::string name, double lhs, double rhs, std::string note = {}) {
    BoundReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.holds = lhs <= rhs + kBoundTol * std::max(1.0, std::abs(rhs));
    r.note = std::move(note);
    return r;
}

BoundReport unmet(std::string name, std::string note, double lhs = 0.0, double rhs = 0.0) {
    BoundReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.applicability = Applicability::hypothesis_unmet;
    r.note = std::move(note);
    return r;
}

RepellingAnalysis analyze(const SignedGraph& g, double eps) {
    AnalysisOptions opts;
    opts.with_simplex = false;
    return repelling_cost_matrix(g, eps, opts);
}

double mu2_underlying(const SignedGraph& g) {
    return eigen_sym(laplacian(g, LaplacianKind::underlying)).eigenvalues(1);
}

BoundReport edge_bound(const SignedGraph& g, double eps, bool heat_rate) {
    const char* name = heat_rate ? "main5-heat-rate" : "main5";
    const RepellingAnalysis a = analyze(g, eps);
    const CurvatureReport c = curvature_report(a, false);
    double k = std::numeric_limits<double>::infinity();
    for (const auto& e : c.edges) k = std::min(k, heat_rate ? e.heat_rate : e.theta);
    const double mu2 = mu2_underlying(g);
    if (!(k > 0.0)) return unmet(name, "minimum edge curvature is not positive", k, mu2);
    return verdict(name, k, mu2);
}

}  // namespace

BoundReport check_eigdeg(const SignedGraph& g, double eps) {
    const RepellingAnalysis a = analyze(g, eps);
    const Degrees d = degrees(g);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < g.num_vertices(); ++x) m = std::max(m, d.plus[x] - eps * d.minus[x]);
    const double lambda2 = a.spectrum.eigenvalues(1);
    if (g.is_complete()) return unmet("eigdeg", "underlying graph is complete", lambda2, m);
    return verdict("eigdeg", lambda2, m);
}

BoundReport check_main2(const SignedGraph& g, double eps) {
    const RepellingAnalysis a = analyze(g, eps);
    const double lambda2 = a.spectrum.eigenvalues(1);
    if (!is_negative_connected(g))
        return unmet("main2", "negative subgraph is not connected", lambda2);
    const Degrees d = degrees(g);
    const double d_plus_max = *std::max_element(d.plus.begin(), d.plus.end());
    double mu0 = std::numeric_limits<double>::infinity();
    for (const auto& e : g.edges())
        if (e.sign == Sign::negative) mu0 = std::min(mu0, e.weight);
    const auto diameter = static_cast<double>(hop_diameter(g));
    const auto n = static_cast<double>(g.num_vertices());
    return verdict("main2", lambda2, 2.0 * d_plus_max - eps * mu0 / (diameter * n));
}

BoundReport check_lichnerowicz_node(const SignedGraph& g, double eps) {
    const RepellingAnalysis a = analyze(g, eps);
    const NodeCurvature node = node_curvature(a);
    const double k = node.tau.minCoeff();
    const double lambda2 = a.spectrum.eigenvalues(1);
    const double lhs = 2.0 * k / static_cast<double>(g.num_vertices());
    if (!(k > 0.0)) return unmet("main4", "minimum node curvature is not positive", lhs, lambda2);
    return verdict("main4", lhs, lambda2);
}

BoundReport check_lichnerowicz_edge(const SignedGraph& g, double eps) {
    return edge_bound(g, eps, false);
}

BoundReport check_lichnerowicz_edge_heat_rate(const SignedGraph& g, double eps) {
    return edge_bound(g, eps, true);
}

BoundReport check_coro2_lower(const SignedGraph& g, double eps) {
    const RepellingAnalysis a = analyze(g, eps);
    const ResistanceReport r = graph_resistance(a);
    if (g.num_vertices() == 2)
        return verdict("coro2-lower", r.lower, r.w, "equality expected for two vertices");
    BoundReport b = verdict("coro2-lower", r.lower, r.w, "strict");
    b.holds = r.lower_strict;
    return b;
}

BoundReport check_coro2_upper(const SignedGraph& g, double eps) {
    const RepellingAnalysis a = analyze(g, eps);
    const ResistanceReport r = graph_resistance(a);
    return verdict("coro2-upper", r.w, r.upper);
}

std::vector<BoundReport> check_all(const SignedGraph& g, double eps) {
    return {check_eigdeg(g, eps),
            check_main2(g, eps),
            check_lichnerowicz_node(g, eps),
            check_lichnerowicz_edge(g, eps),
            check_lichnerowicz_edge_heat_rate(g, eps),
            check_coro2_lower(g, eps),
            check_coro2_upper(g, eps)};
}

MixingReport mixing_rate_check(const SignedGraph& g, double t, const Vector& f, int steps) {
    const auto n = static_cast<Index>(g.num_vertices());
    if (f.size() != n) throw PreconditionError("mixing_rate_check: f has the wrong length");
    const auto total = degrees(g).total();
    const double d_max = total.empty() ? 0.0 : *std::max_element(total.begin(), total.end());
    if (!(t > 0.0) || !(t * 2.0 * d_max < 1.0))
        throw PreconditionError("mixing_rate_check: t must lie in (0, 1/(2 d_max))");
    const SymMatrix q = laplacian(g, LaplacianKind::underlying);
    MixingReport out;
    out.t = t;
    out.mu2 = n >= 2 ? eigen_sym(q).eigenvalues(1) : 0.0;
    const Matrix p = Matrix::Identity(n, n) - t * q.matrix();
    const double mean = f.mean();
    const double norm = f.norm();
    Vector x = f;
    for (int s = 1; s <= steps; ++s) {
        x = p * x;
        MixingRow row;
        row.step = s;
        row.lhs = (x - Vector::Constant(n, mean)).norm();
        row.rhs = std::pow(1.0 - t * out.mu2, s) * norm;
        if (row.lhs > row.rhs + kBoundTol * std::max(1.0, row.rhs)) out.holds = false;
        out.rows.push_back(row);
    }
    return out;
}

DynamicsReport simulate_repelling_dynamics(const SignedGraph& g, double alpha, double beta,
                                           const Vector& x0, int steps) {
    const auto n = static_cast<Index>(g.num_vertices());
    if (!(alpha > 0.0)) throw PreconditionError("simulate_repelling_dynamics: alpha must be positive");
    if (x0.size() != n) throw PreconditionError("simulate_repelling_dynamics: X0 has the wrong length");
    if (steps < 1) throw PreconditionError("simulate_repelling_dynamics: steps must be positive");
    const SymMatrix l = repelling_laplacian(g, beta / alpha);
    const Matrix m = Matrix::Identity(n, n) - alpha * l.matrix();

    DynamicsReport out;
    out.alpha = alpha;
    out.beta = beta;
    const SpectralDecomposition spec = eigen_sym(l);
    // Drop the eigenvector closest to the constants; the rest span 1-perp.
    Index constant_mode = 0;
    double best = -1.0;
    for (Index k = 0; k < n; ++k) {
        const double align = std::abs(spec.eigenvectors.col(k).sum());
        if (align > best) {
            best = align;
            constant_mode = k;
        }
    }
    for (Index k = 0; k < n; ++k)
        if (k != constant_mode)
            out.predicted_rate =
                std::max(out.predicted_rate, std::abs(1.0 - alpha * spec.eigenvalues(k)));

    Vector d = x0 - Vector::Constant(n, x0.mean());
    double log_norm = std::log(d.norm());
    out.disagreement.push_back(d.norm());
    double last_log_step = 0.0;
    for (int s = 1; s <= steps; ++s) {
        const double before = d.norm();
        if (before == 0.0) {
            out.disagreement.push_back(0.0);
            continue;
        }
        d /= before;
        d = m * d;
        d -= Vector::Constant(n, d.mean());
        last_log_step = std::log(d.norm());
        log_norm += last_log_step;
        out.disagreement.push_back(std::exp(log_norm));
    }
    out.fitted_rate = std::exp(last_log_step);
    out.decays = out.fitted_rate < 1.0;
    return out;
}

}  // namespace sgcurv
