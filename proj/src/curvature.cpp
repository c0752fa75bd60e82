#include "sgcurv/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sgcurv/errors.hpp"

namespace sgcurv {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void require_edge(const RepellingAnalysis& a, Vertex i, Vertex j) {
    if (!a.graph.find_edge(i, j))
        throw PreconditionError("(" + std::to_string(i) + ", " + std::to_string(j) +
                                ") is not an edge");
}

// sum_k Omega(j,k) w-_ik + sum_k Omega(i,k) w-_jk
double negative_cross_sum(const RepellingAnalysis& a, Vertex i, Vertex j) {
    double s = 0.0;
    for (const auto& inc : a.graph.incident(i)) {
        const Edge& e = a.graph.edge(inc.edge);
        if (e.sign == Sign::negative) s += a.omega(j, inc.neighbor) * e.weight;
    }
    for (const auto& inc : a.graph.incident(j)) {
        const Edge& e = a.graph.edge(inc.edge);
        if (e.sign == Sign::negative) s += a.omega(i, inc.neighbor) * e.weight;
    }
    return s;
}

double negative_degree(const RepellingAnalysis& a, Vertex i) {
    double d = 0.0;
    for (const auto& inc : a.graph.incident(i)) {
        const Edge& e = a.graph.edge(inc.edge);
        if (e.sign == Sign::negative) d += e.weight;
    }
    return d;
}

double neville_at_zero(std::span<const double> t, std::vector<double> p) {
    const std::size_t n = p.size();
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t k = 0; k + level < n; ++k)
            p[k] = (t[k + level] * p[k] - t[k] * p[k + 1]) / (t[k + level] - t[k]);
    return p.front();
}

SpectralDecomposition underlying_spectrum(const RepellingAnalysis& a) {
    return eigen_sym(laplacian(a.graph, LaplacianKind::underlying));
}

}  // namespace

NodeCurvature node_curvature(const RepellingAnalysis& analysis) {
    const std::size_t n = analysis.size();
    const Matrix& omega = analysis.omega.matrix();
    const Eigen::FullPivLU<Matrix> lu(omega);
    if (!lu.isInvertible()) throw NumericalError("node_curvature: Omega is numerically singular");
    NodeCurvature out;
    out.tau = lu.solve(Vector::Constant(idx(n), static_cast<double>(n)));
    out.phi = out.tau.sum();

    Vector closed = Vector::Constant(idx(n), 1.0);
    for (const auto& e : analysis.graph.edges()) {
        const double w = e.sign == Sign::positive ? e.weight : -analysis.epsilon * e.weight;
        const double half = 0.5 * w * analysis.omega(e.u, e.v);
        closed(idx(e.u)) -= half;
        closed(idx(e.v)) -= half;
    }
    closed *= out.phi;
    out.route_difference = (out.tau - closed).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, out.tau.cwiseAbs().maxCoeff());
    if (out.route_difference > 1e-8 * scale)
        throw NumericalError("node_curvature: linear solve and closed form differ by " +
                             std::to_string(out.route_difference));
    return out;
}

double edge_lambda(const RepellingAnalysis& analysis, Vertex i, Vertex j) {
    require_edge(analysis, i, j);
    const double o = analysis.omega(i, j);
    if (!(o > 0.0)) throw NumericalError("edge_lambda: Omega(i,j) is not positive");
    return negative_degree(analysis, i) + negative_degree(analysis, j) -
           negative_cross_sum(analysis, i, j) / o;
}

double edge_curvature(const RepellingAnalysis& analysis, const Vector& tau, Vertex i, Vertex j) {
    const double lambda = edge_lambda(analysis, i, j);
    return 2.0 * (tau(idx(i)) + tau(idx(j))) / analysis.omega(i, j) +
           (1.0 + analysis.epsilon) * lambda;
}

double edge_heat_rate(const RepellingAnalysis& analysis, const NodeCurvature& node, Vertex i,
                      Vertex j) {
    return edge_curvature(analysis, node.tau / node.phi, i, j);
}

double expected_cost_exact(const RepellingAnalysis& analysis, const SpectralDecomposition& q,
                           Vertex i, Vertex j, double t) {
    const Matrix e = matrix_exp(q, t).matrix();
    return e.col(idx(i)).dot(analysis.omega.matrix() * e.col(idx(j)));
}

double expected_cost_expansion(const RepellingAnalysis& analysis, const Vector& x, Vertex i,
                               Vertex j, double t) {
    const double o = analysis.omega(i, j);
    const double k = 1.0 + analysis.epsilon;
    return o - 2.0 * t * (x(idx(i)) + x(idx(j))) -
           t * k * (negative_degree(analysis, i) + negative_degree(analysis, j)) * o +
           t * k * negative_cross_sum(analysis, i, j);
}

HeatLimitEstimate heat_limit_estimate(const RepellingAnalysis& analysis, Vertex i, Vertex j,
                                      std::span<const double> t_seq) {
    require_edge(analysis, i, j);
    if (t_seq.empty()) throw PreconditionError("heat_limit_estimate: empty t sequence");
    for (std::size_t k = 0; k < t_seq.size(); ++k) {
        if (!(t_seq[k] > 0.0 && t_seq[k] <= 1.0))
            throw PreconditionError("heat_limit_estimate: t values must lie in (0, 1]");
        if (k > 0 && !(t_seq[k] < t_seq[k - 1]))
            throw PreconditionError("heat_limit_estimate: t sequence must be strictly decreasing");
    }
    const NodeCurvature node = node_curvature(analysis);
    const SpectralDecomposition q = underlying_spectrum(analysis);
    const Vector r = node.tau / node.phi;
    const double o = analysis.omega(i, j);

    HeatLimitEstimate out;
    out.theta = edge_curvature(analysis, node.tau, i, j);
    out.heat_rate = edge_curvature(analysis, r, i, j);
    std::vector<double> qs;
    for (const double t : t_seq) {
        HeatLimitRow row;
        row.t = t;
        row.q = (1.0 - expected_cost_exact(analysis, q, i, j, t) / o) / t;
        row.q_expansion = (1.0 - expected_cost_expansion(analysis, r, i, j, t) / o) / t;
        out.table.push_back(row);
        qs.push_back(row.q);
    }
    out.estimate = neville_at_zero(t_seq, qs);
    for (std::size_t k = 0; k + 1 < qs.size(); ++k) {
        out.theta_ratios.push_back(std::abs(qs[k] - out.theta) / std::abs(qs[k + 1] - out.theta));
        out.heat_rate_ratios.push_back(std::abs(qs[k] - out.heat_rate) /
                                       std::abs(qs[k + 1] - out.heat_rate));
    }
    return out;
}

Vector lazy_walk(const RepellingAnalysis& analysis, Vertex x, double alpha) {
    Vector m = Vector::Zero(idx(analysis.size()));
    m(idx(x)) = 1.0;
    for (const auto& inc : analysis.graph.incident(x)) {
        const double w = analysis.graph.edge(inc.edge).weight;
        m(idx(inc.neighbor)) += alpha * w;
        m(idx(x)) -= alpha * w;
    }
    return m;
}

LlyCurvature lly_curvature(const RepellingAnalysis& analysis, Vertex i, Vertex j,
                           std::optional<double> alpha0, double alpha_min, double rel_tol) {
    require_edge(analysis, i, j);
    const auto total = degrees(analysis.graph).total();
    const double d_max = *std::max_element(total.begin(), total.end());
    double alpha = alpha0.value_or(0.5 / d_max);
    if (!(alpha > 0.0) || alpha * d_max > 1.0)
        throw PreconditionError("lly_curvature: alpha must satisfy 0 < alpha * d_max <= 1");
    const Matrix& cost = analysis.omega.matrix();
    const double o = analysis.omega(i, j);
    auto kappa = [&](double a) {
        const double w1 = w1_exact(cost, lazy_walk(analysis, i, a), lazy_walk(analysis, j, a)).value;
        return (1.0 - w1 / o) / a;
    };

    LlyCurvature out;
    double prev = kappa(alpha);
    while (true) {
        const double half = kappa(0.5 * alpha);
        out.kappa = half;
        out.kappa_prev = prev;
        out.alpha = alpha;
        if (std::abs(half - prev) <= rel_tol * std::max(1.0, std::abs(half))) {
            out.stabilized = true;
            return out;
        }
        alpha *= 0.5;
        if (0.5 * alpha < alpha_min) return out;
        prev = half;
    }
}

ExtremalCosts extremal_costs(const RepellingAnalysis& analysis, const NodeCurvature& node) {
    const std::size_t n = analysis.size();
    ExtremalCosts out;
    out.x = -std::numeric_limits<double>::infinity();
    out.n = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            out.x = std::max(out.x, analysis.omega(i, j));
            out.n = std::min(out.n, analysis.omega(i, j));
        }
    }
    out.x_bound = 2.0 * static_cast<double>(n) / node.phi;
    out.n_bound = static_cast<double>(n) / node.phi;
    if (node.tau.minCoeff() >= 0.0) {
        const double slack = 1e-9 * std::max(1.0, out.x_bound);
        out.x_ok = out.x <= out.x_bound + slack;
        out.n_ok = out.n <= out.n_bound + slack;
        out.bounds_ok = *out.x_ok && *out.n_ok;
    }
    return out;
}

const EdgeCurvature* CurvatureReport::find(Vertex i, Vertex j) const {
    if (i > j) std::swap(i, j);
    for (const auto& e : edges)
        if (e.edge.u == i && e.edge.v == j) return &e;
    return nullptr;
}

CurvatureReport curvature_report(const RepellingAnalysis& analysis, bool with_lly) {
    CurvatureReport out;
    out.epsilon = analysis.epsilon;
    out.node = node_curvature(analysis);
    for (const auto& e : analysis.graph.edges()) {
        EdgeCurvature ec;
        ec.edge = e;
        ec.lambda = edge_lambda(analysis, e.u, e.v);
        ec.theta = edge_curvature(analysis, out.node.tau, e.u, e.v);
        ec.heat_rate = edge_heat_rate(analysis, out.node, e.u, e.v);
        if (with_lly) ec.lly = lly_curvature(analysis, e.u, e.v);
        out.edges.push_back(ec);
    }
    out.extremal = extremal_costs(analysis, out.node);
    return out;
}

}  // namespace sgcurv
