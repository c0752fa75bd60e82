#include "sgcurv/repelling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "sgcurv/errors.hpp"

namespace sgcurv {

namespace {

using Index = Eigen::Index;

constexpr int kMaxDoublings = 60;

Index idx(std::size_t i) { return static_cast<Index>(i); }

std::string edge_name(const Edge& e) {
    return "(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")";
}

void require_positive_connected(const SignedGraph& g, const char* where) {
    if (!is_positive_connected(g))
        throw PreconditionError(std::string(where) + ": graph is not positive-connected");
}

}  // namespace

SymMatrix repelling_laplacian(const SignedGraph& g, double eps) {
    const SymMatrix lp = laplacian(g, LaplacianKind::positive);
    const SymMatrix lm = laplacian(g, LaplacianKind::negative);
    return SymMatrix(lp.matrix() - eps * lm.matrix());
}

double spectral_gap(const SignedGraph& g, double eps) {
    return min_eigenvalue_off_constants(repelling_laplacian(g, eps));
}

ConsensusIndex consensus_index(const SignedGraph& g, double tol) {
    require_positive_connected(g, "consensus_index");
    ConsensusIndex out;
    if (!g.has_negative_edges()) {
        const double inf = std::numeric_limits<double>::infinity();
        out.bracket = {inf, inf};
        return out;
    }
    if (!(tol > 0.0)) throw PreconditionError("consensus_index: tolerance must be positive");

    const auto plus = eigen_sym(laplacian(g, LaplacianKind::positive));
    const auto minus = eigen_sym(laplacian(g, LaplacianKind::negative));
    // Weyl: gap(lo) >= lambda_2(L+) - lo * lambda_max(L-) = 0.
    double lo = plus.eigenvalues(1) / minus.eigenvalues(minus.eigenvalues.size() - 1);
    double hi = 2.0 * lo;

    auto sample = [&](double eps) {
        const double gap = spectral_gap(g, eps);
        out.lambda2_at.emplace_back(eps, gap);
        return gap;
    };

    int doublings = 0;
    while (sample(hi) > 0.0) {
        if (++doublings > kMaxDoublings) {
            out.bracket = {lo, hi};
            out.warning = "no sign change of lambda_2 after " + std::to_string(kMaxDoublings) +
                          " doublings; reporting +infinity";
            return out;
        }
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (sample(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    out.bracket = {lo, hi};
    out.value = 0.5 * (lo + hi);
    std::sort(out.lambda2_at.begin(), out.lambda2_at.end());
    return out;
}

bool satisfies_no_negative_cycle(const SignedGraph& g, std::pair<Edge, Edge>* offending) {
    const auto blocks = edge_blocks(g);
    std::map<std::size_t, std::size_t> first_negative;
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
        if (g.edge(k).sign != Sign::negative) continue;
        const auto [it, inserted] = first_negative.emplace(blocks[k], k);
        if (!inserted) {
            if (offending) *offending = {g.edge(it->second), g.edge(k)};
            return false;
        }
    }
    return true;
}

ConsensusUpperBound consensus_upper_bound(const SignedGraph& g) {
    require_positive_connected(g, "consensus_upper_bound");
    std::pair<Edge, Edge> bad;
    if (!satisfies_no_negative_cycle(g, &bad))
        throw PreconditionError("consensus_upper_bound: negative edges " + edge_name(bad.first) +
                                " and " + edge_name(bad.second) + " share a cycle");
    ConsensusUpperBound out;
    if (!g.has_negative_edges()) return out;
    const SymMatrix pinv = pseudoinverse_laplacian(laplacian(g, LaplacianKind::positive));
    for (const auto& e : g.edges()) {
        if (e.sign != Sign::negative) continue;
        const double r = pinv(e.u, e.u) + pinv(e.v, e.v) - 2.0 * pinv(e.u, e.v);
        const double bound = 1.0 / (e.weight * r);
        out.per_edge.push_back({e, r, bound});
        out.bound = out.bound ? std::min(*out.bound, bound) : bound;
    }
    return out;
}

std::optional<BalanceWitness> balanced_not_psd_witness(const SignedGraph& g, double eps,
                                                       double a) {
    const auto verdict = balance_check(g);
    if (!verdict.balanced) throw PreconditionError("balanced_not_psd_witness: graph is unbalanced");
    if (!(eps > 0.0)) throw PreconditionError("balanced_not_psd_witness: eps must be positive");
    if (a == 1.0) throw PreconditionError("balanced_not_psd_witness: a must differ from 1");
    if (!g.has_negative_edges()) return std::nullopt;

    BalanceWitness w;
    w.f = Vector::Constant(idx(g.num_vertices()), a);
    for (const Vertex x : *verdict.bipartition) w.f(idx(x)) = 1.0;
    const SymMatrix l = repelling_laplacian(g, eps);
    w.quadratic_form = w.f.dot(l.matrix() * w.f);
    return w;
}

RepellingAnalysis repelling_cost_matrix(const SignedGraph& g, double eps,
                                        const AnalysisOptions& options) {
    const std::size_t n = g.num_vertices();
    if (n < 2) throw PreconditionError("repelling_cost_matrix: needs at least two vertices");
    require_positive_connected(g, "repelling_cost_matrix");

    RepellingAnalysis a;
    a.graph = g;
    a.epsilon = eps;
    a.laplacian = repelling_laplacian(g, eps);
    a.spectrum = eigen_sym(a.laplacian);
    const PsdRank pr = psd_rank(a.spectrum);
    a.below_consensus_index = pr.is_psd && pr.rank + 1 == n;
    if (options.require_consensus && !a.below_consensus_index)
        throw PreconditionError("epsilon " + std::to_string(eps) +
                                " is not below the consensus index (L_eps is not PSD of rank n-1)");
    a.pseudoinverse = pseudoinverse_laplacian(a.laplacian, a.spectrum);

    const Matrix& p = a.pseudoinverse.matrix();
    Matrix omega = Matrix::Zero(idx(n), idx(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Vector d = Vector::Zero(idx(n));
            d(idx(i)) = 1.0;
            d(idx(j)) = -1.0;
            omega(idx(i), idx(j)) = omega(idx(j), idx(i)) = d.dot(p * d);
        }
    }
    const Vector zeta = p.diagonal();
    const Vector ones = Vector::Ones(idx(n));
    Matrix via_zeta = zeta * ones.transpose() + ones * zeta.transpose() - 2.0 * p;
    via_zeta.diagonal().setZero();
    const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
    if ((omega - via_zeta).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw NumericalError("repelling_cost_matrix: Omega routes disagree");
    a.omega = SymMatrix(std::move(omega));

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a.resistance_sum += a.omega(i, j);

    if (options.with_simplex && a.below_consensus_index) a.simplex = simplex_embedding(a);
    return a;
}

SimplexData simplex_embedding(const RepellingAnalysis& analysis) {
    const std::size_t n = analysis.size();
    const auto& spec = analysis.spectrum;
    const double tol = default_zero_tol(spec);

    SimplexData s;
    s.vertex_matrix.resize(idx(n), idx(n - 1));
    Index col = 0;
    for (Index k = 0; k < spec.eigenvalues.size(); ++k) {
        const double lambda = spec.eigenvalues(k);
        if (std::abs(lambda) <= tol) continue;
        if (lambda < 0.0 || col == idx(n - 1))
            throw PreconditionError("simplex_embedding: L_eps is not PSD of rank n-1");
        s.vertex_matrix.col(col++) = spec.eigenvectors.col(k) / std::sqrt(lambda);
    }
    if (col != idx(n - 1)) throw PreconditionError("simplex_embedding: rank is not n-1");

    const Matrix& omega = analysis.omega.matrix();
    const Eigen::FullPivLU<Matrix> lu(omega);
    if (!lu.isInvertible())
        throw NumericalError("simplex_embedding: Omega is singular (internal inconsistency)");
    const Vector ones = Vector::Ones(idx(n));
    const Vector y = lu.solve(ones);
    const double total = ones.dot(y);
    if (!(total > 0.0))
        throw NumericalError("simplex_embedding: 1^T Omega^-1 1 is not positive");
    s.barycentric_circumcenter = y / total;
    s.circumradius = std::sqrt(1.0 / (2.0 * total));

    s.altitudes.resize(idx(n));
    const Matrix& l = analysis.laplacian.matrix();
    for (std::size_t i = 0; i < n; ++i) s.altitudes(idx(i)) = 1.0 / std::sqrt(l(idx(i), idx(i)));

    const Index m = idx(n) + 1;
    Matrix left = Matrix::Zero(m, m);
    left.block(0, 1, 1, m - 1) = ones.transpose();
    left.block(1, 0, m - 1, 1) = ones;
    left.block(1, 1, m - 1, m - 1) = omega;
    left *= -0.5;
    Matrix right(m, m);
    right(0, 0) = 4.0 * s.circumradius * s.circumradius;
    right.block(0, 1, 1, m - 1) = -2.0 * s.barycentric_circumcenter.transpose();
    right.block(1, 0, m - 1, 1) = -2.0 * s.barycentric_circumcenter;
    right.block(1, 1, m - 1, m - 1) = l;
    s.block_identity_error = (left * right - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
    return s;
}

MetricCheck sqrt_cost_metric_check(const SymMatrix& omega, double slack_tol) {
    const std::size_t n = omega.size();
    MetricCheck out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double root_slack = std::sqrt(omega(i, k)) + std::sqrt(omega(k, j)) -
                                          std::sqrt(omega(i, j));
                if (root_slack < -slack_tol) out.sqrt_violations.push_back({i, k, j, root_slack});
                const double slack = omega(i, k) + omega(k, j) - omega(i, j);
                if (slack < -slack_tol) out.omega_violations.push_back({i, k, j, slack});
            }
        }
    }
    return out;
}

ResistanceReport graph_resistance(const RepellingAnalysis& analysis) {
    const auto n = static_cast<double>(analysis.size());
    const auto& ev = analysis.spectrum.eigenvalues;
    const double tol = default_zero_tol(analysis.spectrum);
    ResistanceReport r;
    r.w = analysis.resistance_sum;
    double inv_sum = 0.0;
    for (Index k = 0; k < ev.size(); ++k)
        if (std::abs(ev(k)) > tol) inv_sum += 1.0 / ev(k);
    r.spectral_w = n * inv_sum;
    r.lambda2 = ev(1);
    r.lower = n / r.lambda2;
    r.upper = n * (n - 1.0) / r.lambda2;
    const double scale = std::max(1.0, std::abs(r.w));
    r.identity_ok = std::abs(r.w - r.spectral_w) <= 1e-8 * scale;
    r.lower_strict = r.w - r.lower > 1e-10 * scale;
    r.upper_ok = r.w <= r.upper + 1e-9 * scale;
    return r;
}

MonotonicityReport monotonicity_check(const SignedGraph& g, std::span<const double> eps_grid,
                                      double slack_tol) {
    if (!std::is_sorted(eps_grid.begin(), eps_grid.end()))
        throw PreconditionError("monotonicity_check: grid must be ascending");
    const auto index = consensus_index(g);
    for (const double eps : eps_grid)
        if (!index.admits(eps))
            throw PreconditionError("monotonicity_check: grid point " + std::to_string(eps) +
                                    " is not below the consensus index");
    MonotonicityReport out;
    out.grid.assign(eps_grid.begin(), eps_grid.end());
    AnalysisOptions opts;
    opts.with_simplex = false;
    for (const double eps : eps_grid) out.omegas.push_back(repelling_cost_matrix(g, eps, opts).omega);

    const std::size_t n = g.num_vertices();
    out.min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t s = 1; s < out.omegas.size(); ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double diff = out.omegas[s](i, j) - out.omegas[s - 1](i, j);
                out.min_slack = std::min(out.min_slack, diff);
                if (diff < -slack_tol)
                    out.violations.push_back({i, j, out.grid[s - 1], out.grid[s], -diff});
            }
        }
    }
    if (out.omegas.size() < 2) out.min_slack = 0.0;
    return out;
}

double trace_identity_residual(const RepellingAnalysis& analysis) {
    double sum = 0.0;
    for (const auto& e : analysis.graph.edges()) {
        const double w = e.sign == Sign::positive ? e.weight : -analysis.epsilon * e.weight;
        sum += 2.0 * w * analysis.omega(e.u, e.v);
    }
    return std::abs(sum - 2.0 * (static_cast<double>(analysis.size()) - 1.0));
}

double trace_sandwich_residual(const RepellingAnalysis& analysis, const Matrix& b) {
    const Matrix& l = analysis.laplacian.matrix();
    const Matrix lbl = l * b * l;
    const double lhs = lbl.cwiseProduct(analysis.omega.matrix()).sum();
    return std::abs(lhs + 2.0 * (l * b).trace());
}

}  // namespace sgcurv
