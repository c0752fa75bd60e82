#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sgcurv/signed_graph.hpp"
#include "sgcurv/spectral.hpp"

namespace sgcurv {

/// L_eps = L_+ - eps L_-. eps = -1 gives the underlying Laplacian.
SymMatrix repelling_laplacian(const SignedGraph& g, double eps);

/// Smallest eigenvalue of L_eps on the complement of the constants; this is
/// lambda_2(L_eps) whenever eps is below the consensus index.
double spectral_gap(const SignedGraph& g, double eps);

struct ConsensusIndex {
    /// Empty when the graph has no negative edge (consensus index +infinity).
    std::optional<double> value;
    std::pair<double, double> bracket{0.0, 0.0};
    /// (eps, gap) samples visited by the doubling and bisection phases.
    std::vector<std::pair<double, double>> lambda2_at;
    std::optional<std::string> warning;

    bool is_infinite() const noexcept { return !value.has_value(); }
    /// True iff eps is strictly below the index.
    bool admits(double eps) const noexcept { return !value || eps < *value; }
};

/// Bisects the sign change of eps -> spectral_gap(g, eps), starting from
/// lambda_2(L_+)/lambda_max(L_-) and doubling upward. Requires a
/// positive-connected graph.
ConsensusIndex consensus_index(const SignedGraph& g, double tol = 1e-8);

struct NegativeEdgeBound {
    Edge edge;
    double resistance = 0.0;  ///< effective resistance in (V, E+, w+)
    double bound = 0.0;       ///< 1 / (w * r)
};

struct ConsensusUpperBound {
    std::vector<NegativeEdgeBound> per_edge;
    /// Minimum over negative edges; empty for an all-positive graph.
    std::optional<double> bound;
};

/// True iff no cycle contains two distinct negative edges, i.e. every
/// biconnected block carries at most one negative edge. On failure the
/// offending pair is written to `offending` when given.
bool satisfies_no_negative_cycle(const SignedGraph& g,
                                 std::pair<Edge, Edge>* offending = nullptr);

/// Certified upper bound on the consensus index under the "no negative
/// cycle" assumption. Throws PreconditionError naming the offending pair.
ConsensusUpperBound consensus_upper_bound(const SignedGraph& g);

struct BalanceWitness {
    Vector f;
    double quadratic_form = 0.0;  ///< f^T L_eps f
};

/// For a balanced graph with negative edges: f = 1 on the Harary side of
/// vertex 0 and `a` on the other side, for which f^T L_eps f < 0. Returns
/// nothing when E- is empty. Throws PreconditionError if unbalanced, eps <= 0
/// or a == 1.
std::optional<BalanceWitness> balanced_not_psd_witness(const SignedGraph& g, double eps,
                                                       double a = 0.0);

struct SimplexData {
    /// n x (n-1); row i is vertex v_i. Centroid at the origin.
    Matrix vertex_matrix;
    double circumradius = 0.0;
    Vector barycentric_circumcenter;
    Vector altitudes;
    /// max-entry deviation from identity of the 2x2 block product linking
    /// (Omega, 1) with (L_eps, r, R).
    double block_identity_error = 0.0;
};

struct RepellingAnalysis {
    SignedGraph graph;
    double epsilon = 0.0;
    SymMatrix laplacian;
    SymMatrix pseudoinverse;
    SymMatrix omega;
    SpectralDecomposition spectrum;
    double resistance_sum = 0.0;  ///< W_eps = sum over i<j of Omega(i,j)
    /// False only when built with require_consensus = false and L_eps is
    /// not PSD on the complement of the constants.
    bool below_consensus_index = true;
    std::optional<SimplexData> simplex;

    std::size_t size() const noexcept { return graph.num_vertices(); }
};

struct AnalysisOptions {
    /// Reject eps at or above the consensus index (PreconditionError).
    bool require_consensus = true;
    bool with_simplex = true;
};

/// Omega(i,j) = (e_i - e_j)^T L_eps^+ (e_i - e_j), cross-checked against
/// zeta 1^T + 1 zeta^T - 2 L_eps^+. Requires n >= 2, a positive-connected
/// graph and (by default) eps below the consensus index.
RepellingAnalysis repelling_cost_matrix(const SignedGraph& g, double eps,
                                        const AnalysisOptions& options = {});

SimplexData simplex_embedding(const RepellingAnalysis& analysis);

struct TriangleViolation {
    Vertex i = 0;
    Vertex k = 0;
    Vertex j = 0;
    double slack = 0.0;  ///< d(i,k) + d(k,j) - d(i,j); negative means violated
};

struct MetricCheck {
    std::vector<TriangleViolation> sqrt_violations;
    /// Reported for information: Omega itself need not be a metric.
    std::vector<TriangleViolation> omega_violations;

    bool sqrt_is_metric() const noexcept { return sqrt_violations.empty(); }
    bool omega_is_metric() const noexcept { return omega_violations.empty(); }
};

MetricCheck sqrt_cost_metric_check(const SymMatrix& omega, double slack_tol = 1e-10);

struct ResistanceReport {
    double w = 0.0;              ///< sum over pairs
    double spectral_w = 0.0;     ///< n * sum 1/lambda_k over nonzero eigenvalues
    double lambda2 = 0.0;
    double lower = 0.0;          ///< n / lambda_2
    double upper = 0.0;          ///< n (n - 1) / lambda_2
    bool identity_ok = false;    ///< |w - spectral_w| <= 1e-8 relative
    bool lower_strict = false;   ///< lower < w (equality when n == 2)
    bool upper_ok = false;       ///< w <= upper (+1e-9 relative)
};

ResistanceReport graph_resistance(const RepellingAnalysis& analysis);

struct MonotonicityViolation {
    Vertex i = 0;
    Vertex j = 0;
    double eps_lo = 0.0;
    double eps_hi = 0.0;
    double drop = 0.0;
};

struct MonotonicityReport {
    std::vector<double> grid;
    std::vector<SymMatrix> omegas;
    std::vector<MonotonicityViolation> violations;
    double min_slack = 0.0;  ///< min over pairs/steps of Omega_hi - Omega_lo

    bool monotone() const noexcept { return violations.empty(); }
};

/// Checks Omega_{eps1}(i,j) <= Omega_{eps2}(i,j) + slack_tol over consecutive
/// grid points. Grid must be ascending and below the consensus index.
MonotonicityReport monotonicity_check(const SignedGraph& g, std::span<const double> eps_grid,
                                      double slack_tol = 1e-9);

/// | sum_{i,j} (w+_ij - eps w-_ij) Omega(i,j) - 2(n-1) |
double trace_identity_residual(const RepellingAnalysis& analysis);

/// | sum_{i,j} (L B L)_ij Omega(i,j) + 2 tr(L B) | for symmetric B.
double trace_sandwich_residual(const RepellingAnalysis& analysis, const Matrix& b);

}  // namespace sgcurv
