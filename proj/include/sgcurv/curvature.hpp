#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sgcurv/repelling.hpp"
#include "sgcurv/transport.hpp"

namespace sgcurv {

struct NodeCurvature {
    Vector tau;
    double phi = 0.0;
    /// max |tau_solve - tau_closed_form|
    double route_difference = 0.0;
};

/// Solves Omega tau = |V| 1 and cross-checks the closed form
/// tau(i) = phi (1 - 1/2 sum_j (w+_ij - eps w-_ij) Omega(i,j)).
NodeCurvature node_curvature(const RepellingAnalysis& analysis);

/// (d-_i + d-_j) - [sum_k Omega(j,k) w-_ik + sum_k Omega(i,k) w-_jk] / Omega(i,j).
double edge_lambda(const RepellingAnalysis& analysis, Vertex i, Vertex j);

/// 2 (tau(i) + tau(j)) / Omega(i,j) + (1 + eps) Lambda(i,j).
double edge_curvature(const RepellingAnalysis& analysis, const Vector& tau, Vertex i, Vertex j);

/// Same shape as edge_curvature with tau replaced by tau / phi, the
/// circumcenter coordinates. This is the t -> 0 rate of the heat-semigroup
/// expected cost, and differs from edge_curvature unless phi = 1.
double edge_heat_rate(const RepellingAnalysis& analysis, const NodeCurvature& node, Vertex i,
                      Vertex j);

/// e_i^T exp(-Qt) Omega exp(-Qt) e_j with Q the underlying Laplacian.
double expected_cost_exact(const RepellingAnalysis& analysis, const SpectralDecomposition& q,
                           Vertex i, Vertex j, double t);

/// First-order expansion Omega(i,j) - 2t (x_i + x_j) - t(1+eps)(d-_i + d-_j) Omega(i,j)
/// + t(1+eps)(sum_k Omega(j,k) w-_ik + sum_k Omega(i,k) w-_jk) for node weights x.
double expected_cost_expansion(const RepellingAnalysis& analysis, const Vector& x, Vertex i,
                               Vertex j, double t);

struct HeatLimitRow {
    double t = 0.0;
    double q = 0.0;            ///< from the matrix exponential
    double q_expansion = 0.0;  ///< from the expansion with x = tau / phi
};

struct HeatLimitEstimate {
    std::vector<HeatLimitRow> table;
    /// Polynomial extrapolation of q(t) to t = 0 (Neville).
    double estimate = 0.0;
    double theta = 0.0;
    double heat_rate = 0.0;
    /// |q(t_k) - theta| / |q(t_{k+1}) - theta| for consecutive rows.
    std::vector<double> theta_ratios;
    /// Same ratios against heat_rate.
    std::vector<double> heat_rate_ratios;
};

/// t_seq must be strictly decreasing, positive and at most 1.
HeatLimitEstimate heat_limit_estimate(const RepellingAnalysis& analysis, Vertex i, Vertex j,
                                      std::span<const double> t_seq);

struct LlyCurvature {
    double kappa = 0.0;       ///< kappa(alpha / 2) at the accepted step
    double kappa_prev = 0.0;  ///< kappa(alpha)
    double alpha = 0.0;
    bool stabilized = false;
};

/// kappa(alpha) = (1 - W1(m_i, m_j) / Omega(i,j)) / alpha, m_x = (I - alpha Q) e_x,
/// halving alpha from alpha0 (default 1/(2 d_max)) until two consecutive values
/// agree within rel_tol (relative, floor 1) or alpha drops below alpha_min.
LlyCurvature lly_curvature(const RepellingAnalysis& analysis, Vertex i, Vertex j,
                           std::optional<double> alpha0 = std::nullopt, double alpha_min = 1e-6,
                           double rel_tol = 1e-9);

/// Lazy-walk distribution (I - alpha Q) e_x.
Vector lazy_walk(const RepellingAnalysis& analysis, Vertex x, double alpha);

struct ExtremalCosts {
    double x = 0.0;  ///< max off-diagonal Omega
    double n = 0.0;  ///< min off-diagonal Omega
    double x_bound = 0.0;  ///< 2|V| / phi
    double n_bound = 0.0;  ///< |V| / phi
    /// Each verdict is empty when some tau(i) < 0 (hypothesis not met).
    std::optional<bool> x_ok;
    /// The N bound fails already on the unit triangle; see the README.
    std::optional<bool> n_ok;
    std::optional<bool> bounds_ok;  ///< x_ok && n_ok
};

ExtremalCosts extremal_costs(const RepellingAnalysis& analysis, const NodeCurvature& node);

struct EdgeCurvature {
    Edge edge;
    double lambda = 0.0;
    double theta = 0.0;
    double heat_rate = 0.0;
    std::optional<LlyCurvature> lly;
};

struct CurvatureReport {
    double epsilon = 0.0;
    NodeCurvature node;
    std::vector<EdgeCurvature> edges;  ///< in edge-id order
    ExtremalCosts extremal;

    const EdgeCurvature* find(Vertex i, Vertex j) const;
};

CurvatureReport curvature_report(const RepellingAnalysis& analysis, bool with_lly = true);

}  // namespace sgcurv
