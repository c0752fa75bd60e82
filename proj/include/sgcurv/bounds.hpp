#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgcurv/curvature.hpp"
#include "sgcurv/repelling.hpp"

namespace sgcurv {

enum class Applicability { ok, hypothesis_unmet };

/// lhs <= rhs is the claimed inequality; holds is empty when the bound's
/// hypothesis is not met.
struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<bool> holds;
    double slack = 0.0;  ///< rhs - lhs
    Applicability applicability = Applicability::ok;
    std::string note;
};

inline constexpr double kBoundTol = 1e-9;

/// lambda_2(L_eps) <= max_x (d+_x - eps d-_x) on non-complete graphs.
BoundReport check_eigdeg(const SignedGraph& g, double eps);

/// lambda_2(L_eps) <= 2 d+_max - eps mu-_0 / (D n) when both sign classes are
/// connected; D is the hop diameter of the underlying graph.
BoundReport check_main2(const SignedGraph& g, double eps);

/// 2 K / |V| <= lambda_2(L_eps) with K = min tau > 0.
BoundReport check_lichnerowicz_node(const SignedGraph& g, double eps);

/// k <= mu_2(Q) with k = min edge curvature > 0.
BoundReport check_lichnerowicz_edge(const SignedGraph& g, double eps);

/// As check_lichnerowicz_edge with the heat-rate form of the edge curvature.
BoundReport check_lichnerowicz_edge_heat_rate(const SignedGraph& g, double eps);

/// |V| / lambda_2 < W_eps (strict for |V| >= 3, equality at |V| = 2).
BoundReport check_coro2_lower(const SignedGraph& g, double eps);

/// W_eps <= |V| (|V| - 1) / lambda_2.
BoundReport check_coro2_upper(const SignedGraph& g, double eps);

/// Runs every check above (the heat-rate variant included).
std::vector<BoundReport> check_all(const SignedGraph& g, double eps);

struct MixingRow {
    int step = 0;
    double lhs = 0.0;  ///< ||P_t^n f - mean(f) 1||_2
    double rhs = 0.0;  ///< (1 - t mu_2)^n ||f||_2
};

struct MixingReport {
    double t = 0.0;
    double mu2 = 0.0;
    std::vector<MixingRow> rows;
    bool holds = true;
};

/// Lazy walk P_t = I - tQ. Requires 0 < t < 1 / (2 d_max).
MixingReport mixing_rate_check(const SignedGraph& g, double t, const Vector& f, int steps);

struct DynamicsReport {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> disagreement;  ///< ||X(t) - mean 1||_2, t = 0..steps
    double fitted_rate = 0.0;          ///< last-step growth factor
    double predicted_rate = 0.0;       ///< max over 1-perp of |1 - alpha lambda_k(L_{beta/alpha})|
    bool decays = false;
};

/// X(t+1) = (I - alpha L+ + beta L-) X(t), i.e. I - alpha L_{beta/alpha}. The
/// disagreement component is renormalized every step, so long runs neither
/// overflow nor underflow; the reported norms are reconstructed from logs.
DynamicsReport simulate_repelling_dynamics(const SignedGraph& g, double alpha, double beta,
                                           const Vector& x0, int steps);

}  // namespace sgcurv
