#pragma once

#include <optional>
#include <vector>

#include "sgcurv/spectral.hpp"

namespace sgcurv {

struct DualPotentials {
    Vector source;  ///< phi, defined on every vertex
    Vector target;  ///< psi, defined on every vertex
};

/// Optimal coupling of two distributions on the same vertex set.
struct TransportPlan {
    Matrix plan;
    double value = 0.0;
    std::optional<DualPotentials> duals;
    /// value - (mu . phi + nu . psi); zero at optimality.
    double duality_gap = 0.0;
    /// max over all (x, y) of phi(x) + psi(y) - cost(x, y), clamped at 0.
    double dual_infeasibility = 0.0;
    int pivots = 0;
};

/// Exact Wasserstein-1 by the transportation simplex on supp(mu) x supp(nu):
/// northwest-corner start, MODI potentials, Bland's rule for entering and
/// leaving cells. Potentials are extended off the supports by c-transforms.
/// Throws PreconditionError when mu or nu is negative, of the wrong size, or
/// does not sum to 1 within 1e-12.
TransportPlan w1_exact(const Matrix& cost, const Vector& mu, const Vector& nu);

/// Minimum of the objective over every vertex of the transportation polytope,
/// found by enumerating spanning trees of supp(mu) x supp(nu). Exponential;
/// intended for supports of at most four points each.
double w1_vertex_enumeration(const Matrix& cost, const Vector& mu, const Vector& nu);

}  // namespace sgcurv
