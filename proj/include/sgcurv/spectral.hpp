#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>

#include "sgcurv/signed_graph.hpp"

namespace sgcurv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real symmetric matrix. Construction checks symmetry (1e-12 per
/// entry, absolute) and finiteness, then stores the exact symmetric part.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(Matrix m, double tol = 1e-12);

    static SymMatrix zero(std::size_t n);
    static SymMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const Matrix& matrix() const noexcept { return m_; }
    double operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    double max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

private:
    Matrix m_;
};

enum class LaplacianKind { positive, negative, underlying };

/// L_+, L_- or Q = L_+ + L_- of the signed graph.
SymMatrix laplacian(const SignedGraph& g, LaplacianKind which);

/// Ascending eigenpairs; eigenvectors are the columns of `eigenvectors`.
struct SpectralDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;
    double residual = 0.0;  ///< max |Mv - lambda v| over all pairs
    int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal norm falls to
/// max(tol, 4 eps_mach) * ||M||_F, at most 100 sweeps. Each eigenvector is
/// oriented so its largest-magnitude component (lowest index on ties) is
/// nonnegative.
SpectralDecomposition eigen_sym(const SymMatrix& m, double tol = 0.0);

struct PsdRank {
    bool is_psd = false;
    std::size_t rank = 0;
};

double default_zero_tol(const SpectralDecomposition& d);
PsdRank psd_rank(const SpectralDecomposition& d, std::optional<double> zero_tol = std::nullopt);
PsdRank psd_rank(const SymMatrix& m, std::optional<double> zero_tol = std::nullopt);

/// Smallest eigenvalue of M on the orthogonal complement of the all-ones
/// vector. Equals lambda_2 for a PSD Laplacian with rank n-1, and goes
/// negative once M stops being PSD on that complement.
double min_eigenvalue_off_constants(const SymMatrix& m);

/// Pseudoinverse from the eigenpairs with |lambda| above the zero tolerance.
SymMatrix pseudoinverse_spectral(const SpectralDecomposition& d);

/// (M + J/n)^{-1} - J/n, valid when the null space of M is span{1}.
SymMatrix pseudoinverse_shifted(const SymMatrix& m);

/// Moore-Penrose pseudoinverse of a Laplacian-like matrix whose null space
/// is exactly span{1}. Both routes above are evaluated and must agree to
/// 1e-8 relative to max(1, ||M^+||_max); throws PreconditionError on a wrong
/// null space and NumericalError when the routes disagree.
SymMatrix pseudoinverse_laplacian(const SymMatrix& m);
SymMatrix pseudoinverse_laplacian(const SymMatrix& m, const SpectralDecomposition& d);

/// exp(-t M) via the eigendecomposition.
SymMatrix matrix_exp(const SymMatrix& m, double t);
SymMatrix matrix_exp(const SpectralDecomposition& d, double t);

}  // namespace sgcurv
