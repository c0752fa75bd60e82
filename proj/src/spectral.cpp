#include "sgcurv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sgcurv/errors.hpp"

namespace sgcurv {

namespace {

using Index = Eigen::Index;

constexpr int kMaxSweeps = 100;

}  // namespace

SymMatrix::SymMatrix(Matrix m, double tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw Error("SymMatrix: matrix is not square");
    if (!m_.allFinite()) throw Error("SymMatrix: non-finite entry");
    if (m_.size() > 0 && (m_ - m_.transpose()).cwiseAbs().maxCoeff() > tol)
        throw Error("SymMatrix: matrix is not symmetric");
    m_ = 0.5 * (m_ + m_.transpose());
}

SymMatrix SymMatrix::zero(std::size_t n) {
    return SymMatrix(Matrix::Zero(static_cast<Index>(n), static_cast<Index>(n)));
}

SymMatrix SymMatrix::identity(std::size_t n) {
    return SymMatrix(Matrix::Identity(static_cast<Index>(n), static_cast<Index>(n)));
}

SymMatrix laplacian(const SignedGraph& g, LaplacianKind which) {
    const auto n = static_cast<Index>(g.num_vertices());
    Matrix m = Matrix::Zero(n, n);
    for (const auto& e : g.edges()) {
        const bool take = which == LaplacianKind::underlying ||
                          (which == LaplacianKind::positive) == (e.sign == Sign::positive);
        if (!take) continue;
        const auto u = static_cast<Index>(e.u);
        const auto v = static_cast<Index>(e.v);
        m(u, u) += e.weight;
        m(v, v) += e.weight;
        m(u, v) -= e.weight;
        m(v, u) -= e.weight;
    }
    return SymMatrix(std::move(m));
}

SpectralDecomposition eigen_sym(const SymMatrix& m, double tol) {
    const Index n = static_cast<Index>(m.size());
    Matrix a = m.matrix();
    Matrix v = Matrix::Identity(n, n);
    const double norm = a.norm();
    const double threshold =
        std::max(tol, 4.0 * std::numeric_limits<double>::epsilon()) * std::max(norm, 1e-300);

    auto off_norm = [&] {
        double s = 0.0;
        for (Index p = 0; p < n; ++p)
            for (Index q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
        return std::sqrt(s);
    };

    int sweep = 0;
    bool converged = n <= 1 || off_norm() <= threshold;
    while (!converged && sweep < kMaxSweeps) {
        ++sweep;
        for (Index p = 0; p < n - 1; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // A <- J^T A J with the rotation acting on rows/columns p and q.
                for (Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
        converged = off_norm() <= threshold;
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index x, Index y) { return a(x, x) < a(y, y); });

    SpectralDecomposition d;
    d.eigenvalues.resize(n);
    d.eigenvectors.resize(n, n);
    d.sweeps = sweep;
    for (Index k = 0; k < n; ++k) {
        const Index src = order[static_cast<std::size_t>(k)];
        d.eigenvalues(k) = a(src, src);
        Vector col = v.col(src);
        Index best = 0;
        for (Index r = 1; r < n; ++r)
            if (std::abs(col(r)) > std::abs(col(best)) * (1.0 + 1e-12)) best = r;
        if (col(best) < 0.0) col = -col;
        d.eigenvectors.col(k) = col;
    }
    d.residual = n == 0 ? 0.0
                        : (m.matrix() * d.eigenvectors -
                           d.eigenvectors * d.eigenvalues.asDiagonal())
                              .cwiseAbs()
                              .maxCoeff();
    if (!converged)
        throw NumericalError("eigen_sym: no convergence after " + std::to_string(kMaxSweeps) +
                             " sweeps, residual " + std::to_string(d.residual));
    return d;
}

double default_zero_tol(const SpectralDecomposition& d) {
    const double top = d.eigenvalues.size() == 0 ? 0.0 : d.eigenvalues.cwiseAbs().maxCoeff();
    return 1e-9 * std::max(1.0, top);
}

PsdRank psd_rank(const SpectralDecomposition& d, std::optional<double> zero_tol) {
    const double tol = zero_tol.value_or(default_zero_tol(d));
    PsdRank out;
    out.is_psd = d.eigenvalues.size() == 0 || d.eigenvalues(0) >= -tol;
    for (Index k = 0; k < d.eigenvalues.size(); ++k)
        if (d.eigenvalues(k) > tol) ++out.rank;
    return out;
}

PsdRank psd_rank(const SymMatrix& m, std::optional<double> zero_tol) {
    return psd_rank(eigen_sym(m), zero_tol);
}

double min_eigenvalue_off_constants(const SymMatrix& m) {
    const std::size_t n = m.size();
    if (n < 2) throw PreconditionError("min_eigenvalue_off_constants: needs n >= 2");
    // M + s J/n has the constants as an eigenvector with eigenvalue s and
    // leaves the complement untouched; s above the spectral radius pushes it
    // to the top.
    const double shift = 1.0 + m.matrix().norm();
    const Index nn = static_cast<Index>(n);
    Matrix shifted = m.matrix() + Matrix::Constant(nn, nn, shift / static_cast<double>(n));
    return eigen_sym(SymMatrix(std::move(shifted), 1e-9)).eigenvalues(0);
}

SymMatrix pseudoinverse_spectral(const SpectralDecomposition& d) {
    const double tol = default_zero_tol(d);
    const Index n = d.eigenvalues.size();
    Matrix out = Matrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
        const double lambda = d.eigenvalues(k);
        if (std::abs(lambda) <= tol) continue;
        out += (d.eigenvectors.col(k) / lambda) * d.eigenvectors.col(k).transpose();
    }
    return SymMatrix(std::move(out), 1e-9);
}

SymMatrix pseudoinverse_shifted(const SymMatrix& m) {
    const Index n = static_cast<Index>(m.size());
    const Matrix j = Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
    const Eigen::PartialPivLU<Matrix> lu(m.matrix() + j);
    Matrix inv = lu.inverse() - j;
    return SymMatrix(0.5 * (inv + inv.transpose()), 1e-9);
}

SymMatrix pseudoinverse_laplacian(const SymMatrix& m) {
    return pseudoinverse_laplacian(m, eigen_sym(m));
}

SymMatrix pseudoinverse_laplacian(const SymMatrix& m, const SpectralDecomposition& d) {
    const std::size_t n = m.size();
    if (n == 0) return SymMatrix::zero(0);
    const double scale = std::max(1.0, m.max_abs());
    const Vector ones = Vector::Ones(static_cast<Index>(n));
    if ((m.matrix() * ones).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw PreconditionError("pseudoinverse_laplacian: all-ones vector is not in the null space");
    const double tol = default_zero_tol(d);
    std::size_t nullity = 0;
    for (Index k = 0; k < d.eigenvalues.size(); ++k)
        if (std::abs(d.eigenvalues(k)) <= tol) ++nullity;
    if (nullity != 1)
        throw PreconditionError("pseudoinverse_laplacian: null space has dimension " +
                                std::to_string(nullity) + ", expected 1");

    SymMatrix spectral = pseudoinverse_spectral(d);
    const SymMatrix shifted = pseudoinverse_shifted(m);
    const double diff = (spectral.matrix() - shifted.matrix()).cwiseAbs().maxCoeff();
    if (diff > 1e-8 * std::max(1.0, spectral.max_abs()))
        throw NumericalError("pseudoinverse_laplacian: eigen and shift routes differ by " +
                             std::to_string(diff));
    return spectral;
}

SymMatrix matrix_exp(const SpectralDecomposition& d, double t) {
    const Vector scaled = (-t * d.eigenvalues.array()).exp().matrix();
    Matrix out = d.eigenvectors * scaled.asDiagonal() * d.eigenvectors.transpose();
    return SymMatrix(0.5 * (out + out.transpose()), 1e-9);
}

SymMatrix matrix_exp(const SymMatrix& m, double t) { return matrix_exp(eigen_sym(m), t); }

}  // namespace sgcurv
