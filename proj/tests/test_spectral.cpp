#include "doctest.h"
#include "oracles.hpp"
#include "sgcurv/corpus.hpp"
#include "sgcurv/errors.hpp"
#include "sgcurv/repelling.hpp"
#include "sgcurv/spectral.hpp"
#include "sgcurv/verify.hpp"

using namespace sgcurv;
using Eigen::Index;

namespace {

SignedGraph example_triangle() {
    return graph_from_labels(3, {{1, 2, 1}, {1, 3, 1}, {2, 3, -1}});
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("laplacian of the worked triangle") {
    const SignedGraph g = example_triangle();
    Matrix lp(3, 3);
    lp << 2, -1, -1, -1, 1, 0, -1, 0, 1;
    Matrix lm(3, 3);
    lm << 0, 0, 0, 0, 1, -1, 0, -1, 1;
    CHECK(max_abs(laplacian(g, LaplacianKind::positive).matrix() - lp) == 0.0);
    CHECK(max_abs(laplacian(g, LaplacianKind::negative).matrix() - lm) == 0.0);
    CHECK(max_abs(laplacian(g, LaplacianKind::underlying).matrix() - (lp + lm)) == 0.0);
    CHECK(max_abs(laplacian(SignedGraph(3, {}), LaplacianKind::underlying).matrix()) == 0.0);
}

TEST_CASE("laplacians annihilate the constants") {
    for (std::uint64_t k = 0; k < 50; ++k) {
        auto rng = instance_rng(10, k);
        const SignedGraph g = random_signed_graph(rng);
        for (const auto kind : {LaplacianKind::positive, LaplacianKind::negative, LaplacianKind::underlying}) {
            const Matrix m = laplacian(g, kind).matrix();
            const Vector ones = Vector::Ones(m.rows());
            CHECK(max_abs(m * ones) <= 1e-10 * std::max(1.0, max_abs(m)));
        }
    }
}

TEST_CASE("SymMatrix validates") {
    Matrix bad(2, 2);
    bad << 1, 2, 3, 4;
    CHECK_THROWS_AS(SymMatrix{bad}, Error);
    Matrix nan = Matrix::Zero(2, 2);
    nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(SymMatrix{nan}, Error);
    CHECK_THROWS_AS(SymMatrix{Matrix::Zero(2, 3)}, Error);
}

TEST_CASE("eigen_sym on the worked spectra") {
    const SignedGraph g = example_triangle();
    const auto p = eigen_sym(laplacian(g, LaplacianKind::positive));
    CHECK(p.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.eigenvalues(1) == doctest::Approx(1.0));
    CHECK(p.eigenvalues(2) == doctest::Approx(3.0));
    const auto m = eigen_sym(laplacian(g, LaplacianKind::negative));
    CHECK(std::abs(m.eigenvalues(0)) < 1e-14);
    CHECK(std::abs(m.eigenvalues(1)) < 1e-14);
    CHECK(m.eigenvalues(2) == doctest::Approx(2.0));
    const auto id = eigen_sym(SymMatrix::identity(4));
    for (Index k = 0; k < 4; ++k) CHECK(id.eigenvalues(k) == 1.0);
}

TEST_CASE("eigen_sym reconstruction, orthonormality and sign convention") {
    std::mt19937_64 rng(11);
    for (Index n = 1; n <= 30; n += 3) {
        const Matrix a = oracle::random_symmetric(rng, n);
        const auto d = eigen_sym(SymMatrix(a));
        const Matrix& u = d.eigenvectors;
        CHECK(max_abs(a - u * d.eigenvalues.asDiagonal() * u.transpose()) <= 1e-9 * (1 + max_abs(a)));
        CHECK(max_abs(u.transpose() * u - Matrix::Identity(n, n)) <= 1e-10);
        CHECK(max_abs(d.eigenvalues - oracle::eigenvalues(a)) <= 1e-10);
        for (Index k = 0; k + 1 < n; ++k) CHECK(d.eigenvalues(k) <= d.eigenvalues(k + 1));
        for (Index k = 0; k < n; ++k) {
            Index best = 0;
            u.col(k).cwiseAbs().maxCoeff(&best);
            CHECK(u(best, k) >= 0.0);
        }
        CHECK(d.residual <= 1e-9 * (1 + max_abs(a)));
    }
}

TEST_CASE("psd_rank") {
    const SignedGraph g = example_triangle();
    const PsdRank p = psd_rank(laplacian(g, LaplacianKind::positive));
    CHECK(p.is_psd);
    CHECK(p.rank == 2);
    CHECK_FALSE(psd_rank(repelling_laplacian(g, 0.6)).is_psd);
    const PsdRank z = psd_rank(SymMatrix::zero(3));
    CHECK(z.is_psd);
    CHECK(z.rank == 0);
}

TEST_CASE("pseudoinverse of the worked L_{1/4}") {
    const SymMatrix pinv = pseudoinverse_laplacian(repelling_laplacian(example_triangle(), 0.25));
    const double printed[3][3] = {{0.222, -0.111, -0.111}, {-0.111, 1.055, -0.944}, {-0.111, -0.944, 1.055}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(pinv(i, j) - printed[i][j]) < 2e-3);
    CHECK(pinv(0, 0) == doctest::Approx(2.0 / 9.0));
    CHECK(pinv(1, 1) == doctest::Approx(19.0 / 18.0));
}

TEST_CASE("pseudoinverse of a single edge is M/4") {
    const SymMatrix l = laplacian(SignedGraph(2, {{0, 1, 1.0, Sign::positive}}), LaplacianKind::positive);
    CHECK(max_abs(pseudoinverse_laplacian(l).matrix() - l.matrix() / 4.0) < 1e-14);
}

TEST_CASE("pseudoinverse satisfies the Moore-Penrose identities") {
    for (std::uint64_t k = 0; k < 50; ++k) {
        const CorpusInstance c = corpus_instance(12, k);
        const Matrix m = repelling_laplacian(c.graph, c.epsilon).matrix();
        const Matrix p = pseudoinverse_laplacian(SymMatrix(m)).matrix();
        const double s = std::max(1.0, max_abs(p)) * std::max(1.0, max_abs(m));
        CHECK(max_abs(m * p * m - m) <= 1e-8 * s);
        CHECK(max_abs(p * m * p - p) <= 1e-8 * s * max_abs(p));
        CHECK(max_abs((m * p).transpose() - m * p) <= 1e-8 * s);
        CHECK(max_abs((p * m).transpose() - p * m) <= 1e-8 * s);
        CHECK(max_abs(p * Vector::Ones(m.rows())) <= 1e-8 * s);
    }
}

TEST_CASE("pseudoinverse rejects matrices without a one-dimensional constant kernel") {
    const SignedGraph two_parts(4, {{0, 1, 1.0, Sign::positive}, {2, 3, 1.0, Sign::positive}});
    CHECK_THROWS_AS(pseudoinverse_laplacian(laplacian(two_parts, LaplacianKind::positive)),
                    PreconditionError);
    CHECK_THROWS_AS(pseudoinverse_laplacian(SymMatrix::identity(3)), PreconditionError);
}

TEST_CASE("matrix_exp") {
    const SymMatrix q = laplacian(example_triangle(), LaplacianKind::underlying);
    CHECK(max_abs(matrix_exp(q, 0.0).matrix() - Matrix::Identity(3, 3)) < 1e-14);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.5;
    d(1, 1) = -0.5;
    const Matrix e = matrix_exp(SymMatrix(d), 0.7).matrix();
    CHECK(e(0, 0) == doctest::Approx(std::exp(-1.05)));
    CHECK(e(1, 1) == doctest::Approx(std::exp(0.35)));
    CHECK(std::abs(e(0, 1)) < 1e-15);
    CHECK(max_abs(matrix_exp(q, 0.1).matrix() - oracle::exp_series(q.matrix(), 0.1)) < 1e-10);
}

TEST_CASE("heat kernel is stochastic") {
    for (std::uint64_t k = 0; k < 30; ++k) {
        auto rng = instance_rng(13, k);
        const SignedGraph g = random_signed_graph(rng);
        const auto d = eigen_sym(laplacian(g, LaplacianKind::underlying));
        for (const double t : {0.0, 0.3, 1.0, 2.5, 5.0}) {
            const Matrix e = matrix_exp(d, t).matrix();
            CHECK(max_abs(e.rowwise().sum() - Vector::Ones(e.rows())) <= 1e-10);
            CHECK(e.minCoeff() >= -1e-12);
        }
    }
}

TEST_CASE("Weyl bracket for the smallest eigenvalue on 1-perp") {
    for (std::uint64_t k = 0; k < 100; ++k) {
        auto rng = instance_rng(14, k);
        const SignedGraph g = random_signed_graph(rng);
        const double l2 = eigen_sym(laplacian(g, LaplacianKind::positive)).eigenvalues(1);
        const auto lm = eigen_sym(laplacian(g, LaplacianKind::negative)).eigenvalues;
        for (const double eps : {0.0, 0.1, 0.5, 1.0, 3.0})
            CHECK(spectral_gap(g, eps) >= l2 - eps * lm(lm.size() - 1) - 1e-9);
    }
}

TEST_CASE("min_eigenvalue_off_constants matches the 1-perp restriction") {
    for (std::uint64_t k = 0; k < 30; ++k) {
        auto rng = instance_rng(15, k);
        const SignedGraph g = random_signed_graph(rng);
        const Matrix l = repelling_laplacian(g, 2.0).matrix();
        const Index n = l.rows();
        // Orthonormal basis of 1-perp from the Householder QR of the ones vector.
        const Matrix q = Eigen::HouseholderQR<Matrix>(Vector::Ones(n)).householderQ();
        const Matrix b = q.rightCols(n - 1);
        const Vector ev = oracle::eigenvalues(b.transpose() * l * b);
        CHECK(min_eigenvalue_off_constants(SymMatrix(l)) == doctest::Approx(ev(0)).epsilon(1e-9));
    }
}
