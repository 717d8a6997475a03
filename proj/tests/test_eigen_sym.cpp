#include <doctest.h>

#include <cmath>

#include "lrk/design.hpp"
#include "lrk/eigen_sym.hpp"
#include "lrk/kernels.hpp"
#include "lrk/linalg.hpp"
#include "lrk/rng.hpp"
#include "lrk/spectral.hpp"

#ifdef LRK_HAVE_EIGEN_ORACLE
#include <Eigen/Dense>
#endif

using namespace lrk;
using linalg::eigen_sym;

namespace {

Matrix random_symmetric(std::size_t n, std::uint64_t seed, bool psd) {
    Rng rng(seed);
    Matrix a(n, n);
    if (psd) {
        // A = G G' / n with Gaussian G keeps eigenvalues well scaled
        Matrix g(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.normal();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += g(i, k) * g(j, k);
                a(i, j) = a(j, i) = s / static_cast<double>(n);
            }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rng.normal();
    }
    return a;
}

double reconstruction_error(const Matrix& v, const linalg::SymEigenResult& r) {
    const std::size_t n = v.rows();
    Matrix rec(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += r.vectors(i, k) * r.values[k] * r.vectors(j, k);
            rec(i, j) = v(i, j) - s;
        }
    return linalg::frobenius_norm(rec) / linalg::frobenius_norm(v);
}

double orthonormality_error(const Matrix& q) {
    const std::size_t n = q.rows(), k = q.cols();
    double worst = 0.0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += q(i, a) * q(i, b);
            worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

}  // namespace

TEST_CASE("identity and 2x2 closed forms") {
    Matrix eye = Matrix::identity(5);
    auto r = eigen_sym(eye, true);
    for (double v : r.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    Matrix two(2, 2);
    const double rho = std::exp(-1.0);
    two(0, 0) = two(1, 1) = 1.0;
    two(0, 1) = two(1, 0) = rho;
    auto r2 = eigen_sym(two, true);
    CHECK(r2.values[0] == doctest::Approx(1.0 + rho).epsilon(1e-14));
    CHECK(r2.values[1] == doctest::Approx(1.0 - rho).epsilon(1e-14));
}

TEST_CASE("rank-1 matrix") {
    const std::size_t n = 120;
    Rng rng(4);
    std::vector<double> u(n);
    double nrm2 = 0.0;
    for (double& x : u) {
        x = rng.normal();
        nrm2 += x * x;
    }
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = u[i] * u[j];
    auto r = eigen_sym(a, false);
    CHECK(r.values[0] == doctest::Approx(nrm2).epsilon(1e-12));
    CHECK(std::abs(r.values[1]) <= 1e-10 * nrm2);
}

TEST_CASE("jacobi and QL paths agree across the dispatch boundary") {
    for (std::size_t n : {32u, 64u}) {
        Matrix a = random_symmetric(n, 1000 + n, false);
        auto ja = linalg::jacobi_eigen(a, true);
        // force the Householder+QL path via a padded matrix of size > 64
        Matrix big(n + 1, n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) big(i, j) = a(i, j);
        big(n, n) = 1e6;  // isolated dominant eigenvalue
        auto ql = eigen_sym(big, true);
        CHECK(ql.values[0] == doctest::Approx(1e6).epsilon(1e-12));
        // the padded eigenvalue is isolated on top; the rest must match Jacobi
        for (std::size_t i = 0; i < n; ++i)
            CHECK(ql.values[i + 1] == doctest::Approx(ja.values[i]).epsilon(1e-10));
    }
}

TEST_CASE("reconstruction, orthonormality, ordering on random matrices") {
    for (std::size_t n : {3u, 17u, 65u, 150u, 300u}) {
        for (bool psd : {true, false}) {
            Matrix a = random_symmetric(n, 31 * n + psd, psd);
            auto r = eigen_sym(a, true);
            for (std::size_t i = 1; i < n; ++i) CHECK(r.values[i - 1] >= r.values[i]);
            CHECK(reconstruction_error(a, r) <= 1e-12);
            CHECK(orthonormality_error(r.vectors) <= 1e-12);
            auto novec = eigen_sym(a, false);
            for (std::size_t i = 0; i < n; ++i) CHECK(novec.values[i] == r.values[i]);
        }
    }
}

#ifdef LRK_HAVE_EIGEN_ORACLE
TEST_CASE("eigenvalues match the Eigen oracle") {
    for (std::size_t n : {40u, 80u, 200u}) {
        for (bool psd : {true, false}) {
            Matrix a = random_symmetric(n, 77 * n + psd, psd);
            Eigen::MatrixXd m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
            auto r = eigen_sym(a, false);
            const double scale = std::max(std::abs(r.values[0]), std::abs(r.values[n - 1]));
            for (std::size_t i = 0; i < n; ++i) {
                const double oracle = es.eigenvalues()[static_cast<int>(n - 1 - i)];
                CHECK(std::abs(r.values[i] - oracle) <= 1e-11 * scale);
            }
        }
    }
}

TEST_CASE("kernel matrix eigenvalues match the Eigen oracle") {
    const Design d = grid_design(12, Box::unit_square());
    const Matrix v = assemble_covariance(KernelSpec::squared_exponential(0.1), d);
    Eigen::MatrixXd m(d.n, d.n);
    for (std::size_t i = 0; i < d.n; ++i)
        for (std::size_t j = 0; j < d.n; ++j) m(i, j) = v(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    auto r = eigen_sym(v, false);
    for (std::size_t i = 0; i < 40; ++i) {
        const double oracle = es.eigenvalues()[static_cast<int>(d.n - 1 - i)];
        CHECK(r.values[i] == doctest::Approx(oracle).epsilon(1e-10));
    }
}
#endif

TEST_CASE("asymmetric input is rejected") {
    Matrix a(3, 3, 0.0);
    a(0, 1) = 1.0;
    a(1, 0) = 1.0 + 1e-6;
    CHECK_THROWS_AS(eigen_sym(a, false), InvalidArgument);
}

TEST_CASE("cholesky round trip and breakdown") {
    const Design d = random_design(60, Box::unit_square(), 17);
    const Matrix v = assemble_covariance(KernelSpec::exponential(0.3), d);
    auto chol = linalg::cholesky(v);
    REQUIRE(chol.ok);
    CHECK(chol.pivot_ratio() >= 1.0);
    Rng rng(5);
    std::vector<double> b(60);
    for (double& x : b) x = rng.normal();
    std::vector<double> x = b;
    linalg::cholesky_solve(chol.factor, x);
    const std::vector<double> back = linalg::multiply_vec(v, x);
    for (std::size_t i = 0; i < 60; ++i)
        CHECK(back[i] == doctest::Approx(b[i]).epsilon(1e-8));

    Matrix indef = Matrix::identity(4);
    indef(2, 2) = -1.0;
    auto bad = linalg::cholesky(indef);
    CHECK_FALSE(bad.ok);
    CHECK(bad.fail_index == 2);
}

TEST_CASE("orthonormalize_columns yields an orthonormal basis of the span") {
    Rng rng(23);
    Matrix a(50, 8);
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j < 8; ++j) a(i, j) = rng.normal();
    Matrix orig = a;
    linalg::orthonormalize_columns(a);
    CHECK(orthonormality_error(a) <= 1e-12);
    // span check: projecting the original columns onto the basis reproduces them
    Matrix coef = linalg::crossprod(a, orig);
    Matrix back = linalg::multiply(a, coef);
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            CHECK(back(i, j) == doctest::Approx(orig(i, j)).epsilon(1e-10));
}
