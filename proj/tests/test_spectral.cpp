#include <doctest.h>

#include <cmath>

#include "lrk/design.hpp"
#include "lrk/kernels.hpp"
#include "lrk/rng.hpp"
#include "lrk/spectral.hpp"

using namespace lrk;

TEST_CASE("assemble_covariance diagonal, symmetry, closed-form 2x2") {
    const Design d = random_design(30, Box::unit_square(), 2);
    const KernelSpec spec = KernelSpec::matern_25(0.3, 1.7);
    const Matrix v = assemble_covariance(spec, d);
    for (std::size_t i = 0; i < 30; ++i)
        CHECK(v(i, i) == doctest::Approx(1.7).epsilon(1e-14));
    for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = 0; j < 30; ++j) CHECK(v(i, j) == v(j, i));

    Design two;
    two.n = 2;
    two.d = 2;
    two.domain = Box::unit_square();
    two.coords = {0.0, 0.0, 0.25, 0.0};
    const Matrix v2 = assemble_covariance(KernelSpec::exponential(0.25), two);
    const EigenSystem es = dense_eigen(v2);
    CHECK(es.eigenvalues[0] == doctest::Approx(1.0 + std::exp(-1.0)).epsilon(1e-14));
    CHECK(es.eigenvalues[1] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("assemble_covariance honors the memory budget") {
    const Design d = random_design(200, Box::unit_square(), 3);
    AssembleOptions opts;
    opts.max_matrix_bytes = 1000;
    CHECK_THROWS_AS(assemble_covariance(KernelSpec::exponential(0.25), d, opts),
                    BudgetExceeded);
}

TEST_CASE("grid trace equals n for unit-variance kernels") {
    const Design d = grid_design(20, Box::unit_square());
    const Matrix v = assemble_covariance(KernelSpec::squared_exponential(0.1), d);
    double trace = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) trace += v(i, i);
    CHECK(trace == doctest::Approx(400.0).epsilon(1e-14));
}

TEST_CASE("truncated_eigen with k = n matches dense") {
    const Design d = random_design(40, Box::unit_square(), 11);
    const Matrix v = assemble_covariance(KernelSpec::exponential(0.25), d);
    const EigenSystem dense = dense_eigen(v);
    const EigenSystem rand = truncated_eigen(v, 40, 0, 2, 99);
    CHECK(rand.complete);
    for (std::size_t i = 0; i < 40; ++i)
        CHECK(rand.eigenvalues[i] ==
              doctest::Approx(dense.eigenvalues[i]).epsilon(1e-10));
}

TEST_CASE("truncated_eigen top-k accuracy on a smooth kernel") {
    const Design d = grid_design(20, Box::unit_square());  // n = 400
    const Matrix v = assemble_covariance(KernelSpec::squared_exponential(0.1), d);
    const EigenSystem dense = dense_eigen(v);
    const EigenSystem rand = truncated_eigen(v, 50, 10, 4, 1234);
    CHECK(rand.eigenvalues.size() == 50);
    for (std::size_t i = 0; i < 50; ++i)
        CHECK(std::abs(rand.eigenvalues[i] - dense.eigenvalues[i]) <=
              1e-6 * std::abs(dense.eigenvalues[i]));
    // determinism contract
    const EigenSystem again = truncated_eigen(v, 50, 10, 4, 1234);
    CHECK(again.eigenvalues == rand.eigenvalues);
}

TEST_CASE("truncated_eigen on a rank-1 matrix") {
    const std::size_t n = 100;
    Rng rng(8);
    std::vector<double> u(n);
    double nrm2 = 0.0;
    for (double& x : u) {
        x = rng.normal();
        nrm2 += x * x;
    }
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v(i, j) = u[i] * u[j];
    const EigenSystem es = truncated_eigen(v, 2, 5, 3, 7);
    CHECK(es.eigenvalues[0] == doctest::Approx(nrm2).epsilon(1e-10));
    CHECK(std::abs(es.eigenvalues[1]) <= 1e-9 * nrm2);
}

TEST_CASE("truncated_eigen rejects k out of range") {
    Matrix v = Matrix::identity(5);
    CHECK_THROWS_AS(truncated_eigen(v, 0, 2, 1, 1), InvalidArgument);
    CHECK_THROWS_AS(truncated_eigen(v, 6, 2, 1, 1), InvalidArgument);
}

TEST_CASE("continuous spectrum trace identity for stationary kernels") {
    const ContinuousSpectrum cs =
        continuous_spectrum(KernelSpec::exponential(0.25), Box::unit_square(), 900);
    CHECK(cs.quadrature_m == 900);
    double sum = 0.0;
    for (double v : cs.eigenvalues) sum += v;
    // integral of K(s,s) over the unit square is exactly 1
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("polynomial kernel has exactly six nonzero operator eigenvalues") {
    const ContinuousSpectrum cs =
        continuous_spectrum(KernelSpec::polynomial(2, 1.0), Box::unit_square(), 400);
    CHECK(cs.eigenvalues[5] > 1e-6);
    for (std::size_t i = 6; i < 20; ++i)
        CHECK(std::abs(cs.eigenvalues[i]) <= 1e-10 * cs.eigenvalues[0]);
}

TEST_CASE("quadrature refinement moves the top eigenvalues by <= 1e-3") {
    const KernelSpec spec = KernelSpec::squared_exponential(0.1);
    const ContinuousSpectrum coarse = continuous_spectrum(spec, Box::unit_square(), 1600);
    const ContinuousSpectrum fine = continuous_spectrum(spec, Box::unit_square(), 3600);
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(std::abs(coarse.eigenvalues[i] - fine.eigenvalues[i]) <=
              1e-3 * fine.eigenvalues[i]);
}

TEST_CASE("tail sums") {
    const std::vector<double> vals = {1.0, 1.0, 1.0};
    const TailSums ts = tail_sums(vals);
    CHECK(ts.cumulative == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(ts.tail[0] == doctest::Approx(3.0));
    CHECK(ts.tail[1] == doctest::Approx(2.0));
    CHECK(ts.tail[2] == doctest::Approx(1.0));

    // consistency with the trace on a real spectrum
    const Design d = grid_design(12, Box::unit_square());
    const Matrix v = assemble_covariance(KernelSpec::matern_25(0.25), d);
    const auto evals = dense_eigenvalues(v);
    const TailSums real = tail_sums(evals);
    const double trace = static_cast<double>(d.n);
    CHECK(real.cumulative.back() == doctest::Approx(trace).epsilon(1e-10));
    for (std::size_t k = 1; k < d.n; k += 17)
        CHECK(real.cumulative[k - 1] + real.tail[k] == doctest::Approx(trace).epsilon(1e-10));
}

TEST_CASE("condition numbers") {
    EigenSystem es;
    es.eigenvalues = {1.0, 1.0, 1.0};
    es.n = 3;
    es.complete = true;
    CHECK(condition_number(es, 0.0).strict == doctest::Approx(1.0));
    const ConditionNumbers c = condition_number(es, 0.5);
    CHECK(c.strict == doctest::Approx(1.0));
    CHECK(c.paper_convention == doctest::Approx(2.0));

    es.eigenvalues = {4.0, 2.0, -1e-18};
    CHECK_THROWS_AS(condition_number(es, 0.0), InvalidArgument);
    es.complete = false;
    CHECK_THROWS_AS(condition_number(es, 0.0), InvalidArgument);
    CHECK(condition_number(es, 1e-3).paper_convention == doctest::Approx(4000.0));
}

TEST_CASE("eigen system invariants on a kernel matrix") {
    const Design d = grid_design(10, Box::unit_square());
    const Matrix v = assemble_covariance(KernelSpec::squared_exponential(0.1), d);
    const EigenSystem es = dense_eigen(v);
    REQUIRE(es.complete);
    const double eps_num = 1e-10 * es.eigenvalues[0] * static_cast<double>(es.n);
    for (std::size_t i = 0; i < es.n; ++i) {
        if (i + 1 < es.n) CHECK(es.eigenvalues[i] >= es.eigenvalues[i + 1]);
        CHECK(es.eigenvalues[i] >= -eps_num);
    }
    for (std::size_t a = 0; a < es.n; a += 13)
        for (std::size_t b = a; b < es.n; b += 13) {
            double s = 0.0;
            for (std::size_t i = 0; i < es.n; ++i)
                s += es.eigenvectors(i, a) * es.eigenvectors(i, b);
            CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) <= 1e-10);
        }
    double sum = 0.0;
    for (double x : es.eigenvalues) sum += x;
    CHECK(sum == doctest::Approx(static_cast<double>(d.n)).epsilon(1e-10));
}

#ifdef LRK_HAVE_EIGEN_ORACLE
#include <Eigen/Dense>
TEST_CASE("truncated eigen matches an Eigen-oracle dense decomposition") {
    // fast spectral decay converges tightly under subspace iteration; the
    // slow exponential-kernel decay only reaches a few digits at q = 6
    struct Case {
        KernelSpec spec;
        double tol;
    };
    const Case cases[] = {{KernelSpec::squared_exponential(0.1), 1e-6},
                          {KernelSpec::exponential(0.25), 5e-4}};
    for (const Case& c : cases) {
        const Design d = grid_design(15, Box::unit_square());
        const Matrix v = assemble_covariance(c.spec, d);
        Eigen::MatrixXd m(d.n, d.n);
        for (std::size_t i = 0; i < d.n; ++i)
            for (std::size_t j = 0; j < d.n; ++j) m(i, j) = v(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(m);
        const EigenSystem rand = truncated_eigen(v, 20, 10, 6, 5);
        for (std::size_t i = 0; i < 20; ++i) {
            const double expect = oracle.eigenvalues()[static_cast<int>(d.n - 1 - i)];
            CHECK(std::abs(rand.eigenvalues[i] - expect) <= c.tol * std::abs(expect));
        }
    }
}
#endif
