#include <doctest.h>

#include <cmath>
#include <limits>

#include "lrk/eigen_sym.hpp"
#include "lrk/kernels.hpp"
#include "lrk/design.hpp"
#include "lrk/rng.hpp"
#include "lrk/spectral.hpp"

using namespace lrk;

TEST_CASE("stationary kernels at closed-form points") {
    const KernelSpec k1 = KernelSpec::exponential(0.25);
    CHECK(evaluate_at_lag(k1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(evaluate_at_lag(k1, 0.25) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    const KernelSpec k3 = KernelSpec::squared_exponential(0.1);
    CHECK(evaluate_at_lag(k3, 0.1) == doctest::Approx(std::exp(-0.1)).epsilon(1e-14));

    // closed-form Matern 5/2 value at one lag
    const KernelSpec k2 = KernelSpec::matern_25(0.25);
    const double h = 0.13;
    const double t = std::sqrt(5.0) * h / 0.25;
    const double expect = (1.0 + t + 5.0 * h * h / (3.0 * 0.0625)) * std::exp(-t);
    CHECK(evaluate_at_lag(k2, h) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("polynomial kernel") {
    const KernelSpec k4 = KernelSpec::polynomial(2, 1.0);
    const double x[2] = {1.0, 0.0};
    CHECK(evaluate(k4, x, x, 2) == doctest::Approx(4.0).epsilon(1e-15));
    const double y[2] = {0.5, -0.25};
    const double base = 1.0 + x[0] * y[0] + x[1] * y[1];
    CHECK(evaluate(k4, x, y, 2) == doctest::Approx(base * base).epsilon(1e-15));
}

TEST_CASE("evaluate is symmetric and bounded for stationary families") {
    Rng rng(7);
    const std::vector<KernelSpec> pool = {
        KernelSpec::exponential(0.4), KernelSpec::matern_25(0.3),
        KernelSpec::squared_exponential(0.2), KernelSpec::matern_nu(1.7, 0.5, 2.0)};
    for (const auto& spec : pool) {
        for (int t = 0; t < 200; ++t) {
            double x[3], y[3];
            for (int i = 0; i < 3; ++i) {
                x[i] = rng.uniform(-1.0, 1.0);
                y[i] = rng.uniform(-1.0, 1.0);
            }
            const double kxy = evaluate(spec, x, y, 3);
            const double kyx = evaluate(spec, y, x, 3);
            CHECK(kxy == kyx);
            CHECK(std::abs(kxy) <= spec.variance + 1e-12);
            CHECK(evaluate(spec, x, x, 3) == doctest::Approx(spec.variance).epsilon(1e-12));
        }
    }
}

TEST_CASE("general matern matches the nu = 2.5 closed form to 1e-12") {
    const KernelSpec closed = KernelSpec::matern_25(0.3);
    const KernelSpec general = KernelSpec::matern_nu(2.5, 0.3);
    Rng rng(11);
    for (int t = 0; t < 500; ++t) {
        const double h = rng.uniform(0.0, 2.0);
        const double a = evaluate_at_lag(closed, h);
        const double b = evaluate_at_lag(general, h);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1e-30));
    }
}

TEST_CASE("general matern matches the exponential at nu = 0.5") {
    const KernelSpec exp_k = KernelSpec::exponential(0.25);
    const KernelSpec general = KernelSpec::matern_nu(0.5, 0.25);
    Rng rng(12);
    for (int t = 0; t < 200; ++t) {
        const double h = rng.uniform(0.0, 1.5);
        CHECK(evaluate_at_lag(general, h) ==
              doctest::Approx(evaluate_at_lag(exp_k, h)).epsilon(1e-11));
    }
}

TEST_CASE("matern profile small-lag behavior") {
    // near-zero lags approach the variance from below without overflow
    for (double nu : {0.3, 1.0, 2.5, 10.0, 50.0}) {
        const KernelSpec spec = KernelSpec::matern_nu(nu, 0.2);
        const double v = evaluate_at_lag(spec, 1e-9);
        CHECK(std::isfinite(v));
        CHECK(v <= 1.0 + 1e-12);
        CHECK(v > 0.9);
    }
}

TEST_CASE("evaluate rejects non-finite coordinates") {
    const KernelSpec spec = KernelSpec::exponential(0.25);
    const double x[2] = {0.0, 0.0};
    const double bad[2] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_THROWS_AS(evaluate(spec, x, bad, 2), InvalidArgument);
}

TEST_CASE("c_delta closed forms") {
    const Box domain = Box::unit_square();
    const KernelSpec k1 = KernelSpec::exponential(0.25);
    CHECK(c_delta(k1, domain, 0.0, 8) == 1.0);
    CHECK(c_delta(k1, domain, 0.1, 16) == doctest::Approx(std::exp(-0.8)).epsilon(1e-12));
    const KernelSpec k3 = KernelSpec::squared_exponential(0.1);
    CHECK(c_delta(k3, domain, 0.05, 16) == doctest::Approx(std::exp(-0.05)).epsilon(1e-12));
    CHECK_THROWS_AS(c_delta(k1, domain, 0.1, 1), InvalidArgument);
    CHECK_THROWS_AS(c_delta(k1, domain, 10.0, 8), InvalidArgument);
}

TEST_CASE("c_delta is monotone non-increasing and within [0, 1]") {
    const Box domain = Box::unit_square();
    const std::vector<KernelSpec> pool = {
        KernelSpec::exponential(0.25), KernelSpec::matern_25(0.25),
        KernelSpec::squared_exponential(0.1), KernelSpec::matern_nu(0.8, 0.3),
        KernelSpec::polynomial(2, 1.0)};
    for (const auto& spec : pool) {
        double prev = 1.0 + 1e-15;
        for (double delta : {0.0, 0.02, 0.05, 0.1, 0.2, 0.4, 0.8, 1.2}) {
            const double c = c_delta(spec, domain, delta, 12);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
            CHECK(c <= prev + 1e-12);
            prev = c;
        }
    }
}

TEST_CASE("sampled kernel matrices are positive semidefinite") {
    const std::vector<KernelSpec> pool = {
        KernelSpec::exponential(0.25), KernelSpec::matern_25(0.25),
        KernelSpec::squared_exponential(0.1), KernelSpec::matern_nu(1.2, 0.3),
        KernelSpec::polynomial(2, 1.0), KernelSpec::polynomial(3, 0.5)};
    Rng sizes(3);
    for (std::size_t f = 0; f < pool.size(); ++f) {
        const std::size_t m = 1 + sizes.next_u64() % 50;
        const Design design = random_design(m, Box::unit_square(), 100 + f);
        const Matrix v = assemble_covariance(pool[f], design, {Exec::serial});
        const auto res = linalg::eigen_sym(v, false, Exec::serial);
        double trace = 0.0;
        for (std::size_t i = 0; i < m; ++i) trace += v(i, i);
        CHECK(res.values.back() >= -1e-10 * trace);
    }
}

TEST_CASE("kernel text form round-trips") {
    const std::vector<KernelSpec> pool = {
        KernelSpec::exponential(0.25), KernelSpec::matern_25(0.33, 2.0),
        KernelSpec::squared_exponential(0.1), KernelSpec::matern_nu(1.75, 0.4, 0.9),
        KernelSpec::polynomial(3, 0.5)};
    for (const auto& spec : pool) {
        const KernelSpec back = parse_kernel(format_kernel(spec));
        CHECK(back.family == spec.family);
        Rng rng(5);
        for (int t = 0; t < 20; ++t) {
            double x[2] = {rng.uniform01(), rng.uniform01()};
            double y[2] = {rng.uniform01(), rng.uniform01()};
            CHECK(evaluate(back, x, y, 2) == evaluate(spec, x, y, 2));
        }
    }
    CHECK(parse_kernel("family=exponential range=0.25 variance=1.0").range == 0.25);
    CHECK_THROWS_AS(parse_kernel("range=0.25"), InvalidArgument);
    CHECK_THROWS_AS(parse_kernel("family=nope"), InvalidArgument);
    CHECK_THROWS_AS(parse_kernel("family=exponential range=-1"), InvalidArgument);
}
