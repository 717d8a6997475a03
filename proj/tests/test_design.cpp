#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lrk/design.hpp"
#include "lrk/voronoi.hpp"

using namespace lrk;

TEST_CASE("grid design matches the shifted-grid formula") {
    const Design d70 = grid_design(70, Box::unit_square());
    CHECK(d70.n == 4900);
    CHECK(d70.point(0)[0] == doctest::Approx(1.0 / 70.5).epsilon(1e-15));
    CHECK(d70.point(0)[1] == doctest::Approx(1.0 / 70.5).epsilon(1e-15));

    const Design d1 = grid_design(1, Box::unit_square());
    CHECK(d1.n == 1);
    CHECK(d1.point(0)[0] == doctest::Approx(1.0 / 1.5).epsilon(1e-15));

    const Design d2 = grid_design(2, Box::unit_square());
    CHECK(d2.n == 4);
    CHECK(d2.point(1)[0] - d2.point(0)[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK_THROWS_AS(grid_design(0, Box::unit_square()), InvalidArgument);
}

TEST_CASE("random design determinism and membership") {
    const Box domain({-1.0, 2.0}, {3.0, 5.0});
    const Design a = random_design(1, domain, 42);
    CHECK(domain.contains(a.point(0)));

    const Design b = random_design(257, domain, 9001);
    const Design c = random_design(257, domain, 9001);
    CHECK(b.coords == c.coords);
    const Design e = random_design(257, domain, 9002);
    CHECK(b.coords != e.coords);

    const Design big = random_design(1000, Box::unit_square(), 3);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < big.n; ++i) {
        mx += big.point(i)[0];
        my += big.point(i)[1];
    }
    CHECK(std::abs(mx / 1000.0 - 0.5) < 0.05);
    CHECK(std::abs(my / 1000.0 - 0.5) < 0.05);
    big.validate();
}

TEST_CASE("design csv round trip") {
    const Design d = random_design(17, Box::unit_square(), 5);
    std::stringstream ss;
    write_design_csv(ss, d);
    CHECK(ss.str().substr(0, 6) == "x1,x2\n");
    const Design back = read_design_csv(ss, Box::unit_square());
    CHECK(back.n == d.n);
    CHECK(back.coords == d.coords);
}

TEST_CASE("voronoi of a single point covers the domain") {
    const Design d = random_design(1, Box::unit_square(), 1);
    const VoronoiSummary s = voronoi_summary(d, 200);
    CHECK(s.areas.size() == 1);
    CHECK(s.areas[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.diameters[0] == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
    CHECK(s.mesh_ratio == 1.0);
    CHECK(check_regularity(s, 1.5).passes);
}

TEST_CASE("voronoi areas are exact partitions and symmetric designs balance") {
    Design two;
    two.n = 2;
    two.d = 2;
    two.domain = Box::unit_square();
    two.coords = {0.25, 0.5, 0.75, 0.5};
    const VoronoiSummary s = voronoi_summary(two, 128);
    CHECK(s.areas[0] + s.areas[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.areas[0] == doctest::Approx(s.areas[1]).epsilon(1e-9));
    CHECK(s.delta_max == std::max(s.diameters[0], s.diameters[1]));
}

TEST_CASE("grid voronoi cells match the analytic shifted-grid geometry") {
    const std::size_t m = 12;
    const Design d = grid_design(m, Box::unit_square());
    const int res = 24 * static_cast<int>(m);
    const VoronoiSummary s = voronoi_summary(d, res);

    const double spacing = 1.0 / (static_cast<double>(m) + 0.5);
    const double raster_diag = std::sqrt(2.0) / static_cast<double>(res);
    // interior cell: index (i, j) with 1 <= i, j <= m-2 ; diameter = sqrt(2) spacing
    const std::size_t interior = (m / 2) * m + (m / 2);
    CHECK(std::abs(s.diameters[interior] - std::sqrt(2.0) * spacing) <= 2.0 * raster_diag);
    CHECK(s.areas[interior] == doctest::Approx(spacing * spacing).epsilon(0.05));

    // corner cell is 1.5 spacing wide in both axes: area ratio 2.25, < 4
    CHECK(s.mesh_ratio == doctest::Approx(2.25).epsilon(0.02));
    CHECK(check_regularity(s, 4.0).passes);
    CHECK_FALSE(check_regularity(s, 2.0).passes);

    double total = 0.0;
    for (double a : s.areas) total += a;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("raster refinement changes areas within the stated tolerance") {
    const Design d = random_design(40, Box::unit_square(), 8);
    const VoronoiSummary coarse = voronoi_summary(d, 400);
    const VoronoiSummary fine = voronoi_summary(d, 800);
    const double tol = 2.0 * 2.0 * 1.0 / 400.0;  // 2 d |D| / resolution
    for (std::size_t i = 0; i < d.n; ++i)
        CHECK(std::abs(coarse.areas[i] - fine.areas[i]) <= tol);
}

TEST_CASE("cluster plus outlier fails a small mesh-ratio bound") {
    Design d;
    d.n = 11;
    d.d = 2;
    d.domain = Box::unit_square();
    // 10-point cluster near the origin corner plus one far point
    for (int i = 0; i < 10; ++i) {
        d.coords.push_back(0.05 + 0.02 * (i % 5));
        d.coords.push_back(0.05 + 0.02 * (i / 5));
    }
    d.coords.push_back(0.9);
    d.coords.push_back(0.9);
    const VoronoiSummary s = voronoi_summary(d, 512);
    CHECK(s.mesh_ratio > 10.0);
    CHECK_FALSE(check_regularity(s, 4.0).passes);
    CHECK(check_regularity(s, 1e6).passes);
}

TEST_CASE("too coarse a raster is rejected") {
    const Design d = random_design(100, Box::unit_square(), 4);
    CHECK_THROWS_AS(voronoi_summary(d, 10), InvalidArgument);
}
