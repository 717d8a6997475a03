// Timings of the OpenMP kernels against their serial reference. Both paths
// share one arithmetic order, so outputs are identical; this target only
// reports throughput.

#include <chrono>
#include <cstdio>
#include <functional>

#include "lrk/design.hpp"
#include "lrk/eigen_sym.hpp"
#include "lrk/kernels.hpp"
#include "lrk/linalg.hpp"
#include "lrk/rng.hpp"
#include "lrk/spectral.hpp"
#include "lrk/voronoi.hpp"

using namespace lrk;

namespace {

double time_once(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3fs  openmp %8.3fs  speedup %.2fx\n", name, serial,
                parallel, serial / parallel);
}

}  // namespace

int main() {
    std::printf("threads available: %d\n", omp_get_max_threads());

    {
        const Design d = random_design(2000, Box::unit_square(), 1);
        const KernelSpec spec = KernelSpec::matern_25(0.3);
        Matrix keep;
        const double ts = time_once([&] { keep = assemble_covariance(spec, d, {Exec::serial}); });
        const double tp = time_once([&] { keep = assemble_covariance(spec, d, {Exec::openmp}); });
        report("covariance assembly n=2000", ts, tp);
    }
    {
        const Design d = grid_design(35, Box::unit_square());  // n = 1225
        const Matrix v = assemble_covariance(KernelSpec::squared_exponential(0.1), d);
        std::vector<double> vals;
        const double ts = time_once([&] { vals = dense_eigenvalues(v, Exec::serial); });
        const double tp = time_once([&] { vals = dense_eigenvalues(v, Exec::openmp); });
        report("dense eigenvalues n=1225", ts, tp);
        EigenSystem es;
        const double tsv = time_once([&] { es = dense_eigen(v, Exec::serial); });
        const double tpv = time_once([&] { es = dense_eigen(v, Exec::openmp); });
        report("dense eigenvectors n=1225", tsv, tpv);
    }
    {
        const Design d = grid_design(40, Box::unit_square());  // n = 1600
        const Matrix v = assemble_covariance(KernelSpec::squared_exponential(0.1), d);
        EigenSystem es;
        const double ts =
            time_once([&] { es = truncated_eigen(v, 50, 10, 4, 7, Exec::serial); });
        const double tp =
            time_once([&] { es = truncated_eigen(v, 50, 10, 4, 7, Exec::openmp); });
        report("randomized top-50 n=1600", ts, tp);
    }
    {
        const Design d = random_design(1500, Box::unit_square(), 2);
        const Matrix v = assemble_covariance(KernelSpec::exponential(0.25), d);
        linalg::CholeskyResult r;
        const double ts = time_once([&] { r = linalg::cholesky(v, Exec::serial); });
        const double tp = time_once([&] { r = linalg::cholesky(v, Exec::openmp); });
        report("cholesky n=1500", ts, tp);
    }
    {
        const Design d = random_design(500, Box::unit_square(), 3);
        VoronoiSummary s;
        const double ts = time_once([&] { s = voronoi_summary(d, 1000, Exec::serial); });
        const double tp = time_once([&] { s = voronoi_summary(d, 1000, Exec::openmp); });
        report("voronoi raster n=500", ts, tp);
    }
    return 0;
}
