#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lrk/csv.hpp"
#include "lrk/exec.hpp"
#include "lrk/kernels.hpp"
#include "lrk/spectral.hpp"

namespace lrk::verify {

// Memoized dense spectra of kernel matrices on unit-square grid designs,
// shared across checks so each (kernel, grid) pair is decomposed once.
class SpectrumCache {
public:
    SpectrumCache(Exec exec, std::size_t max_matrix_bytes)
        : exec_(exec), max_matrix_bytes_(max_matrix_bytes) {}

    const std::vector<double>& grid_eigenvalues(const KernelSpec& spec, std::size_t grid_side);
    Exec exec() const { return exec_; }
    std::size_t budget() const { return max_matrix_bytes_; }

private:
    Exec exec_;
    std::size_t max_matrix_bytes_;
    std::map<std::string, std::vector<double>> store_;
};

struct VerifyOptions {
    Exec exec = Exec::openmp;
    std::size_t max_matrix_bytes = kDefaultMatrixBudget;
    std::uint64_t seed = 1;
    std::size_t quadrature_m = 2500;
    std::vector<std::size_t> corollary1_grid_sides = {10, 20, 30};
    std::vector<std::size_t> theorem1_grid_sides = {20, 40};  // first entry calibrates
    std::size_t theorem1_k = 100;
    std::size_t tail_rate_grid_side = 40;
    std::size_t discrete_continuous_grid_side = 40;
    std::size_t golden_grid_side = 70;
    std::string golden_file;  // empty: golden check not run
};

// Names accepted by the --only filter.
std::vector<std::string> check_names();

// Runs the selected checks (all when `only` is empty; golden only when a
// fixture file is configured). Each row carries the compared quantities.
std::vector<csv::CheckRow> run_checks(const std::vector<std::string>& only,
                                      const VerifyOptions& options, SpectrumCache& cache);

// Individual checks (used directly by the acceptance suite at its sizes).
std::vector<csv::CheckRow> theorem2_rows(const std::vector<std::size_t>& sizes,
                                         std::size_t points_per_size, std::uint64_t seed,
                                         Exec exec);
std::vector<csv::CheckRow> eq13_rows(std::size_t instances, std::size_t max_n,
                                     std::uint64_t seed, Exec exec);
std::vector<csv::CheckRow> optimality_c_rows(std::size_t grid_side, std::size_t k,
                                             std::size_t trials, std::uint64_t seed,
                                             Exec exec);
std::vector<csv::CheckRow> optimality_b_rows(std::size_t grid_side, std::size_t k,
                                             std::size_t quadrature_m, Exec exec);
std::vector<csv::CheckRow> eckart_young_rows(std::size_t n, std::size_t k,
                                             std::size_t trials, std::uint64_t seed,
                                             Exec exec);
std::vector<csv::CheckRow> lemma2_rows(std::size_t grid_side, std::size_t quadrature_m,
                                       std::size_t max_index, Exec exec);
std::vector<csv::CheckRow> corollary1_rows(const std::vector<std::size_t>& grid_sides,
                                           SpectrumCache& cache);
std::vector<csv::CheckRow> theorem1_rows(const std::vector<std::size_t>& grid_sides,
                                         std::size_t k, std::size_t quadrature_m,
                                         SpectrumCache& cache);
std::vector<csv::CheckRow> matern_tail_rate_rows(std::size_t grid_side, SpectrumCache& cache);
std::vector<csv::CheckRow> kernel_psd_rows(std::uint64_t seed);
std::vector<csv::CheckRow> discrete_continuous_rows(std::size_t grid_side,
                                                    std::size_t quadrature_m,
                                                    SpectrumCache& cache);
std::vector<csv::CheckRow> golden_rows(const std::string& fixture_path,
                                       std::size_t grid_side, SpectrumCache& cache);

bool all_pass(const std::vector<csv::CheckRow>& rows);

}  // namespace lrk::verify
